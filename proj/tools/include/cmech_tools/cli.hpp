#pragma once

#include <iosfwd>

namespace cmech::cli {

/// Process exit codes.
enum Exit : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kDomain = 3,
};

/// Run the command line with explicit output and diagnostic streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmech::cli
