#pragma once

#include <cmath>
#include <cstddef>

#include <Eigen/Core>

namespace cmech {

inline double value(double x) { return x; }

/// Forward-mode dual number carrying a dense gradient with respect to
/// every coordinate of the chart input. Only the operations used by the
/// closed-form coordinate maps are provided.
class Dual {
 public:
  Dual() : v_(0.0) {}
  Dual(double v) : v_(v) {}  // NOLINT: implicit promotion of constants
  Dual(double v, Eigen::VectorXd d) : v_(v), d_(std::move(d)) {}

  /// Seed variable `index` of a `dim`-dimensional input.
  static Dual variable(double v, std::size_t index, std::size_t dim) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    d[static_cast<Eigen::Index>(index)] = 1.0;
    return {v, std::move(d)};
  }

  double val() const { return v_; }
  // Constants carry an empty gradient; it stands for zero of any size.
  const Eigen::VectorXd& grad() const { return d_; }

  Dual& operator+=(const Dual& o) { d_ = combine(1.0, d_, 1.0, o.d_); v_ += o.v_; return *this; }
  Dual& operator-=(const Dual& o) { d_ = combine(1.0, d_, -1.0, o.d_); v_ -= o.v_; return *this; }
  Dual& operator*=(const Dual& o) { d_ = combine(o.v_, d_, v_, o.d_); v_ *= o.v_; return *this; }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v_;
    d_ = combine(inv, d_, -v_ * inv * inv, o.d_);
    v_ *= inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return {-a.v_, a.d_.size() ? Eigen::VectorXd(-a.d_) : Eigen::VectorXd()}; }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v_ < b.v_; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v_ > b.v_; }

  friend double value(const Dual& a) { return a.v_; }

  friend Dual sqrt(const Dual& a) {
    const double s = std::sqrt(a.v_);
    return a.chain(s, 0.5 / s);
  }
  friend Dual sin(const Dual& a) { return a.chain(std::sin(a.v_), std::cos(a.v_)); }
  friend Dual cos(const Dual& a) { return a.chain(std::cos(a.v_), -std::sin(a.v_)); }
  friend Dual atan2(const Dual& y, const Dual& x) {
    const double r2 = x.v_ * x.v_ + y.v_ * y.v_;
    return {std::atan2(y.v_, x.v_), combine(x.v_ / r2, y.d_, -y.v_ / r2, x.d_)};
  }

 private:
  Dual chain(double v, double dv) const {
    return {v, d_.size() ? Eigen::VectorXd(dv * d_) : Eigen::VectorXd()};
  }

  static Eigen::VectorXd combine(double a, const Eigen::VectorXd& x, double b,
                                 const Eigen::VectorXd& y) {
    if (x.size() == 0 && y.size() == 0) return {};
    if (x.size() == 0) return b * y;
    if (y.size() == 0) return a * x;
    return a * x + b * y;
  }

  double v_;
  Eigen::VectorXd d_;
};

}  // namespace cmech
