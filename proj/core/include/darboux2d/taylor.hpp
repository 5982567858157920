#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace darboux {

/**
 * Truncated bivariate Taylor polynomial
 *
 *   f(x0 + dx, y0 + dy) ~ sum_{i+j <= order} c_ij dx^i dy^j
 *
 * used as a forward-mode jet type. Closed-form fields are written once as
 * generic lambdas and evaluated either with `double` or with Taylor2, which
 * yields exact partial derivatives up to `kMaxOrder`.
 *
 * The truncation order is a runtime property so that callers only pay for
 * the derivatives they need. Binary operations truncate to the smaller order
 * of the two operands.
 */
class Taylor2 {
 public:
  static constexpr int kMaxOrder = 5;
  static constexpr int kSize = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  Taylor2() = default;
  Taylor2(double constant, int order);

  /// The coordinate function (axis 0 = x, axis 1 = y) expanded about `at`.
  static Taylor2 variable(double at, int axis, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }

  /// Coefficient of dx^i dy^j (zero beyond the truncation order).
  double coeff(int i, int j) const;
  void set_coeff(int i, int j, double v);

  /// Partial derivative d^(i+j) f / dx^i dy^j at the expansion point.
  double derivative(int i, int j) const;

  /// Partial derivative polynomials; the order drops by one.
  Taylor2 dx() const;
  Taylor2 dy() const;

  Taylor2 truncated(int order) const;
  bool all_finite() const;

  Taylor2& operator+=(const Taylor2& o);
  Taylor2& operator-=(const Taylor2& o);
  Taylor2& operator*=(const Taylor2& o);
  Taylor2& operator/=(const Taylor2& o);
  Taylor2& operator+=(double v);
  Taylor2& operator-=(double v);
  Taylor2& operator*=(double v);
  Taylor2& operator/=(double v);

  static constexpr int index(int i, int j) {
    const int n = i + j;
    return n * (n + 1) / 2 + j;
  }

 private:
  std::array<double, kSize> c_{};
  int order_ = 0;
};

Taylor2 operator-(const Taylor2& a);
Taylor2 operator+(Taylor2 a, const Taylor2& b);
Taylor2 operator-(Taylor2 a, const Taylor2& b);
Taylor2 operator*(const Taylor2& a, const Taylor2& b);
Taylor2 operator/(const Taylor2& a, const Taylor2& b);
Taylor2 operator+(Taylor2 a, double b);
Taylor2 operator+(double a, Taylor2 b);
Taylor2 operator-(Taylor2 a, double b);
Taylor2 operator-(double a, const Taylor2& b);
Taylor2 operator*(Taylor2 a, double b);
Taylor2 operator*(double a, Taylor2 b);
Taylor2 operator/(Taylor2 a, double b);
Taylor2 operator/(double a, const Taylor2& b);

/// g(a) for a scalar function g given its derivatives g^(k)(a.value()),
/// k = 0..a.order(), in `derivs`.
Taylor2 compose(const Taylor2& a, const std::array<double, Taylor2::kMaxOrder + 1>& derivs);

Taylor2 exp(const Taylor2& a);
Taylor2 log(const Taylor2& a);
/// ln|a|; same derivatives as ln a, defined for negative a as well.
Taylor2 log_abs(const Taylor2& a);
Taylor2 sqrt(const Taylor2& a);
Taylor2 pow(const Taylor2& a, double exponent);
Taylor2 ipow(const Taylor2& a, int exponent);
Taylor2 reciprocal(const Taylor2& a);
Taylor2 sin(const Taylor2& a);
Taylor2 cos(const Taylor2& a);
Taylor2 sinh(const Taylor2& a);
Taylor2 cosh(const Taylor2& a);
Taylor2 tanh(const Taylor2& a);


// Scalar counterparts so generic closed forms compile for `double`.
inline double log_abs(double a) { return std::log(std::fabs(a)); }
inline double reciprocal(double a) { return 1.0 / a; }
inline double ipow(double a, int exponent) {
  double r = 1.0;
  for (int k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) r *= a;
  return exponent < 0 ? 1.0 / r : r;
}

}  // namespace darboux
