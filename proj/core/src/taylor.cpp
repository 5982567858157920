#include "darboux2d/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace darboux {

namespace {

constexpr std::array<double, Taylor2::kMaxOrder + 1> kFactorial = {1, 1, 2, 6, 24, 120};

using Derivs = std::array<double, Taylor2::kMaxOrder + 1>;

int checked_order(int order) {
  if (order < 0 || order > Taylor2::kMaxOrder) {
    throw std::out_of_range("Taylor2: truncation order out of range");
  }
  return order;
}

}  // namespace

Taylor2::Taylor2(double constant, int order) : order_(checked_order(order)) { c_[0] = constant; }

Taylor2 Taylor2::variable(double at, int axis, int order) {
  Taylor2 t(at, order);
  if (order >= 1) t.c_[axis == 0 ? index(1, 0) : index(0, 1)] = 1.0;
  return t;
}

double Taylor2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) return 0.0;
  return c_[index(i, j)];
}

void Taylor2::set_coeff(int i, int j, double v) {
  if (i < 0 || j < 0 || i + j > order_) throw std::out_of_range("Taylor2::set_coeff");
  c_[index(i, j)] = v;
}

double Taylor2::derivative(int i, int j) const {
  if (i + j > order_) throw std::out_of_range("Taylor2::derivative beyond truncation order");
  return c_[index(i, j)] * kFactorial[i] * kFactorial[j];
}

Taylor2 Taylor2::dx() const {
  if (order_ == 0) throw std::out_of_range("Taylor2::dx of an order-0 polynomial");
  Taylor2 r(0.0, order_ - 1);
  for (int n = 0; n <= r.order_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      r.c_[index(i, j)] = (i + 1) * c_[index(i + 1, j)];
    }
  }
  return r;
}

Taylor2 Taylor2::dy() const {
  if (order_ == 0) throw std::out_of_range("Taylor2::dy of an order-0 polynomial");
  Taylor2 r(0.0, order_ - 1);
  for (int n = 0; n <= r.order_; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      r.c_[index(i, j)] = (j + 1) * c_[index(i, j + 1)];
    }
  }
  return r;
}

Taylor2 Taylor2::truncated(int order) const {
  Taylor2 r = *this;
  r.order_ = std::min(order_, checked_order(order));
  for (int k = index(0, r.order_) + 1; k < kSize; ++k) r.c_[k] = 0.0;
  return r;
}

bool Taylor2::all_finite() const {
  for (int k = 0; k <= index(0, order_); ++k) {
    if (!std::isfinite(c_[k])) return false;
  }
  return true;
}

Taylor2& Taylor2::operator+=(const Taylor2& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= index(0, order_); ++k) c_[k] += o.c_[k];
  for (int k = index(0, order_) + 1; k < kSize; ++k) c_[k] = 0.0;
  return *this;
}

Taylor2& Taylor2::operator-=(const Taylor2& o) {
  order_ = std::min(order_, o.order_);
  for (int k = 0; k <= index(0, order_); ++k) c_[k] -= o.c_[k];
  for (int k = index(0, order_) + 1; k < kSize; ++k) c_[k] = 0.0;
  return *this;
}

Taylor2& Taylor2::operator*=(const Taylor2& o) {
  const int order = std::min(order_, o.order_);
  std::array<double, kSize> out{};
  for (int n = 0; n <= order; ++n) {
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      double acc = 0.0;
      for (int n1 = 0; n1 <= n; ++n1) {
        const int n2 = n - n1;
        const int j1_lo = std::max(0, j - n2);
        const int j1_hi = std::min(j, n1);
        for (int j1 = j1_lo; j1 <= j1_hi; ++j1) {
          const int i1 = n1 - j1;
          acc += c_[index(i1, j1)] * o.c_[index(i - i1, j - j1)];
        }
      }
      out[index(i, j)] = acc;
    }
  }
  c_ = out;
  order_ = order;
  return *this;
}

Taylor2& Taylor2::operator/=(const Taylor2& o) { return *this *= reciprocal(o); }

Taylor2& Taylor2::operator+=(double v) {
  c_[0] += v;
  return *this;
}

Taylor2& Taylor2::operator-=(double v) {
  c_[0] -= v;
  return *this;
}

Taylor2& Taylor2::operator*=(double v) {
  for (int k = 0; k <= index(0, order_); ++k) c_[k] *= v;
  return *this;
}

Taylor2& Taylor2::operator/=(double v) {
  for (int k = 0; k <= index(0, order_); ++k) c_[k] /= v;
  return *this;
}

Taylor2 operator-(const Taylor2& a) { return a * -1.0; }
Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
  Taylor2 r = a;
  return r *= b;
}
Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }
Taylor2 operator+(Taylor2 a, double b) { return a += b; }
Taylor2 operator+(double a, Taylor2 b) { return b += a; }
Taylor2 operator-(Taylor2 a, double b) { return a -= b; }
Taylor2 operator-(double a, const Taylor2& b) {
  Taylor2 r = -b;
  return r += a;
}
Taylor2 operator*(Taylor2 a, double b) { return a *= b; }
Taylor2 operator*(double a, Taylor2 b) { return b *= a; }
Taylor2 operator/(Taylor2 a, double b) { return a /= b; }
Taylor2 operator/(double a, const Taylor2& b) { return reciprocal(b) * a; }

Taylor2 compose(const Taylor2& a, const Derivs& derivs) {
  const int order = a.order();
  Taylor2 delta = a;
  delta.set_coeff(0, 0, 0.0);
  // Horner in the nilpotent increment: sum_k g^(k)/k! delta^k.
  Taylor2 r(derivs[order] / kFactorial[order], order);
  for (int k = order - 1; k >= 0; --k) {
    r *= delta;
    r += derivs[k] / kFactorial[k];
  }
  return r;
}

Taylor2 exp(const Taylor2& a) {
  Derivs d{};
  d.fill(std::exp(a.value()));
  return compose(a, d);
}

Taylor2 log_abs(const Taylor2& a) {
  const double v = a.value();
  Derivs d{};
  d[0] = std::log(std::fabs(v));
  for (int k = 1; k <= Taylor2::kMaxOrder; ++k) {
    // (-1)^(k-1) (k-1)! / v^k
    d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * kFactorial[k - 1] / std::pow(v, k);
  }
  return compose(a, d);
}

Taylor2 log(const Taylor2& a) {
  if (!(a.value() > 0.0)) {
    Taylor2 r(std::log(a.value()), a.order());
    return r;  // NaN/-inf propagate like std::log
  }
  return log_abs(a);
}

Taylor2 pow(const Taylor2& a, double exponent) {
  const double v = a.value();
  Derivs d{};
  double falling = 1.0;
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) {
    d[k] = falling * std::pow(v, exponent - k);
    falling *= exponent - k;
  }
  return compose(a, d);
}

Taylor2 sqrt(const Taylor2& a) { return pow(a, 0.5); }

Taylor2 ipow(const Taylor2& a, int exponent) {
  if (exponent < 0) return reciprocal(ipow(a, -exponent));
  Taylor2 r(1.0, a.order());
  for (int k = 0; k < exponent; ++k) r *= a;
  return r;
}

Taylor2 reciprocal(const Taylor2& a) {
  const double v = a.value();
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) {
    // (-1)^k k! / v^(k+1)
    d[k] = ((k % 2 == 0) ? 1.0 : -1.0) * kFactorial[k] / std::pow(v, k + 1);
  }
  return compose(a, d);
}

Taylor2 sin(const Taylor2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle = {s, c, -s, -c};
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) d[k] = cycle[k % 4];
  return compose(a, d);
}

Taylor2 cos(const Taylor2& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const std::array<double, 4> cycle = {c, -s, -c, s};
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) d[k] = cycle[k % 4];
  return compose(a, d);
}

Taylor2 sinh(const Taylor2& a) {
  const double s = std::sinh(a.value());
  const double c = std::cosh(a.value());
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) d[k] = (k % 2 == 0) ? s : c;
  return compose(a, d);
}

Taylor2 cosh(const Taylor2& a) {
  const double s = std::sinh(a.value());
  const double c = std::cosh(a.value());
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) d[k] = (k % 2 == 0) ? c : s;
  return compose(a, d);
}

Taylor2 tanh(const Taylor2& a) {
  // d^k tanh = P_k(t) with P_0 = t and P_{k+1} = P_k'(t) (1 - t^2).
  const double t = std::tanh(a.value());
  std::array<double, Taylor2::kMaxOrder + 3> poly{};
  poly[1] = 1.0;
  Derivs d{};
  for (int k = 0; k <= Taylor2::kMaxOrder; ++k) {
    double v = 0.0;
    for (int m = static_cast<int>(poly.size()) - 1; m >= 0; --m) v = v * t + poly[m];
    d[k] = v;
    std::array<double, Taylor2::kMaxOrder + 3> next{};
    for (int m = 1; m < static_cast<int>(poly.size()); ++m) {
      const double dm = m * poly[m];  // coefficient of t^(m-1) in P'
      next[m - 1] += dm;
      if (m + 1 < static_cast<int>(next.size())) next[m + 1] -= dm;
    }
    poly = next;
  }
  return compose(a, d);
}

}  // namespace darboux
