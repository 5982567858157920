#include "darboux2d/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "darboux2d/errors.hpp"

namespace darboux {

namespace {

std::string describe(Point2 p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

double resolve_step(Point2 p, double fd_step) { return fd_step > 0.0 ? fd_step : default_fd_step(p); }

// Central-difference jet truncated at `max_order` (0..3).
Jet3 fd_jet(const ScalarField2& f, Point2 p, double h, int max_order) {
  auto at = [&](int a, int b) {
    const Point2 q{p.x + a * h, p.y + b * h};
    if (!f.in_domain(q)) {
      throw DomainError("stencil point " + describe(q) + " outside the domain of " + f.name());
    }
    const double v = f(q);
    if (!std::isfinite(v)) {
      throw NonFiniteError("non-finite sample of " + f.name() + " at " + describe(q));
    }
    return v;
  };

  Jet3 j;
  const double c = at(0, 0);
  j.value = c;
  if (max_order < 1) return j;

  const double xp = at(1, 0), xm = at(-1, 0), yp = at(0, 1), ym = at(0, -1);
  j.x = (xp - xm) / (2 * h);
  j.y = (yp - ym) / (2 * h);
  if (max_order < 2) return j;

  const double pp = at(1, 1), pm = at(1, -1), mp = at(-1, 1), mm = at(-1, -1);
  j.xx = (xp - 2 * c + xm) / (h * h);
  j.yy = (yp - 2 * c + ym) / (h * h);
  j.xy = (pp - pm - mp + mm) / (4 * h * h);
  if (max_order < 3) return j;

  const double x2p = at(2, 0), x2m = at(-2, 0), y2p = at(0, 2), y2m = at(0, -2);
  const double h3 = h * h * h;
  j.xxx = (x2p - 2 * xp + 2 * xm - x2m) / (2 * h3);
  j.yyy = (y2p - 2 * yp + 2 * ym - y2m) / (2 * h3);
  // d/dy of the second x-difference, d/dx of the second y-difference.
  j.xxy = ((pp - 2 * yp + mp) - (pm - 2 * ym + mm)) / (2 * h3);
  j.xyy = ((pp - 2 * xp + pm) - (mp - 2 * xm + mm)) / (2 * h3);
  return j;
}

}  // namespace

Jet3 Jet3::from_taylor(const Taylor2& t) {
  if (t.order() < 3) throw std::invalid_argument("Jet3::from_taylor needs an order-3 polynomial");
  Jet3 j;
  j.value = t.derivative(0, 0);
  j.x = t.derivative(1, 0);
  j.y = t.derivative(0, 1);
  j.xx = t.derivative(2, 0);
  j.xy = t.derivative(1, 1);
  j.yy = t.derivative(0, 2);
  j.xxx = t.derivative(3, 0);
  j.xxy = t.derivative(2, 1);
  j.xyy = t.derivative(1, 2);
  j.yyy = t.derivative(0, 3);
  j.valid = t.truncated(3).all_finite();
  return j;
}

Taylor2 Jet3::to_taylor(int order) const {
  if (order > 3) throw std::invalid_argument("Jet3::to_taylor: order above 3");
  Taylor2 t(value, order);
  if (order >= 1) {
    t.set_coeff(1, 0, x);
    t.set_coeff(0, 1, y);
  }
  if (order >= 2) {
    t.set_coeff(2, 0, xx / 2);
    t.set_coeff(1, 1, xy);
    t.set_coeff(0, 2, yy / 2);
  }
  if (order >= 3) {
    t.set_coeff(3, 0, xxx / 6);
    t.set_coeff(2, 1, xxy / 2);
    t.set_coeff(1, 2, xyy / 2);
    t.set_coeff(0, 3, yyy / 6);
  }
  return t;
}

double default_fd_step(Point2 p) { return 1e-4 * std::max({1.0, std::fabs(p.x), std::fabs(p.y)}); }

ScalarField2::ScalarField2() : ScalarField2(constant_field(0.0, "0")) {}

ScalarField2::ScalarField2(std::string name, Evaluator value, Domain domain)
    : name_(std::move(name)), value_(std::move(value)), domain_(std::move(domain)) {}

ScalarField2::ScalarField2(std::string name, Evaluator value, TaylorEvaluator taylor,
                           int analytic_order, Domain domain)
    : name_(std::move(name)),
      value_(std::move(value)),
      taylor_(std::move(taylor)),
      analytic_order_(taylor_ ? std::min(analytic_order, Taylor2::kMaxOrder) : -1),
      domain_(std::move(domain)) {
  if (analytic_order_ < 0) {
    taylor_ = nullptr;
    analytic_order_ = -1;
  }
}

bool ScalarField2::in_domain(Point2 p) const {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  return domain_ ? domain_(p) : true;
}

Taylor2 ScalarField2::taylor(Point2 p, int order, double fd_step) const {
  if (order <= analytic_order_) return taylor_(p, order);
  if (order == 0) return Taylor2(value_(p), 0);
  if (order > 3) {
    throw std::out_of_range("field " + name_ + ": order " + std::to_string(order) +
                            " requested beyond its analytic jets");
  }
  return fd_jet(*this, p, resolve_step(p, fd_step), order).to_taylor(order);
}

ScalarField2 ScalarField2::renamed(std::string name) const {
  ScalarField2 f = *this;
  f.name_ = std::move(name);
  return f;
}

ScalarField2 ScalarField2::without_jets() const {
  return ScalarField2(name_, value_, domain_);
}

ScalarField2 ScalarField2::restricted(Domain extra) const {
  ScalarField2 f = *this;
  if (!extra) return f;
  if (!domain_) {
    f.domain_ = std::move(extra);
  } else {
    f.domain_ = [a = domain_, b = std::move(extra)](Point2 p) { return a(p) && b(p); };
  }
  return f;
}

ScalarField2 constant_field(double c, std::string name) {
  if (name.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << c;
    name = os.str();
  }
  return make_field(std::move(name), [c](auto x, auto) { return 0.0 * x + c; });
}

ScalarField2 combine_fields(std::string name, std::vector<ScalarField2> inputs,
                            std::vector<int> losses, Combiner combine,
                            ScalarField2::Domain extra) {
  if (inputs.size() != losses.size()) {
    throw std::invalid_argument("combine_fields: one loss per input required");
  }
  int order = Taylor2::kMaxOrder;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const int a = inputs[k].analytic_order();
    order = (a < 0) ? -1 : std::min(order, a - losses[k]);
    if (order < 0) break;
  }

  auto shared = std::make_shared<const std::pair<std::vector<ScalarField2>, std::vector<int>>>(
      std::move(inputs), std::move(losses));
  auto combine_ptr = std::make_shared<const Combiner>(std::move(combine));

  ScalarField2::Evaluator value = [shared, combine_ptr](Point2 p) {
    const auto& [fields, loss] = *shared;
    std::vector<Taylor2> polys;
    polys.reserve(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      polys.push_back(loss[k] == 0 ? Taylor2(fields[k](p), 0) : fields[k].taylor(p, loss[k]));
    }
    return (*combine_ptr)(polys).value();
  };
  ScalarField2::TaylorEvaluator taylor = [shared, combine_ptr](Point2 p, int out_order) {
    const auto& [fields, loss] = *shared;
    std::vector<Taylor2> polys;
    polys.reserve(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      polys.push_back(fields[k].taylor(p, out_order + loss[k]));
    }
    return (*combine_ptr)(polys).truncated(out_order);
  };
  ScalarField2::Domain domain = [shared, extra = std::move(extra)](Point2 p) {
    for (const auto& f : shared->first) {
      if (!f.in_domain(p)) return false;
    }
    return extra ? extra(p) : true;
  };
  return ScalarField2(std::move(name), std::move(value), std::move(taylor), order,
                      std::move(domain));
}

namespace {

ScalarField2 binary(const ScalarField2& a, const ScalarField2& b, const char* op,
                    Taylor2 (*fn)(const Taylor2&, const Taylor2&)) {
  return combine_fields("(" + a.name() + op + b.name() + ")", {a, b}, {0, 0},
                        [fn](std::span<const Taylor2> t) { return fn(t[0], t[1]); });
}

ScalarField2 unary(const ScalarField2& a, const std::string& label,
                   std::function<Taylor2(const Taylor2&)> fn) {
  return combine_fields(label + "(" + a.name() + ")", {a}, {0},
                        [fn = std::move(fn)](std::span<const Taylor2> t) { return fn(t[0]); });
}

}  // namespace

ScalarField2 operator+(const ScalarField2& a, const ScalarField2& b) {
  return binary(a, b, "+", [](const Taylor2& x, const Taylor2& y) { return x + y; });
}
ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b) {
  return binary(a, b, "-", [](const Taylor2& x, const Taylor2& y) { return x - y; });
}
ScalarField2 operator*(const ScalarField2& a, const ScalarField2& b) {
  return binary(a, b, "*", [](const Taylor2& x, const Taylor2& y) { return x * y; });
}
ScalarField2 operator/(const ScalarField2& a, const ScalarField2& b) {
  return binary(a, b, "/", [](const Taylor2& x, const Taylor2& y) { return x / y; });
}
ScalarField2 operator*(double c, const ScalarField2& a) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return unary(a, os.str() + "*", [c](const Taylor2& t) { return c * t; });
}
ScalarField2 operator-(const ScalarField2& a) {
  return unary(a, "-", [](const Taylor2& t) { return -t; });
}
ScalarField2 exp(const ScalarField2& a) {
  return unary(a, "exp", [](const Taylor2& t) { return exp(t); });
}
ScalarField2 log_abs(const ScalarField2& a) {
  return unary(a, "log_abs", [](const Taylor2& t) { return log_abs(t); });
}
ScalarField2 reciprocal(const ScalarField2& a) {
  return unary(a, "1/", [](const Taylor2& t) { return reciprocal(t); });
}

Jet3 jet3_at(const ScalarField2& f, Point2 p, double fd_step) {
  if (!f.in_domain(p)) throw DomainError(describe(p) + " outside the domain of " + f.name());
  if (f.has_analytic_jets(3)) {
    Jet3 j = Jet3::from_taylor(f.taylor(p, 3));
    if (!std::isfinite(j.value)) {
      throw NonFiniteError("non-finite value of " + f.name() + " at " + describe(p));
    }
    return j;
  }
  return fd_jet(f, p, resolve_step(p, fd_step), 3);
}

double laplacian_at(const ScalarField2& f, Point2 p, double fd_step) {
  if (!f.in_domain(p)) throw DomainError(describe(p) + " outside the domain of " + f.name());
  if (f.has_analytic_jets(2)) {
    const Taylor2 t = f.taylor(p, 2);
    return t.derivative(2, 0) + t.derivative(0, 2);
  }
  const Jet3 j = fd_jet(f, p, resolve_step(p, fd_step), 2);
  return j.xx + j.yy;
}

Jet3 fd_jet3(const ScalarField2& f, Point2 p, double fd_step) {
  return fd_jet(f, p, resolve_step(p, fd_step), 3);
}

double fd_mixed_xy(const ScalarField2& f, Point2 p, double fd_step, bool x_first) {
  const double h = resolve_step(p, fd_step);
  auto dx = [&](Point2 q) { return (f({q.x + h, q.y}) - f({q.x - h, q.y})) / (2 * h); };
  auto dy = [&](Point2 q) { return (f({q.x, q.y + h}) - f({q.x, q.y - h})) / (2 * h); };
  if (x_first) return (dx({p.x, p.y + h}) - dx({p.x, p.y - h})) / (2 * h);
  return (dy({p.x + h, p.y}) - dy({p.x - h, p.y})) / (2 * h);
}

}  // namespace darboux
