#include "darboux2d/recovery.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "darboux2d/errors.hpp"

namespace darboux {

namespace {

constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

std::string where(Point2 p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

void require_domain(const ScalarField2& f, Point2 p) {
  if (!f.in_domain(p)) throw DomainError(where(p) + " outside the domain of " + f.name());
}

}  // namespace

QGradient q_gradient(const ScalarField2& y, const ScalarField2& yh, Point2 p) {
  require_domain(y, p);
  require_domain(yh, p);
  const Taylor2 a = y.taylor(p, 1);
  const Taylor2 b = yh.taylor(p, 1);
  QGradient g;
  g.qy = a.coeff(1, 0) * b.value() - a.value() * b.coeff(1, 0);
  g.qx = -(a.coeff(0, 1) * b.value() - a.value() * b.coeff(0, 1));
  return g;
}

std::pair<Taylor2, Taylor2> q_gradient_taylor(const ScalarField2& y, const ScalarField2& yh, Point2 p,
                                              int order) {
  const Taylor2 a = y.taylor(p, order + 1);
  const Taylor2 b = yh.taylor(p, order + 1);
  Taylor2 qx = -(a.dy() * b - a * b.dy());
  Taylor2 qy = a.dx() * b - a * b.dx();
  return {qx.truncated(order), qy.truncated(order)};
}

struct NonlocalPotential::Integrator {
  ScalarField2 y;
  ScalarField2 yh;
  Point2 base;
  int panels_per_unit = kDefaultPanelsPerUnit;
  ScalarField2::Domain keep_out;
  PathOrder default_order = PathOrder::kAuto;

  struct Direction {
    std::vector<double> cumulative{0.0};  // integral from the line start to knot k
    long blocked_panel = -1;
    std::string reason;
  };
  struct Line {
    Direction forward, backward;
  };

  std::mutex mutex;
  // Lattice lines through base + (i, j) / n, all starting on the base axes.
  std::map<long, Line> rows;     // keyed by j, running along x from base.x
  std::map<long, Line> columns;  // keyed by i, running along y from base.y

  double lattice_x(long i) const { return base.x + static_cast<double>(i) / panels_per_unit; }
  double lattice_y(long j) const { return base.y + static_cast<double>(j) / panels_per_unit; }

  // Q_x on rows (axis 0), Q_y on columns (axis 1).
  double integrand(Point2 p, int axis) const {
    if (!y.in_domain(p) || !yh.in_domain(p)) {
      throw PathBlockedError("integration path leaves the domain at " + where(p));
    }
    if (keep_out && keep_out(p)) {
      throw PathBlockedError("integration path enters a masked region at " + where(p));
    }
    double v = 0.0;
    try {
      const QGradient g = q_gradient(y, yh, p);
      v = axis == 0 ? g.qx : g.qy;
    } catch (const PathBlockedError&) {
      throw;
    } catch (const Error& e) {
      throw PathBlockedError(std::string("integrand undefined at ") + where(p) + ": " + e.what());
    }
    if (!std::isfinite(v)) throw PathBlockedError("non-finite integrand at " + where(p));
    return v;
  }

  // Gauss-Legendre panel along the axis-parallel segment from a to b.
  double panel(int axis, double fixed, double a, double b) const {
    if (a == b) return 0.0;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double t = mid + half * kGaussNodes[k];
      const Point2 p = axis == 0 ? Point2{t, fixed} : Point2{fixed, t};
      acc += kGaussWeights[k] * integrand(p, axis);
    }
    return half * acc;
  }

  // Integral along lattice line `key` from its start to knot `target`.
  double lattice_integral(int axis, long key, long target) {
    if (target == 0) return 0.0;
    const int dir = target > 0 ? 1 : -1;
    const long full = dir * target;
    std::lock_guard<std::mutex> lock(mutex);
    Line& line = (axis == 0 ? rows : columns)[key];
    Direction& d = dir > 0 ? line.forward : line.backward;
    if (d.blocked_panel >= 0 && full > d.blocked_panel) throw PathBlockedError(d.reason);
    const double fixed = axis == 0 ? lattice_y(key) : lattice_x(key);
    auto at = [&](long k) { return axis == 0 ? lattice_x(dir * k) : lattice_y(dir * k); };
    while (static_cast<long>(d.cumulative.size()) - 1 < full) {
      const long m = static_cast<long>(d.cumulative.size()) - 1;
      try {
        d.cumulative.push_back(d.cumulative.back() + panel(axis, fixed, at(m), at(m + 1)));
      } catch (const PathBlockedError& e) {
        d.blocked_panel = m;
        d.reason = e.what();
        throw;
      }
    }
    return d.cumulative[static_cast<std::size_t>(full)];
  }

  // The path runs through the lattice node nearest to p and finishes with a
  // sub-panel jog in the same order as the main legs.
  double integral(Point2 p, PathOrder order) {
    const long i = std::lround((p.x - base.x) * panels_per_unit);
    const long j = std::lround((p.y - base.y) * panels_per_unit);
    const double xi = lattice_x(i);
    const double yj = lattice_y(j);
    switch (order) {
      case PathOrder::kHorizontalFirst:
        return lattice_integral(0, 0, i) + lattice_integral(1, i, j) + panel(0, yj, xi, p.x) +
               panel(1, p.x, yj, p.y);
      case PathOrder::kVerticalFirst:
        return lattice_integral(1, 0, j) + lattice_integral(0, j, i) + panel(1, xi, yj, p.y) +
               panel(0, p.y, xi, p.x);
      case PathOrder::kAuto:
        try {
          return integral(p, PathOrder::kHorizontalFirst);
        } catch (const PathBlockedError&) {
          return integral(p, PathOrder::kVerticalFirst);
        }
    }
    return 0.0;
  }
};

NonlocalPotential::NonlocalPotential(std::shared_ptr<Integrator> integrator, double constant,
                                     double compat)
    : integrator_(std::move(integrator)), constant_(constant), compat_residual_(compat) {
  auto integ = integrator_;
  const double c = constant_;
  const std::string name = "Q[" + integ->y.name() + "," + integ->yh.name() + "]";

  ScalarField2::Evaluator value = [integ, c](Point2 p) {
    return c + integ->integral(p, integ->default_order);
  };
  ScalarField2::TaylorEvaluator taylor = [integ, c](Point2 p, int order) {
    Taylor2 q(c + integ->integral(p, integ->default_order), order);
    if (order == 0) return q;
    const auto [qx, qy] = q_gradient_taylor(integ->y, integ->yh, p, order - 1);
    for (int n = 1; n <= order; ++n) {
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        q.set_coeff(i, j, i >= 1 ? qx.coeff(i - 1, j) / i : qy.coeff(0, j - 1) / j);
      }
    }
    return q;
  };
  ScalarField2::Domain domain = [integ](Point2 p) {
    return integ->y.in_domain(p) && integ->yh.in_domain(p) && !(integ->keep_out && integ->keep_out(p));
  };
  const int ay = integ->y.analytic_order();
  const int ayh = integ->yh.analytic_order();
  const int order = (ay < 0 || ayh < 0) ? -1 : std::min(ay, ayh);
  field_ = ScalarField2(name, std::move(value), std::move(taylor), order, std::move(domain));
}

Point2 NonlocalPotential::base_point() const { return integrator_->base; }
const std::string& NonlocalPotential::source_y() const { return integrator_->y.name(); }
const std::string& NonlocalPotential::source_yh() const { return integrator_->yh.name(); }
int NonlocalPotential::panels_per_unit() const { return integrator_->panels_per_unit; }

double NonlocalPotential::integral(Point2 p, PathOrder order) const {
  return integrator_->integral(p, order);
}

void NonlocalPotential::check_paths(const GridSpec& spec, const ScalarField2::Domain& region) const {
  spec.validate();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    if (!field_.in_domain(p)) continue;
    integrator_->integral(p, integrator_->default_order);
  }
}

NonlocalPotential NonlocalPotential::with_constant(double constant) const {
  return NonlocalPotential(integrator_, constant, compat_residual_);
}

NonlocalPotential recover_q(const ScalarField2& y, const ScalarField2& yh, Point2 base_point,
                            double constant, int quadrature_n, const RecoveryOptions& options) {
  if (quadrature_n <= 0) throw ParamError("quadrature_n must be positive");
  require_domain(y, base_point);
  require_domain(yh, base_point);
  if (options.keep_out && options.keep_out(base_point)) {
    throw PathBlockedError("base point " + where(base_point) + " lies in a masked region");
  }

  auto integ = std::make_shared<NonlocalPotential::Integrator>();
  integ->y = y;
  integ->yh = yh;
  integ->base = base_point;
  integ->panels_per_unit = quadrature_n;
  integ->keep_out = options.keep_out;
  integ->default_order = options.path;

  GridSpec probe;
  if (options.probe) {
    probe = *options.probe;
  } else {
    probe = {base_point.x - 0.5, base_point.x + 0.5, base_point.y - 0.5, base_point.y + 0.5, 5, 5};
  }
  probe.validate();
  double compat = 0.0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const Point2 p = probe.node(k);
    if (!y.in_domain(p) || !yh.in_domain(p)) continue;
    if (options.keep_out && options.keep_out(p)) continue;
    try {
      const auto [qx, qy] = q_gradient_taylor(y, yh, p, 1);
      const double curl = std::fabs(qx.coeff(0, 1) - qy.coeff(1, 0));
      if (std::isfinite(curl)) compat = std::max(compat, curl);
    } catch (const Error&) {
      continue;
    }
  }
  return NonlocalPotential(std::move(integ), constant, compat);
}

double compatibility_residual(const ScalarField2& y, const ScalarField2& yh, const GridSpec& spec,
                              const ScalarField2::Domain& region) {
  spec.validate();
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    if (!y.in_domain(p) || !yh.in_domain(p)) continue;
    double curl = 0.0;
    try {
      const auto [qx, qy] = q_gradient_taylor(y, yh, p, 1);
      curl = std::fabs(qx.coeff(0, 1) - qy.coeff(1, 0));
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(curl)) continue;
    worst = std::max(worst, curl);
    ++used;
  }
  if (used == 0) throw EmptyMaskError("compatibility_residual: no usable nodes");
  return worst;
}

}  // namespace darboux
