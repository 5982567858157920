#include "darboux2d/moutard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "darboux2d/errors.hpp"

namespace darboux {

namespace {

Taylor2 laplacian(const Taylor2& t) { return t.dx().dx() + t.dy().dy(); }

void require_domain(const ScalarField2& f, Point2 p) {
  if (!f.in_domain(p)) {
    throw DomainError("point (" + format_double(p.x) + ", " + format_double(p.y) +
                      ") outside the domain of " + f.name());
  }
}

void check_seed(const Taylor2& yh, Point2 p) {
  const double scale = std::max({1.0, std::fabs(yh.coeff(1, 0)), std::fabs(yh.coeff(0, 1))});
  if (!(std::fabs(yh.value()) >= kZeroSeedTolerance * scale)) {
    throw ZeroSeedError("seed vanishes at (" + format_double(p.x) + ", " + format_double(p.y) + ")");
  }
}

void check_q(double q, double scale) {
  if (!(std::fabs(q) >= kZeroQTolerance * std::max(1.0, scale))) {
    throw ZeroQError("Q12 vanishes");
  }
}

Taylor2 drift(const Taylor2& h) {
  const Taylor2 hx = h.dx();
  const Taylor2 hy = h.dy();
  return -laplacian(h) + hx * hx + hy * hy;
}

Taylor2 moutard_shift(const Taylor2& yh) {
  const Taylor2 gx = yh.dx();
  const Taylor2 gy = yh.dy();
  return -2.0 * (laplacian(yh) * yh - gx * gx - gy * gy) / (yh * yh);
}

Taylor2 twofold_terms(const Taylor2& y1, const Taylor2& y2, const Taylor2& q) {
  const Taylor2 y1x = y1.dx(), y1y = y1.dy();
  const Taylor2 y2x = y2.dx(), y2y = y2.dy();
  const Taylor2 a = y2x * y1 - y2 * y1x;
  const Taylor2 b = y2y * y1 - y2 * y1y;
  return 4.0 * (y2y * y1x - y2x * y1y) / q + 2.0 * (a * a + b * b) / (q * q);
}

}  // namespace

const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kMoutard:
      return "moutard";
    case TransformKind::kTwofold:
      return "twofold";
    case TransformKind::kNonlocalShift:
      return "nonlocal_shift";
  }
  return "unknown";
}

TransformRecord& TransformRecord::add(TransformKind kind, std::vector<std::string> seeds,
                                      ParamList step_params) {
  steps.push_back({kind, std::move(seeds), std::move(step_params)});
  return *this;
}

std::optional<double> TransformRecord::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double drift_potential(const ScalarField2& h, Point2 p) {
  require_domain(h, p);
  return drift(h.taylor(p, 2)).value();
}

ScalarField2 drift_potential_field(const ScalarField2& h) {
  return combine_fields("drift[" + h.name() + "]", {h}, {2},
                        [](std::span<const Taylor2> t) { return drift(t[0]); });
}

ScalarField2 substitution_y_from_w(const ScalarField2& w, const ScalarField2& h) {
  return (w * exp(h)).renamed(w.name() + "*e^" + h.name());
}

ScalarField2 substitution_w_from_y(const ScalarField2& y, const ScalarField2& h) {
  return (y * exp(-h)).renamed(y.name() + "*e^-" + h.name());
}

double moutard_potential(const ScalarField2& u, const ScalarField2& yh, Point2 p) {
  require_domain(u, p);
  require_domain(yh, p);
  const Taylor2 seed = yh.taylor(p, 2);
  check_seed(seed, p);
  return u(p) + moutard_shift(seed).value();
}

ScalarField2 moutard_potential_field(const ScalarField2& u, const ScalarField2& yh) {
  return combine_fields(
      "moutard[" + u.name() + ";" + yh.name() + "]", {u, yh}, {0, 2},
      [](std::span<const Taylor2> t) {
        if (!(std::fabs(t[1].value()) >= kZeroSeedTolerance *
                                              std::max({1.0, std::fabs(t[1].coeff(1, 0)),
                                                        std::fabs(t[1].coeff(0, 1))}))) {
          throw ZeroSeedError("seed vanishes");
        }
        return t[0] + moutard_shift(t[1]);
      });
}

std::pair<ScalarField2, ScalarField2> moutard_pair_map(const ScalarField2& w, const ScalarField2& q,
                                                       const ScalarField2& h) {
  (void)w;  // the new pair depends on W only through Q
  ScalarField2 w_new = (exp(2.0 * h) * q).renamed("e^2" + h.name() + "*" + q.name());
  ScalarField2 y_new = (exp(h) * q).renamed("e^" + h.name() + "*" + q.name());
  return {std::move(w_new), std::move(y_new)};
}

ScalarField2 moutard_solution(const ScalarField2& y, const ScalarField2& yh, const NonlocalPotential& q) {
  if (q.compat_residual() > kCompatibilityTolerance) {
    throw CompatibilityError("Q of (" + y.name() + ", " + yh.name() + ") has curl defect " +
                             format_double(q.compat_residual()));
  }
  return combine_fields("(" + q.field().name() + "/" + yh.name() + ")", {q.field(), yh}, {0, 0},
                        [](std::span<const Taylor2> t) {
                          if (t[1].value() == 0.0) throw ZeroSeedError("seed vanishes");
                          return t[0] / t[1];
                        });
}

ScalarField2 moutard_simple_solution(const ScalarField2& yh) {
  return combine_fields("1/" + yh.name(), {yh}, {0}, [](std::span<const Taylor2> t) {
    if (t[0].value() == 0.0) throw ZeroSeedError("seed vanishes");
    return reciprocal(t[0]);
  });
}

double twofold_potential(const ScalarField2& u, const ScalarField2& y1, const ScalarField2& y2,
                         const NonlocalPotential& q12, Point2 p) {
  require_domain(u, p);
  require_domain(y1, p);
  require_domain(y2, p);
  const Taylor2 a = y1.taylor(p, 1);
  const Taylor2 b = y2.taylor(p, 1);
  const double q = q12(p);
  check_q(q, std::fabs(q12.additive_constant()));
  return u(p) + twofold_terms(a, b, Taylor2(q, 0)).value();
}

ScalarField2 twofold_potential_field(const ScalarField2& u, const ScalarField2& y1,
                                     const ScalarField2& y2, const ScalarField2& q12) {
  return combine_fields("twofold[" + u.name() + ";" + y1.name() + "," + y2.name() + "]",
                        {u, y1, y2, q12}, {0, 1, 1, 0}, [](std::span<const Taylor2> t) {
                          check_q(t[3].value(), 1.0);
                          return t[0] + twofold_terms(t[1], t[2], t[3]);
                        });
}

ScalarField2 twofold_solution(const ScalarField2& y1, const ScalarField2& q12) {
  return combine_fields("(" + y1.name() + "/" + q12.name() + ")", {y1, q12}, {0, 0},
                        [](std::span<const Taylor2> t) {
                          check_q(t[1].value(), 1.0);
                          return t[0] / t[1];
                        });
}

std::optional<double> choose_sign_constant(const GridData& q_samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (std::size_t k = 0; k < q_samples.values.size(); ++k) {
    if (!q_samples.valid(k)) continue;
    const double v = q_samples.values[k];
    if (!std::isfinite(v)) return std::nullopt;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++used;
  }
  if (used == 0) throw EmptyMaskError("choose_sign_constant: no masked-in samples");
  if (lo > 0.0 || hi < 0.0) return 0.0;
  if (hi - lo > kDefaultMagnitudeCap) return std::nullopt;
  return -lo + 1e-6 * (hi - lo);
}

}  // namespace darboux
