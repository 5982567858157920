#include "darboux2d/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "darboux2d/errors.hpp"
#include "darboux2d/recovery.hpp"

namespace darboux {

namespace {

std::optional<double> try_value(const ScalarField2& f, Point2 p, double cap = kDefaultMagnitudeCap) {
  if (!f.in_domain(p)) return std::nullopt;
  try {
    const double v = f(p);
    if (!std::isfinite(v) || std::fabs(v) > cap) return std::nullopt;
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<double> grid_laplacian(const ScalarField2& y, Point2 p, double hx, double hy, double center) {
  const auto xm = try_value(y, {p.x - hx, p.y});
  const auto xp = try_value(y, {p.x + hx, p.y});
  const auto ym = try_value(y, {p.x, p.y - hy});
  const auto yp = try_value(y, {p.x, p.y + hy});
  if (!xm || !xp || !ym || !yp) return std::nullopt;
  return (*xm - 2.0 * center + *xp) / (hx * hx) + (*ym - 2.0 * center + *yp) / (hy * hy);
}

void require_nonempty(const GridData& g, const char* what) {
  if (g.masked_in() == 0) throw EmptyMaskError(std::string(what) + ": no masked-in nodes");
}

Taylor2 laplacian(const Taylor2& t) { return t.dx().dx() + t.dy().dy(); }

}  // namespace

GridData schrodinger_residual(const ScalarField2& u, const ScalarField2& y, const GridSpec& spec,
                              LaplacianMode mode, const ScalarField2::Domain& region) {
  spec.validate();
  GridData out(spec);
  const bool analytic = mode == LaplacianMode::kAnalytic && y.has_analytic_jets(2);
  const double hx = spec.dx(), hy = spec.dy();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    const auto uv = try_value(u, p);
    const auto yv = try_value(y, p);
    if (!uv || !yv) continue;
    std::optional<double> lap;
    if (analytic) {
      try {
        lap = laplacian_at(y, p);
      } catch (const Error&) {
      }
    } else {
      lap = grid_laplacian(y, p, hx, hy, *yv);
    }
    if (!lap) continue;
    const double r = *lap - *uv * *yv;
    if (!std::isfinite(r)) continue;
    out.values[k] = r;
    out.mask[k] = 1;
  }
  require_nonempty(out, "schrodinger_residual");
  return out;
}

GridData schrodinger_residual(const GridData& u, const GridData& y, int stride) {
  const GridSpec& s = y.spec;
  if (u.spec.nx != s.nx || u.spec.ny != s.ny || u.spec.x_min != s.x_min || u.spec.x_max != s.x_max ||
      u.spec.y_min != s.y_min || u.spec.y_max != s.y_max) {
    throw GridError("potential and solution grids differ: " + u.spec.describe() + " vs " + s.describe());
  }
  if (stride < 1) throw GridError("stencil stride must be positive");
  GridData out(s);
  const int m = stride;
  const double hx = m * s.dx(), hy = m * s.dy();
  for (int j = m; j + m < s.ny; ++j) {
    for (int i = m; i + m < s.nx; ++i) {
      const std::size_t k = s.index(i, j);
      const std::size_t w = s.index(i - m, j), e = s.index(i + m, j);
      const std::size_t n = s.index(i, j + m), so = s.index(i, j - m);
      if (!u.valid(k) || !y.valid(k) || !y.valid(w) || !y.valid(e) || !y.valid(n) || !y.valid(so)) continue;
      const double c = y.values[k];
      const double lap = (y.values[w] - 2.0 * c + y.values[e]) / (hx * hx) +
                         (y.values[so] - 2.0 * c + y.values[n]) / (hy * hy);
      out.values[k] = lap - u.values[k] * c;
      out.mask[k] = 1;
    }
  }
  require_nonempty(out, "schrodinger_residual");
  return out;
}

GridData fokker_planck_residual(const ScalarField2& w, const ScalarField2& h, const GridSpec& spec,
                                const ScalarField2::Domain& region) {
  spec.validate();
  GridData out(spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    if (!w.in_domain(p) || !h.in_domain(p)) continue;
    try {
      const Taylor2 tw = w.taylor(p, 2);
      const Taylor2 th = h.taylor(p, 2);
      const Taylor2 r = laplacian(tw) + 2.0 * (laplacian(th) * tw + th.dx() * tw.dx() + th.dy() * tw.dy());
      const double v = r.value();
      if (!std::isfinite(v)) continue;
      out.values[k] = v;
      out.mask[k] = 1;
    } catch (const Error&) {
    }
  }
  require_nonempty(out, "fokker_planck_residual");
  return out;
}

std::pair<double, double> moutard_relation_residual(const ScalarField2& y, const ScalarField2& y_tilde,
                                                    const ScalarField2& yh, Point2 p) {
  for (const ScalarField2* f : {&y, &y_tilde, &yh}) {
    if (!f->in_domain(p)) throw DomainError("point outside the domain of " + f->name());
  }
  const Taylor2 a = y.taylor(p, 1);
  const Taylor2 t = y_tilde.taylor(p, 1);
  const Taylor2 b = yh.taylor(p, 1);
  if (b.value() == 0.0) throw ZeroSeedError("seed " + yh.name() + " vanishes");
  const Taylor2 prod = b * t;
  const Taylor2 ratio = a / b;
  const double bb = b.value() * b.value();
  return {prod.coeff(1, 0) + bb * ratio.coeff(0, 1), prod.coeff(0, 1) - bb * ratio.coeff(1, 0)};
}

std::optional<double> convergence_order(const ScalarField2& u, const ScalarField2& y,
                                        const std::array<GridSpec, 3>& specs,
                                        const ScalarField2::Domain& region) {
  for (int l = 1; l < 3; ++l) {
    const GridSpec expect = specs[l - 1].refined();
    const GridSpec& got = specs[l];
    if (got.nx != expect.nx || got.ny != expect.ny || got.x_min != expect.x_min ||
        got.x_max != expect.x_max || got.y_min != expect.y_min || got.y_max != expect.y_max) {
      throw GridError("convergence_order needs nested grids with spacing ratio 2");
    }
  }
  const ScalarField2 y_fd = y.without_jets();
  std::array<GridData, 3> r;
  for (int l = 0; l < 3; ++l) r[l] = schrodinger_residual(u, y_fd, specs[l], LaplacianMode::kGridFD, region);

  const GridSpec& c = specs[0];
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  std::size_t count = 0;
  for (int j = 0; j < c.ny; ++j) {
    for (int i = 0; i < c.nx; ++i) {
      const std::size_t k0 = c.index(i, j);
      const std::size_t k1 = specs[1].index(2 * i, 2 * j);
      const std::size_t k2 = specs[2].index(4 * i, 4 * j);
      if (!r[0].valid(k0) || !r[1].valid(k1) || !r[2].valid(k2)) continue;
      sum[0] += r[0].values[k0] * r[0].values[k0];
      sum[1] += r[1].values[k1] * r[1].values[k1];
      sum[2] += r[2].values[k2] * r[2].values[k2];
      ++count;
    }
  }
  if (count == 0) throw EmptyMaskError("convergence_order: no node valid on all three grids");
  if (sum[0] == 0.0 || sum[1] == 0.0 || sum[2] == 0.0) return std::nullopt;
  // rms ratios; the common node count cancels
  const double o1 = 0.5 * std::log2(sum[0] / sum[1]);
  const double o2 = 0.5 * std::log2(sum[1] / sum[2]);
  return 0.5 * (o1 + o2);
}

std::optional<double> convergence_order(const ScalarField2& u, const ScalarField2& y, const GridSpec& coarsest,
                                        const ScalarField2::Domain& region) {
  const GridSpec mid = coarsest.refined();
  return convergence_order(u, y, {coarsest, mid, mid.refined()}, region);
}

std::optional<double> convergence_order(const GridData& u, const GridData& y) {
  const std::array<GridData, 3> r = {schrodinger_residual(u, y, 4), schrodinger_residual(u, y, 2),
                                     schrodinger_residual(u, y, 1)};
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  std::size_t count = 0;
  for (std::size_t k = 0; k < y.values.size(); ++k) {
    if (!r[0].valid(k) || !r[1].valid(k) || !r[2].valid(k)) continue;
    for (int l = 0; l < 3; ++l) sum[l] += r[l].values[k] * r[l].values[k];
    ++count;
  }
  if (count == 0) throw EmptyMaskError("convergence_order: no node carries all three stencils");
  if (sum[0] == 0.0 || sum[1] == 0.0 || sum[2] == 0.0) return std::nullopt;
  return 0.25 * (std::log2(sum[0] / sum[1]) + std::log2(sum[1] / sum[2]));
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  double med = v[m];
  if (v.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
  }
  return med;
}

}  // namespace

std::vector<Point2> singularity_scan(const ScalarField2& f, const GridSpec& spec, double growth_factor,
                                     const ScalarField2::Domain& region) {
  spec.validate();
  std::vector<Point2> findings;
  std::vector<double> mags(spec.size(), -1.0);
  std::vector<double> ok;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    const auto v = try_value(f, p, std::numeric_limits<double>::infinity());
    if (!v) {
      findings.push_back(p);
      continue;
    }
    mags[k] = std::fabs(*v);
    ok.push_back(mags[k]);
  }
  const double limit = growth_factor * median(ok);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (mags[k] > limit) findings.push_back(spec.node(k));
  }
  return findings;
}

std::vector<Point2> singularity_scan(const GridData& g, double growth_factor) {
  std::vector<double> ok;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.valid(k)) ok.push_back(std::fabs(g.values[k]));
  }
  const double limit = growth_factor * median(ok);
  std::vector<Point2> findings;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.valid(k) && std::fabs(g.values[k]) > limit) findings.push_back(g.spec.node(k));
  }
  return findings;
}

Norms intertwine_check(const ShiftFunction& shift, const SchrodingerPair& pair, const GridSpec& spec,
                       const IntertwineOptions& options) {
  const ScalarField2 yh = exp(-shift.h).renamed("e^-" + shift.h.name());
  RecoveryOptions ropt;
  ropt.keep_out = options.keep_out;
  const NonlocalPotential q = recover_q(pair.y, yh, options.base, 0.0, options.quadrature_n, ropt);
  q.check_paths(spec, options.region);
  const ScalarField2 image =
      shift.moutard_case ? moutard_solution(pair.y, yh, q) : new_solution(pair.y, q, shift.h, shift.s);
  const ScalarField2 u_new = new_potential_field(pair.u, shift.h, shift.s);
  return residual_norms(schrodinger_residual(u_new, image, spec, LaplacianMode::kAnalytic, options.region));
}

void VerificationReport::write(std::ostream& out) const {
  out << "entry=" << entry << "\n";
  out << "grid=" << grid << "\n";
  out << "max_abs=" << format_double(max_abs) << "\n";
  out << "rms=" << format_double(rms) << "\n";
  out << "order=" << (order ? format_double(*order) : std::string("NA")) << "\n";
  out << "singularities_found=" << singularities_found << "\n";
  if (oracle_delta) out << "oracle_delta=" << format_double(*oracle_delta) << "\n";
  out << "passed=" << (passed ? "true" : "false") << "\n";
  for (const auto& f : failures) out << "failure=" << f << "\n";
}

std::string VerificationReport::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

VerificationReport verify_entry(const CatalogEntry& entry, const GridSpec& spec,
                                const ScalarField2::Domain& region, const VerifyThresholds& thresholds) {
  VerificationReport rep;
  rep.entry = entry.name;
  rep.grid = spec.describe();
  const SchrodingerPair& pair = entry.closed_form;

  const Norms n = residual_norms(schrodinger_residual(pair.u, pair.y, spec, LaplacianMode::kAnalytic, region));
  rep.max_abs = n.max_abs;
  rep.rms = n.rms;
  if (!(n.max_abs <= thresholds.max_abs)) {
    rep.failures.push_back("max_abs " + format_double(n.max_abs) + " > " + format_double(thresholds.max_abs));
  }

  rep.order = convergence_order(pair.u, pair.y, spec, region);
  if (rep.order && !(*rep.order >= thresholds.order_min && *rep.order <= thresholds.order_max)) {
    rep.failures.push_back("order " + format_double(*rep.order) + " outside [" +
                           format_double(thresholds.order_min) + ", " + format_double(thresholds.order_max) + "]");
  }

  rep.singularities_found = singularity_scan(pair.u, spec, thresholds.growth_factor, region).size() +
                            singularity_scan(pair.y, spec, thresholds.growth_factor, region).size();
  if (rep.singularities_found > 0) {
    rep.failures.push_back(std::to_string(rep.singularities_found) + " singular nodes");
  }
  rep.passed = rep.failures.empty();
  return rep;
}

VerificationReport verify_entry(const CatalogEntry& entry, const VerifyThresholds& thresholds) {
  return verify_entry(entry, entry.reference_grid, entry.region, thresholds);
}

VerificationReport verify_grids(const GridData& u, const GridData& y, const std::string& label,
                                const VerifyThresholds& thresholds) {
  VerificationReport rep;
  rep.entry = label;
  rep.grid = y.spec.describe();
  const Norms n = residual_norms(schrodinger_residual(u, y));
  rep.max_abs = n.max_abs;
  rep.rms = n.rms;
  rep.order = convergence_order(u, y);
  if (rep.order && !(*rep.order >= thresholds.order_min && *rep.order <= thresholds.order_max)) {
    rep.failures.push_back("order " + format_double(*rep.order) + " outside [" +
                           format_double(thresholds.order_min) + ", " + format_double(thresholds.order_max) + "]");
  }
  rep.singularities_found = singularity_scan(u, thresholds.growth_factor).size();
  if (rep.singularities_found > 0) {
    rep.failures.push_back(std::to_string(rep.singularities_found) + " singular nodes");
  }
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace darboux
