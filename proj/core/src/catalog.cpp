#include "darboux2d/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "darboux2d/errors.hpp"
#include "darboux2d/nonlocal.hpp"

namespace darboux {

namespace oracle {

namespace {

bool off_origin(Point2 p) { return p.x * p.x + p.y * p.y > 0.0; }

// (r^2)^{3/2} as a generic expression.
template <class T>
T r_cubed(const T& r2) {
  using std::pow;
  return pow(r2, 1.5);
}

}  // namespace

ScalarField2 b_three_halves() {
  return make_field("B", [](auto x, auto y) {
    const auto r3 = r_cubed(x * x + y * y);
    return (r3 - 1.0) / (r3 + 1.0);
  }, off_origin);
}

ScalarField2 y_l1() {
  return make_field("Y_L1", [](auto x, auto y) { return x / (x * x + y * y); }, off_origin);
}

ScalarField2 y_l2() {
  return make_field("Y_L2", [](auto x, auto y) { return y / (x * x + y * y); }, off_origin);
}

ScalarField2 q_l1(double c) {
  return make_field("Q_L1", [c](auto x, auto y) { return -y / (x * x + y * y) + c; }, off_origin);
}

ScalarField2 q_l2(double c) {
  return make_field("Q_L2", [c](auto x, auto y) { return x / (x * x + y * y) + c; }, off_origin);
}

ScalarField2 radial_potential_three_halves() {
  return make_field("u_radial", [](auto x, auto y) {
    using std::sqrt;
    const auto r2 = x * x + y * y;
    const auto d = r_cubed(r2) + 1.0;
    return -18.0 * sqrt(r2) / (d * d);
  }, off_origin);
}

namespace {

template <class T>
T constant_term(const T& x, const T& y, double c) {
  const T r2 = x * x + y * y;
  const T r3 = r_cubed(r2);
  return c * x * (5.0 * r3 - 1.0) / (r2 * (r3 + 1.0));
}

}  // namespace

ScalarField2 y_tilde_l1(double c) {
  return make_field("Y~_L1", [c](auto x, auto y) {
    const auto r2 = x * x + y * y;
    const auto r3 = r_cubed(r2);
    return -2.0 * x * y * (7.0 * r3 + 1.0) / (r2 * r2 * (r3 + 1.0)) + constant_term(x, y, c);
  }, off_origin);
}

ScalarField2 y_tilde_l2(double c) {
  return make_field("Y~_L2", [c](auto x, auto y) {
    const auto r2 = x * x + y * y;
    const auto r3 = r_cubed(r2);
    return (x * x - y * y) * (7.0 * r3 + 1.0) / (r2 * r2 * (r3 + 1.0)) + constant_term(x, y, c);
  }, off_origin);
}

ScalarField2 q12(double c) {
  return make_field("Q12", [c](auto x, auto y) {
    const auto r2 = x * x + y * y;
    const auto r3 = r_cubed(r2);
    return (49.0 * r3 + 1.0) / (2.0 * r2 * r2 * (r3 + 1.0)) + c / 2.0;
  }, off_origin);
}

namespace {

template <class T>
T twofold_denominator(const T& r, double c) {
  const T r3 = r * r * r;
  return c * r3 * r * (r3 + 1.0) + 49.0 * r3 + 1.0;
}

}  // namespace

ScalarField2 twofold_potential(double c) {
  auto fn = [c](auto x, auto y) {
    using std::sqrt;
    const auto r = sqrt(x * x + y * y);
    const auto r3 = r * r * r;
    const auto r6 = r3 * r3;
    const auto r8 = r6 * r * r;
    const auto den = twofold_denominator(r, c);
    return -2.0 * r * (441.0 + 9.0 * c * c * r8 + 2.0 * c * r * (392.0 * r6 + 49.0 * r3 + 8.0)) /
           (den * den);
  };
  return make_field("u_twofold", fn, [c](Point2 p) {
    const double r = std::hypot(p.x, p.y);
    return r > 0.0 && twofold_denominator(r, c) != 0.0;
  });
}

ScalarField2 twofold_solution(double c) {
  auto fn = [c](auto x, auto y) {
    const auto r2 = x * x + y * y;
    const auto r3 = r_cubed(r2);
    return -4.0 * x * y * (7.0 * r3 + 1.0) / (c * r2 * r2 * (r3 + 1.0) + 49.0 * r3 + 1.0);
  };
  return make_field("Y_twofold", fn, [c](Point2 p) {
    const double r = std::hypot(p.x, p.y);
    return r > 0.0 && twofold_denominator(r, c) != 0.0;
  });
}

ScalarField2 trig_potential_intermediate(double p, double x0) {
  auto fn = [p, x0](auto x, auto y) {
    using std::sin;
    using std::sinh;
    const auto sy = sin(y);
    const auto sh = sinh(p * (x - x0));
    return -1.0 + 2.0 / (sy * sy) + 2.0 * p * p / (sh * sh);
  };
  return make_field("u_trig_mid", fn, [x0](Point2 q) { return std::sin(q.y) != 0.0 && q.x != x0; });
}

namespace {

template <class T>
T trig_numerator(const T& x, const T& y, double p, double x0, double c) {
  using std::cos;
  using std::sin;
  using std::tanh;
  return p * (c - cos(y) * cos(x)) - cos(y) * sin(x) * tanh(p * (x - x0));
}

bool trig_numerator_nonzero(Point2 q, double p, double x0, double c) {
  return trig_numerator(q.x, q.y, p, x0, c) != 0.0;
}

}  // namespace

ScalarField2 trig_seed(double p, double x0, double c) {
  auto fn = [p, x0, c](auto x, auto y) {
    using std::sin;
    using std::tanh;
    return trig_numerator(x, y, p, x0, c) / (sin(y) * tanh(p * (x - x0)));
  };
  return make_field("Y_p", fn, [x0](Point2 q) { return std::sin(q.y) != 0.0 && q.x != x0; });
}

ScalarField2 trig_potential_final(double p, double x0, double c) {
  auto fn = [p, x0, c](auto x, auto y) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::tanh;
    const auto cx = cos(x), cy = cos(y), sx = sin(x);
    const auto q = c - cy * cx;
    const auto f1 = -p * p * (p * p + 1.0) * q * q + p * p * c * c - (p * p + 1.0) * cy * cy - sx * sx;
    const auto f2 = -2.0 * p * p * c * cy * cx + 1.0 + (p * p - 1.0) * cx * cx + (p * p + 1.0) * cy * cy;
    const auto f3 = 2.0 * p * sx * (cx - c * cy);
    const auto ch = cosh(p * (x - x0));
    const auto n = trig_numerator(x, y, p, x0, c);
    return -1.0 + 2.0 * (f1 / (ch * ch) + f2 + f3 * tanh(p * (x - x0))) / (n * n);
  };
  return make_field("u_trig", fn, [p, x0, c](Point2 q) { return trig_numerator_nonzero(q, p, x0, c); });
}

ScalarField2 trig_solution_final(double p, double x0, double c) {
  auto fn = [p, x0, c](auto x, auto y) {
    using std::sin;
    using std::tanh;
    return sin(y) * tanh(p * (x - x0)) / trig_numerator(x, y, p, x0, c);
  };
  return make_field("1/Y_p", fn, [p, x0, c](Point2 q) { return trig_numerator_nonzero(q, p, x0, c); });
}

ScalarField2 trig_q(double c) {
  return make_field("Q_trig", [c](auto x, auto y) {
    using std::cos;
    return c - cos(y) * cos(x);
  });
}

}  // namespace oracle

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec radial_grid() { return {-3.0, 3.0, -3.0, 3.0, 129, 129}; }
bool radial_region(Point2 p) { return p.x * p.x + p.y * p.y >= 0.25; }
bool radial_keep_out(Point2 p) { return p.x * p.x + p.y * p.y < 0.0625; }

GridSpec trig_grid() { return {0.5, 3.0, 0.5, 3.0, 129, 129}; }
bool trig_region(Point2 p) { return std::fabs(std::sin(p.y)) >= 0.05; }
bool trig_keep_out(Point2 p) { return std::fabs(std::sin(p.y)) < 0.05; }

ParamList base_params(Point2 b) { return {{"base_x", b.x}, {"base_y", b.y}}; }

// Pieces of the radial chain shared by the radial and twofold entries.
struct RadialChain {
  ScalarField2 b, s, h, u0, potential;
  NonlocalPotential q1, q2;
  ScalarField2 y1, y2;  // transformed harmonic seeds
};

RadialChain radial_chain(double c1, double c2, double c_l1, double c_l2, Point2 base, int n) {
  ScalarField2 b = (-radial_B(c1, c2, 1.0)).renamed("B");
  ScalarField2 s = shift_from_b(b);
  ScalarField2 h = constant_field(0.0, "0");
  ScalarField2 u0 = constant_field(0.0, "0");
  ScalarField2 one = constant_field(1.0, "1");
  RecoveryOptions opt;
  opt.keep_out = radial_keep_out;
  NonlocalPotential q1 = recover_q(oracle::y_l1(), one, base, oracle::q_l1(c_l1)(base), n, opt);
  NonlocalPotential q2 = recover_q(oracle::y_l2(), one, base, oracle::q_l2(c_l2)(base), n, opt);
  // The transformed seeds are scaled by -2 to match the printed normalization.
  ScalarField2 y1 = (-2.0 * new_solution(oracle::y_l1(), q1, h, s)).renamed("Y~_L1");
  ScalarField2 y2 = (-2.0 * new_solution(oracle::y_l2(), q2, h, s)).renamed("Y~_L2");
  ScalarField2 potential = new_potential_field(u0, h, s).renamed("u~");
  return {b, s, h, u0, potential, q1, q2, y1, y2};
}

bool is_three_halves(double c1, double c2) { return c1 == 1.5 && c2 == 1.0; }

}  // namespace

CatalogEntry build_radial_example(double c1, double c2, double c_l1, double c_l2,
                                  const EntryOptions& options) {
  const Point2 base = options.base.value_or(Point2{3.0, 3.0});
  RadialChain chain = radial_chain(c1, c2, c_l1, c_l2, base, options.quadrature_n);

  CatalogEntry e;
  e.name = "radial";
  e.params = {{"C1", c1}, {"C2", c2}, {"CL1", c_l1}, {"CL2", c_l2}};
  e.nonsingular = c1 >= 1.0 && c2 > 0.0;
  e.reference_grid = radial_grid();
  e.region = radial_region;
  e.keep_out = radial_keep_out;
  e.base_point = base;
  e.potentials = {chain.q1, chain.q2};

  ScalarField2 oracle_u = radial_potential_field(c1, c2);
  const bool worked = is_three_halves(c1, c2);
  e.closed_form.u = oracle_u;
  e.closed_form.y = worked ? oracle::y_tilde_l1(c_l1) : chain.b;
  e.machinery.u = chain.potential;
  e.machinery.y = worked ? chain.y1 : chain.b;

  e.comparisons.push_back({"potential", chain.potential, oracle_u});
  e.comparisons.push_back({"Q_L1", chain.q1.field(), oracle::q_l1(c_l1)});
  e.comparisons.push_back({"Q_L2", chain.q2.field(), oracle::q_l2(c_l2)});
  if (worked) {
    e.comparisons.push_back({"potential_closed", chain.potential, oracle::radial_potential_three_halves()});
    e.comparisons.push_back({"solution", chain.y1, oracle::y_tilde_l1(c_l1)});
    e.comparisons.push_back({"solution_L2", chain.y2, oracle::y_tilde_l2(c_l2)});
  }

  ParamList shift = {{"C1", c1}, {"C2", c2}, {"K", 1.0}, {"normalization", -2.0}};
  for (const auto& kv : base_params(base)) shift.push_back(kv);
  shift.push_back({"CL1", c_l1});
  shift.push_back({"CL2", c_l2});
  e.closed_form.provenance.entry = e.machinery.provenance.entry = e.name;
  e.closed_form.provenance.params = e.machinery.provenance.params = e.params;
  e.machinery.provenance.add(TransformKind::kNonlocalShift, {"Y_L1", "Y_L2", "s=-ln|B|"}, shift);
  return e;
}

CatalogEntry build_twofold_radial(double c, const EntryOptions& options) {
  const Point2 base = options.base.value_or(Point2{3.0, 3.0});
  RadialChain chain = radial_chain(1.5, 1.0, 0.0, 0.0, base, options.quadrature_n);
  RecoveryOptions opt;
  opt.keep_out = radial_keep_out;
  const double additive = oracle::q12(c)(base);
  NonlocalPotential q12 = recover_q(chain.y2, chain.y1, base, additive, options.quadrature_n, opt);

  CatalogEntry e;
  e.name = "twofold-radial";
  e.params = {{"C", c}};
  e.nonsingular = c >= 0.0;
  e.reference_grid = radial_grid();
  e.region = radial_region;
  e.keep_out = radial_keep_out;
  e.base_point = base;
  e.potentials = {chain.q1, chain.q2, q12};

  e.closed_form.u = oracle::twofold_potential(c);
  e.closed_form.y = oracle::twofold_solution(c);
  e.machinery.u = twofold_potential_field(chain.potential, chain.y1, chain.y2, q12.field()).renamed("u~~");
  e.machinery.y = twofold_solution(chain.y1, q12.field()).renamed("Y~~");

  e.comparisons.push_back({"Q12", q12.field(), oracle::q12(c)});
  e.comparisons.push_back({"potential", e.machinery.u, e.closed_form.u});
  e.comparisons.push_back({"solution", e.machinery.y, e.closed_form.y});

  e.closed_form.provenance.entry = e.machinery.provenance.entry = e.name;
  e.closed_form.provenance.params = e.machinery.provenance.params = e.params;
  ParamList shift = {{"C1", 1.5}, {"C2", 1.0}, {"K", 1.0}, {"normalization", -2.0}};
  for (const auto& kv : base_params(base)) shift.push_back(kv);
  ParamList twofold = {{"C", c}, {"additive_constant", additive}};
  for (const auto& kv : base_params(base)) twofold.push_back(kv);
  e.machinery.provenance.add(TransformKind::kNonlocalShift, {"Y_L1", "Y_L2", "s=-ln|B|"}, shift);
  e.machinery.provenance.add(TransformKind::kTwofold, {"Y~_L1", "Y~_L2"}, twofold);
  return e;
}

CatalogEntry build_trig_example(double p, double x0, double c, const EntryOptions& options) {
  const Point2 base = options.base.value_or(Point2{kPi / 2.0, kPi / 2.0});
  auto sin_y = [](Point2 q) { return std::sin(q.y) != 0.0; };
  ScalarField2 h = make_field("H", [](auto x, auto y) {
    (void)x;
    using std::sin;
    return -log_abs(sin(y));
  }, sin_y);
  ScalarField2 y = make_field("sin x", [](auto x, auto y) {
    (void)y;
    using std::sin;
    return sin(x);
  });
  ScalarField2 yh = make_field("sin y", [](auto x, auto y) {
    (void)x;
    using std::sin;
    return sin(y);
  }, sin_y);

  RecoveryOptions opt;
  opt.keep_out = trig_keep_out;
  NonlocalPotential q = recover_q(y, yh, base, oracle::trig_q(c)(base), options.quadrature_n, opt);

  ScalarField2 u_h = drift_potential_field(h).renamed("u_H");
  ScalarField2 s = (-2.0 * h + tanh_profile(p, x0).s).renamed("s");
  ScalarField2 u_mid = new_potential_field(u_h, h, s).renamed("u~_H");
  // Sign flip to the printed normalization of the seed.
  ScalarField2 seed = (-new_solution(y, q, h, s)).renamed("Y~_p");
  ScalarField2 u_final = moutard_potential_field(u_mid, seed).renamed("u~~_H");
  ScalarField2 y_final = moutard_simple_solution(seed).renamed("1/Y~_p");

  CatalogEntry e;
  e.name = "trig";
  e.params = {{"p", p}, {"x0", x0}, {"C", c}};
  e.nonsingular = p > 0.0 && c > 1.0 / p + 1.0;
  e.reference_grid = trig_grid();
  e.region = trig_region;
  e.keep_out = trig_keep_out;
  e.base_point = base;
  e.potentials = {q};

  e.closed_form.u = oracle::trig_potential_final(p, x0, c);
  e.closed_form.y = oracle::trig_solution_final(p, x0, c);
  e.machinery.u = u_final;
  e.machinery.y = y_final;

  e.comparisons.push_back({"initial_potential", u_h, constant_field(-1.0, "-1")});
  e.comparisons.push_back({"Q", q.field(), oracle::trig_q(c)});
  e.comparisons.push_back({"intermediate_potential", u_mid, oracle::trig_potential_intermediate(p, x0)});
  e.comparisons.push_back({"seed", seed, oracle::trig_seed(p, x0, c)});
  e.comparisons.push_back({"potential", u_final, e.closed_form.u});
  e.comparisons.push_back({"solution", y_final, e.closed_form.y});

  e.closed_form.provenance.entry = e.machinery.provenance.entry = e.name;
  e.closed_form.provenance.params = e.machinery.provenance.params = e.params;
  ParamList shift = {{"p", p}, {"x0", x0}, {"C", c}, {"normalization", -1.0}};
  for (const auto& kv : base_params(base)) shift.push_back(kv);
  e.machinery.provenance.add(TransformKind::kNonlocalShift, {"sin x", "sin y", "s=-2H+ln tanh"}, shift);
  e.machinery.provenance.add(TransformKind::kMoutard, {"Y~_p"}, {});
  return e;
}

const std::vector<std::string>& entry_names() {
  static const std::vector<std::string> names = {"radial", "twofold-radial", "trig"};
  return names;
}

ParamList default_params(const std::string& name) {
  if (name == "radial") return {{"C1", 1.5}, {"C2", 1.0}, {"CL1", 0.0}, {"CL2", 0.0}};
  if (name == "twofold-radial") return {{"C", 0.0}};
  if (name == "trig") return {{"p", 1.0}, {"x0", 0.0}, {"C", 2.5}};
  throw UnknownEntryError("unknown catalog entry '" + name + "'");
}

CatalogEntry build_entry(const std::string& name, const std::map<std::string, double>& overrides,
                         const EntryOptions& options) {
  ParamList params = default_params(name);
  for (const auto& [key, value] : overrides) {
    auto it = std::find_if(params.begin(), params.end(), [&](const auto& kv) { return kv.first == key; });
    if (it == params.end()) throw ParamError("entry '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw ParamError("parameter '" + key + "' must be finite");
    it->second = value;
  }
  auto get = [&](const char* key) {
    for (const auto& [k, v] : params) {
      if (k == key) return v;
    }
    return 0.0;
  };
  if (name == "radial") return build_radial_example(get("C1"), get("C2"), get("CL1"), get("CL2"), options);
  if (name == "twofold-radial") return build_twofold_radial(get("C"), options);
  return build_trig_example(get("p"), get("x0"), get("C"), options);
}

Norms OracleDelta::worst() const {
  Norms w;
  for (const auto& [label, n] : items) {
    w.max_abs = std::max(w.max_abs, n.max_abs);
    w.rms = std::max(w.rms, n.rms);
  }
  return w;
}

OracleDelta oracle_delta(const CatalogEntry& entry, const GridSpec& spec,
                         const ScalarField2::Domain& region) {
  spec.validate();
  for (const auto& q : entry.potentials) q.check_paths(spec, region);

  OracleDelta out;
  for (const auto& cmp : entry.comparisons) {
    const GridData a = sample(cmp.machinery, spec, kDefaultMagnitudeCap, region);
    const GridData b = sample(cmp.oracle, spec, kDefaultMagnitudeCap, region);
    GridData diff(spec);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      if (a.valid(k) && b.valid(k)) {
        diff.values[k] = a.values[k] - b.values[k];
        diff.mask[k] = 1;
      } else if (a.valid(k) != b.valid(k)) {
        ++out.mask_mismatch;
      }
    }
    const Norms n = residual_norms(diff);
    out.items.emplace_back(cmp.label, n);
    if (cmp.label == "potential") out.potential = n;
    if (cmp.label == "solution") out.solution = n;
  }
  return out;
}

OracleDelta oracle_delta(const CatalogEntry& entry) {
  return oracle_delta(entry, entry.reference_grid, entry.region);
}

double replay(const TransformRecord& record, const CatalogEntry& entry, const std::vector<Point2>& probes) {
  std::map<std::string, double> params(record.params.begin(), record.params.end());
  EntryOptions options;
  options.base = entry.base_point;
  options.quadrature_n = entry.potentials.empty() ? kDefaultPanelsPerUnit
                                                  : entry.potentials.front().panels_per_unit();
  const CatalogEntry rebuilt = build_entry(record.entry, params, options);
  double worst = 0.0;
  for (const Point2& p : probes) {
    worst = std::max(worst, std::fabs(rebuilt.machinery.u(p) - entry.machinery.u(p)));
    worst = std::max(worst, std::fabs(rebuilt.machinery.y(p) - entry.machinery.y(p)));
  }
  return worst;
}

}  // namespace darboux
