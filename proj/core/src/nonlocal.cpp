#include "darboux2d/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "darboux2d/errors.hpp"

namespace darboux {

namespace {

inline double value_of(double v) { return v; }
inline double value_of(const Taylor2& t) { return t.value(); }

template <class T>
T p2(const T& a) { return a * a; }
template <class T>
T p3(const T& a) { return a * a * a; }
template <class T>
T p4(const T& a) { return p2(p2(a)); }
template <class T>
T p5(const T& a) { return p4(a) * a; }
template <class T>
T p6(const T& a) { return p3(a) * p3(a); }

// First to third partials of one field, either as numbers or as Taylor
// polynomials of the partial derivatives.
template <class T>
struct Partials {
  T x, y, xx, xy, yy, xxx, xxy, xyy, yyy;
};

Partials<double> partials(const Taylor2& t) {
  Partials<double> d{};
  d.x = t.derivative(1, 0);
  d.y = t.derivative(0, 1);
  if (t.order() >= 2) {
    d.xx = t.derivative(2, 0);
    d.xy = t.derivative(1, 1);
    d.yy = t.derivative(0, 2);
  }
  if (t.order() >= 3) {
    d.xxx = t.derivative(3, 0);
    d.xxy = t.derivative(2, 1);
    d.xyy = t.derivative(1, 2);
    d.yyy = t.derivative(0, 3);
  }
  return d;
}

// Polynomials of the first and second partials; `t` must have order >= 2.
Partials<Taylor2> partial_polys(const Taylor2& t) {
  Partials<Taylor2> d{};
  d.x = t.dx();
  d.y = t.dy();
  d.xx = d.x.dx();
  d.xy = d.x.dy();
  d.yy = d.y.dy();
  return d;
}

template <class T>
struct Coeffs {
  T f, f1, f2;
};

template <class T>
Coeffs<T> eq_coefficients(const Partials<T>& h, const Partials<T>& s) {
  const T &sx = s.x, &sy = s.y, &sxx = s.xx, &sxy = s.xy, &syy = s.yy;
  const T &hx = h.x, &hy = h.y, &hxy = h.xy, &hyy = h.yy;
  Coeffs<T> c;
  c.f = 2.0 * sx * (sx + 2.0 * hx) + 2.0 * sy * (sy + 2.0 * hy);
  c.f1 = (sx + 2.0 * hx) * (-2.0 * (sxy + hxy) + (sy - 2.0 * hy) * sx) +
         (sy + 2.0 * hy) * (sxx - syy - 2.0 * hyy + (sy - 2.0 * hy) * sy);
  c.f2 = sx * sxx + 2.0 * sy * (sxy + hxy) - sx * (syy + 2.0 * hyy) - (sx + 2.0 * hx) * p2(sx) -
         (sy + 2.0 * hy) * sx * sy;
  return c;
}

void check_degenerate(double f, double sx, double sy, double hx, double hy) {
  const double scale = std::max({1.0, std::fabs(sx), std::fabs(sy), std::fabs(hx), std::fabs(hy)});
  if (!(std::fabs(f) >= kDegenerateTolerance * scale * scale)) {
    throw DegenerateError("transformation coefficient F vanishes");
  }
}

std::pair<double, double> shift_system(const Partials<double>& h, const Partials<double>& s) {
  using T = double;
  const T &sx = s.x, &sy = s.y, &sxx = s.xx, &sxy = s.xy, &syy = s.yy;
  const T &sxxx = s.xxx, &sxxy = s.xxy, &sxyy = s.xyy, &syyy = s.yyy;
  const T &hx = h.x, &hy = h.y, &hxx = h.xx, &hxy = h.xy, &hyy = h.yy;
  const T &hxxy = h.xxy, &hxyy = h.xyy, &hyyy = h.yyy;

  const T r22 = (p3(sx)+2.0*p2(sx)*hx+(2.0*sy*hy+p2(sy))*sx)*sxxx
     + ((sy-2.0*hy)*p2(sx)+(-4.0*hy*hx+2.0*hx*sy)*sx+p3(sy)-4.0*p2(hy)*sy)*sxxy
     + (p3(sx)+6.0*p2(sx)*hx+(8.0*p2(hx)+2.0*sy*hy+p2(sy))*sx+8.0*hx*sy*hy+4.0*hx*p2(sy))*sxyy
     + ((2.0*hy+sy)*p2(sx)+(4.0*hy*hx+2.0*hx*sy)*sx+4.0*hy*p2(sy)+p3(sy)+4.0*p2(hy)*sy)*syyy
     + (2.0*sy*hy+p2(sy)-p2(sx))*p2(sxx) + 2.0*((-2.0*sy+hy)*sx+2.0*hy*hx-hx*sy)*sxx*sxy
     + 2.0*(-hx*sx+2.0*p2(hy)+sy*hy)*sxx*syy + 4.0*(sy*hy-hx*sx-2.0*p2(hx))*p2(sxy)
     + 2.0*(-hxx*p2(sx)+2.0*(-hyy*hx-sy*hxy+hxy*hy)*sx)*sxx
     - 2.0*(hyy*p2(sy)+2.0*(hyy*hy+hxy*hx)*sy)*sxx
     + ((-6.0*hy-4.0*sy)*sx-10.0*hx*sy-12.0*hy*hx)*sxy*syy
     + ((-4.0*hxx-4.0*hyy)*sy-4.0*hyy*hy-4.0*hxy*hx)*sx*sxy
     + ((-12.0*hyy*hx+12.0*hxy*hy)*sy-8.0*hx*hyy*hy-8.0*p2(hx)*hxy)*sxy
     + (-4.0*p2(hy)+p2(sx)+2.0*hx*sx-4.0*sy*hy-p2(sy))*p2(syy)
     + ((4.0*hyy+2.0*hxx)*p2(sx)+(-8.0*hxy*hy+8.0*hyy*hx-4.0*sy*hxy)*sx)*syy
     + (-2.0*hyy*p2(sy)+(-8.0*hxy*hx-8.0*hyy*hy)*sy-8.0*hx*hxy*hy-8.0*hyy*p2(hy))*syy
     - p6(sx)-6.0*hx*p5(sx)-3.0*(4.0*p2(hx)+2.0*sy*hy+p2(sy))*p4(sx)
     - 4.0*(2.0*p3(hx)+6.0*hx*sy*hy+3.0*hx*p2(sy))*p3(sx)
     - (3.0*p4(sy)+12.0*hy*p3(sy)+12.0*(p2(hy)+p2(hx))*p2(sy)-2.0*(-12.0*p2(hx)*hy+hyyy+hxxy)*sy)*p2(sx)
     + 4.0*(hyyy*hy+hyy*hxx+p2(hyy)+hxyy*hx)*p2(sx)
     - 6.0*(hx*p4(sy)+4.0*hx*hy*p3(sy)+4.0*hx*p2(hy)*p2(sy))*sx
     - 4.0*(hyy*hxy-hx*hyyy+hxy*hxx-hxxy*hx)*sy*sx
     + (8.0*hx*hyyy*hy+8.0*p2(hx)*hxyy-8.0*hxy*hyy*hy+8.0*hx*p2(hyy))*sx - p6(sy)-6.0*hy*p5(sy)
     - 12.0*p2(hy)*p4(sy) + 2.0*(hyyy-4.0*p3(hy)+hxxy)*p3(sy) + 4.0*(hxxy*hy+2.0*hyyy*hy+hxyy*hx)*p2(sy)
     + (-8.0*hx*hxy*hyy+8.0*hyyy*p2(hy)+8.0*hx*hxyy*hy+8.0*p2(hxy)*hy)*sy;

  const T r23 = ((2.0*hy+sy)*p2(sx)+(4.0*hy*hx+2.0*hx*sy)*sx+4.0*hy*p2(sy)+p3(sy)+4.0*p2(hy)*sy)*sxxx
     + (-p3(sx)-6.0*p2(sx)*hx+(-2.0*sy*hy-8.0*p2(hx)-p2(sy))*sx-4.0*hx*p2(sy)-8.0*hx*sy*hy)*sxxy
     + ((sy-2.0*hy)*p2(sx)+(-4.0*hy*hx+2.0*hx*sy)*sx+p3(sy)-4.0*p2(hy)*sy)*sxyy
     + (-p3(sx)-2.0*p2(sx)*hx+(-p2(sy)-2.0*sy*hy)*sx)*syyy
     + ((-2.0*sy-4.0*hy)*sx-4.0*hy*hx-2.0*hx*sy)*p2(sxx)
     + (10.0*hx*sx-6.0*sy*hy+2.0*p2(sx)+8.0*p2(hx)-4.0*p2(hy)-2.0*p2(sy))*sxy*sxx
     + (2.0*sx*hy+2.0*hx*sy+4.0*hy*hx)*syy*sxx
     + (2.0*hxy*p2(sx)+((-2.0*hxx+2.0*hyy)*sy+12.0*hxy*hx-4.0*hxx*hy+8.0*hyy*hy)*sx)*sxx
     + (-2.0*hxy*p2(sy)+(4.0*hyy*hx-4.0*hxy*hy)*sy+8.0*hx*hyy*hy+8.0*p2(hx)*hxy)*sxx
     + 4.0*(sx*hy+2.0*hy*hx+hx*sy)*p2(sxy) + 2.0*(hx*sx-p2(sy)+p2(sx)+2.0*p2(hy)+sy*hy)*syy*sxy
     + 4.0*(hxy*hy-hyy*hx)*sx*sxy - 4.0*(hxx+hyy)*p2(sy)*sxy
     + 4.0*(3.0*hxy*hx-2.0*hxx*hy+hyy*hy)*sy*sxy
     + (8.0*hx*hxy*hy+8.0*hyy*p2(hy))*sxy + (2.0*hy+2.0*sy)*sx*p2(syy)
     + (2.0*hxy*p2(sx)+((6.0*hyy+2.0*hxx)*sy+4.0*hyy*hy+4.0*hxx*hy)*sx-2.0*hxy*p2(sy))*syy
     + (-2.0*hyyy-2.0*hxxy)*p3(sx) + (-4.0*hx*hyyy-8.0*hxxy*hx-4.0*hy*hxyy)*p2(sx)
     + ((-2.0*hyyy-2.0*hxxy)*p2(sy)+(-4.0*hxxy*hy-4.0*hyyy*hy+4.0*p2(hyy)+4.0*hyy*hxx)*sy)*sx
     + (-8.0*hx*hxy*hyy-8.0*hx*hxyy*hy-8.0*p2(hx)*hxxy+8.0*hyy*hy*hxx)*sx
     + (-4.0*hy*hxyy-4.0*hyy*hxy-4.0*hxxy*hx-4.0*hxy*hxx)*p2(sy)
     + (-8.0*p2(hy)*hxyy-8.0*hy*hx*hxxy+8.0*hx*p2(hxy)-8.0*hxx*hy*hxy)*sy;
  return {r22, r23};
}

void require_domain(const ScalarField2& f, Point2 p) {
  if (!f.in_domain(p)) {
    throw DomainError("point (" + format_double(p.x) + ", " + format_double(p.y) +
                      ") outside the domain of " + f.name());
  }
}

Taylor2 laplacian(const Taylor2& t) { return t.dx().dx() + t.dy().dy(); }

// Shared core of the solution maps: R1 A - A_y + R2 B with the degeneracy
// check at the expansion point.
struct PolyCoeffs {
  Taylor2 r1, r2;
};

PolyCoeffs poly_coefficients(const Taylor2& h, const Taylor2& s) {
  const Partials<Taylor2> hd = partial_polys(h);
  const Partials<Taylor2> sd = partial_polys(s);
  const Coeffs<Taylor2> c = eq_coefficients(hd, sd);
  check_degenerate(c.f.value(), sd.x.value(), sd.y.value(), hd.x.value(), hd.y.value());
  return {c.f1 / c.f, c.f2 / c.f};
}

bool is_nonneg_integer(double c) { return c >= 0.0 && c == std::floor(c) && c < 64.0; }

}  // namespace

DarbouxCoefficients coefficients(const ScalarField2& h, const ScalarField2& s, Point2 p) {
  require_domain(h, p);
  require_domain(s, p);
  const Partials<double> hd = partials(h.taylor(p, 2));
  const Partials<double> sd = partials(s.taylor(p, 2));
  const Coeffs<double> c = eq_coefficients(hd, sd);
  check_degenerate(c.f, sd.x, sd.y, hd.x, hd.y);
  return {c.f, c.f1, c.f2, c.f1 / c.f, c.f2 / c.f};
}

std::pair<double, double> shift_residuals(const ScalarField2& h, const ScalarField2& s, Point2 p) {
  require_domain(h, p);
  require_domain(s, p);
  return shift_system(partials(h.taylor(p, 3)), partials(s.taylor(p, 3)));
}

namespace {

Taylor2 shifted_potential(const Taylor2& u, const Taylor2& h, const Taylor2& s) {
  const Taylor2 sx = s.dx(), sy = s.dy();
  const Taylor2 hx = h.dx(), hy = h.dy();
  return u - laplacian(s) + 2.0 * hx * sx + sx * sx + 2.0 * sy * hy + sy * sy;
}

}  // namespace

double new_potential(const ScalarField2& u, const ScalarField2& h, const ScalarField2& s, Point2 p) {
  require_domain(u, p);
  require_domain(h, p);
  require_domain(s, p);
  return shifted_potential(Taylor2(u(p), 0), h.taylor(p, 1), s.taylor(p, 2)).value();
}

ScalarField2 new_potential_field(const ScalarField2& u, const ScalarField2& h, const ScalarField2& s) {
  return combine_fields("shift[" + u.name() + ";" + h.name() + "," + s.name() + "]", {u, h, s},
                        {0, 1, 2}, [](std::span<const Taylor2> t) {
                          return shifted_potential(t[0], t[1], t[2]);
                        });
}

ScalarField2 new_solution(const ScalarField2& y, const NonlocalPotential& q, const ScalarField2& h,
                          const ScalarField2& s) {
  if (q.compat_residual() > kCompatibilityTolerance) {
    throw CompatibilityError("Q of (" + q.source_y() + ", " + q.source_yh() + ") has curl defect " +
                             format_double(q.compat_residual()));
  }
  return new_solution(y, q.field(), h, s);
}

ScalarField2 new_solution(const ScalarField2& y, const ScalarField2& q, const ScalarField2& h,
                          const ScalarField2& s) {
  return combine_fields("darboux[" + y.name() + ";" + h.name() + "," + s.name() + "]", {y, q, h, s},
                        {1, 0, 2, 2}, [](std::span<const Taylor2> t) {
                          const Taylor2 &yt = t[0], &qt = t[1], &ht = t[2], &st = t[3];
                          const PolyCoeffs c = poly_coefficients(ht, st);
                          return (c.r1 + ht.dy()) * yt - yt.dy() + exp(ht) * c.r2 * qt;
                        });
}

ScalarField2 fokker_planck_new_w(const ScalarField2& w, const ScalarField2& q, const ScalarField2& h,
                                 const ScalarField2& s) {
  return combine_fields("darboux_w[" + w.name() + ";" + h.name() + "," + s.name() + "]", {w, q, h, s},
                        {1, 0, 2, 2}, [](std::span<const Taylor2> t) {
                          const Taylor2 &wt = t[0], &qt = t[1], &ht = t[2], &st = t[3];
                          const PolyCoeffs c = poly_coefficients(ht, st);
                          return exp(-st) * (c.r1 * wt - wt.dy() + c.r2 * qt);
                        });
}

ScalarField2 fokker_planck_new_w(const ScalarField2& w, const ScalarField2& q, const ScalarField2& s,
                                 CoefficientMap coeffs_at) {
  ScalarField2::Evaluator value = [w, q, s, coeffs_at = std::move(coeffs_at)](Point2 p) {
    const DarbouxCoefficients c = coeffs_at(p);
    const Taylor2 wt = w.taylor(p, 1);
    return std::exp(-s(p)) * (c.r1 * wt.value() - wt.coeff(0, 1) + c.r2 * q(p));
  };
  ScalarField2::Domain domain = [w, q, s](Point2 p) {
    return w.in_domain(p) && q.in_domain(p) && s.in_domain(p);
  };
  return ScalarField2("darboux_w[" + w.name() + ";" + s.name() + "]", std::move(value),
                      std::move(domain));
}

std::pair<double, double> h0_residual(const ScalarField2& b, Point2 p) {
  require_domain(b, p);
  const Taylor2 t = b.taylor(p, 3);
  const double B = t.value();
  const Partials<double> d = partials(t);
  const double lap = d.xx + d.yy;
  const double grad2 = d.x * d.x + d.y * d.y;
  const double r1 = -(2.0 * B * d.y * d.xy + B * d.x * (d.xx - d.yy) + d.x * grad2) * lap +
                    B * grad2 * (d.xxx + d.xyy);
  const double r2 = -(2.0 * B * d.x * d.xy - B * d.y * (d.xx - d.yy) + d.y * grad2) * lap +
                    B * grad2 * (d.xxy + d.yyy);
  return {r1, r2};
}

double h0_first_integral(const ScalarField2& b, Point2 p) {
  require_domain(b, p);
  const Taylor2 t = b.taylor(p, 2);
  const double bxx = t.derivative(2, 0);
  const double byy = t.derivative(0, 2);
  const double lap = bxx + byy;
  if (!(std::fabs(lap) >= 1e-12 * std::max({1.0, std::fabs(bxx), std::fabs(byy)}))) {
    throw ZeroLaplacianError("Laplacian of " + b.name() + " vanishes");
  }
  const Taylor2 inv = reciprocal(t);
  const double lap_inv = inv.derivative(2, 0) + inv.derivative(0, 2);
  const double b2 = t.value() * t.value();
  return -b2 * b2 * lap_inv / lap;
}

ScalarField2 radial_B(double c1, double c2, double k) {
  if (!(k > 0.0)) throw ParamError("radial_B: K must be positive");
  const double amp = std::sqrt(k);
  const bool integer = is_nonneg_integer(c1);
  const int n = static_cast<int>(c1);
  auto power = [c1, integer, n](auto r2) {
    using std::pow;
    return integer ? ipow(r2, n) : pow(r2, c1);
  };
  auto fn = [amp, c2, power](auto x, auto y) {
    const auto rp = power(x * x + y * y);
    return -amp * (rp - c2) / (rp + c2);
  };
  ScalarField2::Domain domain = [c2, integer, power](Point2 p) {
    const double r2 = p.x * p.x + p.y * p.y;
    if (!integer && r2 == 0.0) return false;
    return power(r2) + c2 != 0.0;
  };
  return make_field("B_r", fn, std::move(domain));
}

namespace {

auto radial_potential_fn(double c1, double c2) {
  const bool integer = is_nonneg_integer(c1 - 1.0);
  return [c1, c2, integer](auto x, auto y) {
    using std::pow;
    const auto r2 = x * x + y * y;
    const auto lower = integer ? ipow(r2, static_cast<int>(c1 - 1.0)) : pow(r2, c1 - 1.0);
    const auto rp = is_nonneg_integer(c1) ? ipow(r2, static_cast<int>(c1)) : pow(r2, c1);
    const auto den = rp + c2;
    return -8.0 * c2 * c1 * c1 * lower / (den * den);
  };
}

bool radial_potential_domain(double c1, double c2, Point2 p) {
  const double r2 = p.x * p.x + p.y * p.y;
  if (r2 == 0.0 && !is_nonneg_integer(c1 - 1.0)) return false;
  return std::pow(r2, c1) + c2 != 0.0;
}

}  // namespace

double radial_potential(double c1, double c2, Point2 p) {
  if (!radial_potential_domain(c1, c2, p)) {
    throw DomainError("radial potential undefined at (" + format_double(p.x) + ", " +
                      format_double(p.y) + ")");
  }
  return radial_potential_fn(c1, c2)(p.x, p.y);
}

ScalarField2 radial_potential_field(double c1, double c2) {
  return make_field("u_r", radial_potential_fn(c1, c2),
                    [c1, c2](Point2 p) { return radial_potential_domain(c1, c2, p); });
}

ScalarField2 shift_from_b(const ScalarField2& b) {
  return (-log_abs(b)).restricted([b](Point2 p) { return b(p) != 0.0; }).renamed("-ln|" + b.name() + "|");
}

SeparableProfile separable_S(double c1, double c2, double c3) {
  auto fn = [c1, c2, c3](auto x, auto y) {
    (void)y;
    using std::exp;
    using std::log;
    const auto e = exp(c1 * x);
    const auto arg = (e - c2) / (e + c2);
    if (!(value_of(arg) > 0.0)) throw BranchError("separable profile: logarithm of a non-positive value");
    return log(arg) + c3;
  };
  ScalarField2::Domain domain = [c1, c2](Point2 p) {
    const double e = std::exp(c1 * p.x);
    return (e - c2) / (e + c2) > 0.0;
  };
  return {make_field("S", fn, std::move(domain)), c2 == 0.0};
}

SeparableProfile tanh_profile(double p, double x0) {
  SeparableProfile prof = separable_S(2.0 * p, std::exp(2.0 * p * x0), 0.0);
  prof.s = prof.s.renamed("ln tanh");
  return prof;
}

double separable_ode_residual(const ScalarField2& s, double x) {
  const Point2 p{x, 0.0};
  require_domain(s, p);
  const Taylor2 t = s.taylor(p, 3);
  const double sx = t.derivative(1, 0);
  const double sxx = t.derivative(2, 0);
  const double sxxx = t.derivative(3, 0);
  return sx * sxxx - sxx * sxx - sx * sx * sx * sx;
}

namespace {

auto wall_fn(double c1, double c2) {
  return [c1, c2](auto x, auto y) {
    (void)y;
    using std::exp;
    const auto e = exp(c1 * x);
    const auto d = e - c2;
    return 2.0 * c2 * c1 * c1 * e / (d * d);
  };
}

Taylor2 separable_base(const Taylor2& h) {
  const Taylor2 hy = h.dy();
  const Taylor2 hyy = hy.dy();
  const Taylor2 u_h = -hyy + hy * hy;
  return u_h + 2.0 * hyy;
}

}  // namespace

double separable_potential(const ScalarField2& h, double c1, double c2, Point2 p) {
  require_domain(h, p);
  const double e = std::exp(c1 * p.x);
  if (e == c2) {
    throw DomainError("separable potential undefined at x = " + format_double(p.x));
  }
  return separable_base(h.taylor(p, 2)).value() + wall_fn(c1, c2)(p.x, p.y);
}

ScalarField2 separable_potential_field(const ScalarField2& h, double c1, double c2) {
  ScalarField2 wall = make_field("wall", wall_fn(c1, c2),
                                 [c1, c2](Point2 p) { return std::exp(c1 * p.x) != c2; });
  return combine_fields("separable[" + h.name() + "]", {h, wall}, {2, 0},
                        [](std::span<const Taylor2> t) { return separable_base(t[0]) + t[1]; });
}

ShiftFunction certify(const ScalarField2& h, const ScalarField2& s, const GridSpec& probe,
                      const ScalarField2::Domain& region) {
  probe.validate();
  ShiftFunction out{h, s, 0.0, true};
  std::size_t used = 0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const Point2 p = probe.node(k);
    if (region && !region(p)) continue;
    if (!h.in_domain(p) || !s.in_domain(p)) continue;
    const auto [r22, r23] = shift_residuals(h, s, p);
    out.certificate = std::max({out.certificate, std::fabs(r22), std::fabs(r23)});
    const double hv = h(p);
    if (std::fabs(s(p) + 2.0 * hv) > 1e-12 * std::max(1.0, std::fabs(hv))) out.moutard_case = false;
    ++used;
  }
  if (used == 0) throw EmptyMaskError("certify: no usable probe nodes");
  return out;
}

}  // namespace darboux
