#pragma once

#include <functional>
#include <utility>

#include "darboux2d/field.hpp"
#include "darboux2d/grid.hpp"
#include "darboux2d/recovery.hpp"

namespace darboux {

/// Pointwise coefficients of the nonlocal Darboux transformation driven by
/// the drift h and the shift s (new drift h + s):
///   F  = 2 s_x (s_x + 2 h_x) + 2 s_y (s_y + 2 h_y)
///   F1 = (s_x + 2 h_x)(-2 (s_xy + h_xy) + (s_y - 2 h_y) s_x)
///      + (s_y + 2 h_y)(s_xx - s_yy - 2 h_yy + (s_y - 2 h_y) s_y)
///   F2 = s_x s_xx + 2 s_y (s_xy + h_xy) - s_x (s_yy + 2 h_yy)
///      - (s_x + 2 h_x) s_x^2 - (s_y + 2 h_y) s_x s_y
///   R1 = F1 / F,  R2 = F2 / F.
struct DarbouxCoefficients {
  double f = 0.0, f1 = 0.0, f2 = 0.0;
  double r1 = 0.0, r2 = 0.0;
};

/// |F| below this times max(1, |s_x|, |s_y|, |h_x|, |h_y|)^2 is degenerate.
inline constexpr double kDegenerateTolerance = 1e-12;

/// Throws DegenerateError where F vanishes (for instance for constant s).
DarbouxCoefficients coefficients(const ScalarField2& h, const ScalarField2& s, Point2 p);

/// Left-hand sides of the two third-order equations that the shift s must
/// satisfy for the transformation to exist. Zero for admissible (h, s).
std::pair<double, double> shift_residuals(const ScalarField2& h, const ScalarField2& s, Point2 p);

/// u - Laplacian(s) + 2 h_x s_x + s_x^2 + 2 s_y h_y + s_y^2.
double new_potential(const ScalarField2& u, const ScalarField2& h, const ScalarField2& s, Point2 p);
ScalarField2 new_potential_field(const ScalarField2& u, const ScalarField2& h, const ScalarField2& s);

/// (R1 + h_y) Y - Y_y + e^h R2 Q, for Q recovered from (Y, e^-h).
/// Throws CompatibilityError if Q's curl defect exceeds kCompatibilityTolerance;
/// the returned field raises DegenerateError where F vanishes.
ScalarField2 new_solution(const ScalarField2& y, const NonlocalPotential& q, const ScalarField2& h,
                          const ScalarField2& s);
/// Same formula with an arbitrary field in place of Q (no compatibility check).
ScalarField2 new_solution(const ScalarField2& y, const ScalarField2& q, const ScalarField2& h,
                          const ScalarField2& s);

/// e^-s (R1 W - W_y + R2 Q), the transformed Fokker-Planck solution.
ScalarField2 fokker_planck_new_w(const ScalarField2& w, const ScalarField2& q, const ScalarField2& h,
                                 const ScalarField2& s);
/// Same, with caller-supplied coefficients; the result has no analytic jets.
using CoefficientMap = std::function<DarbouxCoefficients(Point2)>;
ScalarField2 fokker_planck_new_w(const ScalarField2& w, const ScalarField2& q, const ScalarField2& s,
                                 CoefficientMap coeffs_at);

/// The shift system for h = 0 written in B = e^-s:
///   r1 = -(2 B B_y B_xy + B B_x (B_xx - B_yy) + B_x |grad B|^2) Laplacian(B)
///        + B |grad B|^2 d/dx Laplacian(B)
///   r2 = -(2 B B_x B_xy - B B_y (B_xx - B_yy) + B_y |grad B|^2) Laplacian(B)
///        + B |grad B|^2 d/dy Laplacian(B)
std::pair<double, double> h0_residual(const ScalarField2& b, Point2 p);

/// K = -B^4 Laplacian(1/B) / Laplacian(B); constant along solutions of the
/// h = 0 system. Throws ZeroLaplacianError where Laplacian(B) vanishes
/// (relative to max(1, |B_xx|, |B_yy|)).
double h0_first_integral(const ScalarField2& b, Point2 p);

/// B_r = -sqrt(K) ((r^2)^C1 - C2) / ((r^2)^C1 + C2). The origin is excluded
/// from the domain unless C1 is a non-negative integer; zeros of the
/// denominator are always excluded. Throws ParamError if K <= 0.
ScalarField2 radial_B(double c1, double c2, double k);

/// -8 C2 C1^2 (r^2)^(C1-1) / ((r^2)^C1 + C2)^2 (equal to Laplacian(B_r)/B_r).
double radial_potential(double c1, double c2, Point2 p);
ScalarField2 radial_potential_field(double c1, double c2);

/// s = -ln|B|.
ScalarField2 shift_from_b(const ScalarField2& b);

struct SeparableProfile {
  ScalarField2 s;           // function of x only
  bool degenerate = false;  // C2 = 0 collapses S to a constant
};

/// S(x) = ln((e^{C1 x} - C2) / (e^{C1 x} + C2)) + C3. Evaluating where the
/// logarithm's argument is not positive raises BranchError.
SeparableProfile separable_S(double c1, double c2, double c3);
/// ln tanh(p (x - x0)), i.e. C1 = 2p, C2 = e^{2 p x0}, C3 = 0.
SeparableProfile tanh_profile(double p, double x0);

/// S_x S_xxx - S_xx^2 - S_x^4 at abscissa x.
double separable_ode_residual(const ScalarField2& s, double x);

/// u_H + 2 H'' + 2 C2 C1^2 e^{C1 x} / (e^{C1 x} - C2)^2 with u_H = -H'' + H'^2,
/// for a drift H depending on y only.
double separable_potential(const ScalarField2& h, double c1, double c2, Point2 p);
ScalarField2 separable_potential_field(const ScalarField2& h, double c1, double c2);

/// A shift s for the drift h with the largest shift-system residual found on
/// a probe lattice. `moutard_case` marks s = -2h, where the transformation
/// reduces to the Moutard one and F may vanish.
struct ShiftFunction {
  ScalarField2 h;
  ScalarField2 s;
  double certificate = 0.0;
  bool moutard_case = false;
};

/// Probe nodes outside either domain (or `region`) are skipped; throws
/// EmptyMaskError when none remain.
ShiftFunction certify(const ScalarField2& h, const ScalarField2& s, const GridSpec& probe,
                      const ScalarField2::Domain& region = {});

}  // namespace darboux
