#pragma once

#include <memory>
#include <optional>
#include <string>

#include "darboux2d/field.hpp"
#include "darboux2d/grid.hpp"

namespace darboux {

/// Gradient of the nonlocal variable Q tied to (Y, Y_h):
///   Q_y = Y_x Y_h - Y Y_h,x,   Q_x = -(Y_y Y_h - Y Y_h,y).
struct QGradient {
  double qx = 0.0;
  double qy = 0.0;
};

QGradient q_gradient(const ScalarField2& y, const ScalarField2& yh, Point2 p);

/// Taylor polynomials of (Q_x, Q_y) of the requested order; Y and Y_h are
/// expanded one order higher.
std::pair<Taylor2, Taylor2> q_gradient_taylor(const ScalarField2& y, const ScalarField2& yh, Point2 p,
                                              int order);

enum class PathOrder {
  kHorizontalFirst,  // along y = base.y to the target x, then along x
  kVerticalFirst,    // along x = base.x to the target y, then along y
  kAuto,             // horizontal-first, vertical-first if the former is blocked
};

struct RecoveryOptions {
  PathOrder path = PathOrder::kAuto;
  /// Region no integration path may enter (true = forbidden).
  ScalarField2::Domain keep_out;
  /// Lattice for the recorded compatibility residual; defaults to 5x5
  /// nodes on the unit square centred at the base point.
  std::optional<GridSpec> probe;
};

inline constexpr int kDefaultPanelsPerUnit = 64;
inline constexpr double kCompatibilityTolerance = 1e-6;

/**
 * The nonlocal variable Q of a solution pair (Y, Y_h), defined by
 *
 *   Q(p) = constant + integral of (Q_x dx + Q_y dy) along an axis-aligned
 *          L-path from the base point to p,
 *
 * with composite 4-point Gauss-Legendre quadrature on panels of length 1/n.
 * The L-path runs along lattice lines base + (i, j)/n to the lattice node
 * nearest p, then takes a sub-panel jog (same leg order) to p. Lattice line
 * integrals are cached, so evaluating Q at many points, including inside
 * another Q's integrand, costs O(1) panels per point once the lattice lines
 * are filled. Copies share the cache.
 */
class NonlocalPotential {
 public:
  const ScalarField2& field() const { return field_; }
  double operator()(Point2 p) const { return field_(p); }

  Point2 base_point() const;
  double additive_constant() const { return constant_; }
  /// Max |d(Q_x)/dy - d(Q_y)/dx| over the probe lattice.
  double compat_residual() const { return compat_residual_; }
  const std::string& source_y() const;
  const std::string& source_yh() const;
  int panels_per_unit() const;

  /// Line integral from the base point, without the additive constant.
  double integral(Point2 p, PathOrder order) const;
  /// constant + integral(p, order).
  double evaluate(Point2 p, PathOrder order) const { return constant_ + integral(p, order); }

  /// Throws PathBlockedError if some node of `spec` (inside `region`, when
  /// given) cannot be reached from the base point.
  void check_paths(const GridSpec& spec, const ScalarField2::Domain& region = {}) const;

  /// Same integrals, different additive constant.
  NonlocalPotential with_constant(double constant) const;

  struct Integrator;

 private:
  friend NonlocalPotential recover_q(const ScalarField2&, const ScalarField2&, Point2, double, int,
                                     const RecoveryOptions&);
  NonlocalPotential(std::shared_ptr<Integrator> integrator, double constant, double compat);

  std::shared_ptr<Integrator> integrator_;
  double constant_ = 0.0;
  double compat_residual_ = 0.0;
  ScalarField2 field_;
};

NonlocalPotential recover_q(const ScalarField2& y, const ScalarField2& yh, Point2 base_point,
                            double constant, int quadrature_n = kDefaultPanelsPerUnit,
                            const RecoveryOptions& options = {});

/// Max over masked-in nodes of |d(Q_x)/dy - d(Q_y)/dx|. This equals
/// |Y_h Laplacian(Y) - Y Laplacian(Y_h)| and vanishes when both fields solve
/// the same Schroedinger equation.
double compatibility_residual(const ScalarField2& y, const ScalarField2& yh, const GridSpec& spec,
                              const ScalarField2::Domain& region = {});

}  // namespace darboux
