#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darboux2d/catalog.hpp"
#include "darboux2d/field.hpp"
#include "darboux2d/grid.hpp"
#include "darboux2d/moutard.hpp"
#include "darboux2d/nonlocal.hpp"

namespace darboux {

enum class LaplacianMode {
  kAnalytic,  // analytic jets when the field has them, else grid differences
  kGridFD,    // 3-point central differences with the grid spacing
};

/// Per-node Laplacian(Y) - u Y. Nodes are masked out where either field
/// cannot be evaluated (domain, library error, non-finite, |value| above the
/// magnitude cap) or `region` is false. Throws EmptyMaskError when nothing
/// remains.
GridData schrodinger_residual(const ScalarField2& u, const ScalarField2& y, const GridSpec& spec,
                              LaplacianMode mode = LaplacianMode::kAnalytic,
                              const ScalarField2::Domain& region = {});

/// Same residual for sampled grids (5-point Laplacian over `stride` grid
/// spacings); a node needs itself and its four stencil neighbours valid in
/// `y` and itself valid in `u`.
GridData schrodinger_residual(const GridData& u, const GridData& y, int stride = 1);

/// Per-node Laplacian(W) + d/dx(2 h_x W) + d/dy(2 h_y W).
GridData fokker_planck_residual(const ScalarField2& w, const ScalarField2& h, const GridSpec& spec,
                                const ScalarField2::Domain& region = {});

/// (Y_h Y~)_x + Y_h^2 (Y/Y_h)_y and (Y_h Y~)_y - Y_h^2 (Y/Y_h)_x at p.
/// Throws ZeroSeedError where Y_h vanishes.
std::pair<double, double> moutard_relation_residual(const ScalarField2& y, const ScalarField2& y_tilde,
                                                    const ScalarField2& yh, Point2 p);

/// Observed order of the grid-difference residual over three nested grids
/// (each the refinement of the previous one). Y is differenced on the grid
/// even when it has analytic jets. The rms is taken over nodes of the
/// coarsest grid that are valid on all three; the order is the mean of the
/// two log2 ratios. Empty when the residual vanishes identically.
std::optional<double> convergence_order(const ScalarField2& u, const ScalarField2& y,
                                        const std::array<GridSpec, 3>& specs,
                                        const ScalarField2::Domain& region = {});
/// Uses `coarsest`, its refinement and the refinement of that.
std::optional<double> convergence_order(const ScalarField2& u, const ScalarField2& y, const GridSpec& coarsest,
                                        const ScalarField2::Domain& region = {});
/// Same estimate from one pair of sampled grids: the residual is formed with
/// stencil strides 4, 2 and 1 and compared on nodes where all three exist.
std::optional<double> convergence_order(const GridData& u, const GridData& y);

inline constexpr double kDefaultGrowthFactor = 1e4;

/// Nodes inside `region` where f cannot be evaluated, or where |f| exceeds
/// growth_factor times the median of |f| over the evaluable nodes.
std::vector<Point2> singularity_scan(const ScalarField2& f, const GridSpec& spec,
                                     double growth_factor = kDefaultGrowthFactor,
                                     const ScalarField2::Domain& region = {});
/// Same for sampled data; only the growth test applies.
std::vector<Point2> singularity_scan(const GridData& g, double growth_factor = kDefaultGrowthFactor);

struct IntertwineOptions {
  Point2 base{0.0, 0.0};
  int quadrature_n = kDefaultPanelsPerUnit;
  ScalarField2::Domain keep_out;
  ScalarField2::Domain region;
};

/// Maps the solution of `pair` (a solution for the potential of h) through
/// the transformation driven by `shift` (Moutard solution Q / e^-h when
/// shift.moutard_case, the general formula otherwise) and returns the
/// Schroedinger residual norms of the image against the new potential.
Norms intertwine_check(const ShiftFunction& shift, const SchrodingerPair& pair, const GridSpec& spec,
                       const IntertwineOptions& options);

struct VerifyThresholds {
  double max_abs = 1e-6;     // analytic-jet residual
  double order_min = 1.7;
  double order_max = 2.3;
  double growth_factor = kDefaultGrowthFactor;
};

struct VerificationReport {
  std::string entry;
  std::string grid;
  double max_abs = 0.0;
  double rms = 0.0;
  std::optional<double> order;
  std::size_t singularities_found = 0;
  std::optional<double> oracle_delta;  // machinery vs closed form, when computed
  bool passed = false;
  std::vector<std::string> failures;

  /// Flat "key=value" lines.
  void write(std::ostream& out) const;
  std::string to_string() const;
};

/// Checks the closed-form pair of `entry`: analytic residual, grid-difference
/// convergence order, and singularity scans of potential and solution.
VerificationReport verify_entry(const CatalogEntry& entry, const GridSpec& spec,
                                const ScalarField2::Domain& region, const VerifyThresholds& thresholds = {});
VerificationReport verify_entry(const CatalogEntry& entry, const VerifyThresholds& thresholds = {});

/// Checks sampled (u, Y) grids: 5-point residual norms, its order under
/// stencil refinement, and a growth scan of u.
VerificationReport verify_grids(const GridData& u, const GridData& y, const std::string& label,
                                const VerifyThresholds& thresholds = {});

}  // namespace darboux
