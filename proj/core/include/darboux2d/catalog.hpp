#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "darboux2d/field.hpp"
#include "darboux2d/grid.hpp"
#include "darboux2d/moutard.hpp"
#include "darboux2d/recovery.hpp"

namespace darboux {

/// Closed-form fields of the worked examples, used as oracles.
namespace oracle {

/// ((r^2)^{3/2} - 1) / ((r^2)^{3/2} + 1).
ScalarField2 b_three_halves();
/// x / r^2, y / r^2 and their Q partners -y / r^2 + c, x / r^2 + c.
ScalarField2 y_l1();
ScalarField2 y_l2();
ScalarField2 q_l1(double c);
ScalarField2 q_l2(double c);
/// -18 r / (r^3 + 1)^2.
ScalarField2 radial_potential_three_halves();
/// Transformed harmonic seeds, with the constant term c x (5 r^3 - 1) / (r^2 (r^3 + 1)).
ScalarField2 y_tilde_l1(double c);
ScalarField2 y_tilde_l2(double c);
/// (49 r^3 + 1) / (2 r^4 (r^3 + 1)) + c / 2.
ScalarField2 q12(double c);
/// Twofold potential and solution for the constant c.
ScalarField2 twofold_potential(double c);
ScalarField2 twofold_solution(double c);

/// Trigonometric family with parameters (p, x0, C).
ScalarField2 trig_potential_intermediate(double p, double x0);
ScalarField2 trig_seed(double p, double x0, double c);
ScalarField2 trig_potential_final(double p, double x0, double c);
ScalarField2 trig_solution_final(double p, double x0, double c);
ScalarField2 trig_q(double c);

}  // namespace oracle

/// One machinery-vs-closed-form comparison of a catalog entry.
struct Comparison {
  std::string label;
  ScalarField2 machinery;
  ScalarField2 oracle;
};

struct EntryOptions {
  /// Base point of every Q recovery; entry-specific default when unset.
  std::optional<Point2> base;
  int quadrature_n = kDefaultPanelsPerUnit;
};

/**
 * A worked example: the final (potential, solution) pair in closed form,
 * the same pair produced by the generic transformation chain, intermediate
 * comparisons, and the reference grid on which they are checked.
 */
struct CatalogEntry {
  std::string name;
  ParamList params;
  bool nonsingular = false;

  SchrodingerPair closed_form;  // oracle pair
  SchrodingerPair machinery;    // pair produced by the transformation chain
  std::vector<Comparison> comparisons;

  GridSpec reference_grid;
  ScalarField2::Domain region;    // reference-grid mask (true = keep)
  ScalarField2::Domain keep_out;  // no Q integration path may enter it
  Point2 base_point;
  std::vector<NonlocalPotential> potentials;  // every Q recovered by the chain
};

/// Radial family from B = -B_r(K = 1). Machinery and oracle
/// solutions are available for C1 = 3/2, C2 = 1 only; other parameters give
/// the potential comparison and the transformed harmonic seed.
CatalogEntry build_radial_example(double c1, double c2, double c_l1 = 0.0, double c_l2 = 0.0,
                                  const EntryOptions& options = {});
/// Twofold Moutard transformation of the C1 = 3/2 radial example.
CatalogEntry build_twofold_radial(double c, const EntryOptions& options = {});
/// Trigonometric family: nonlocal step from u = -1, then a Moutard step.
CatalogEntry build_trig_example(double p, double x0, double c, const EntryOptions& options = {});

/// Entry names: "radial", "twofold-radial", "trig".
const std::vector<std::string>& entry_names();
/// Default parameters of an entry, in declaration order.
ParamList default_params(const std::string& name);
/// Builds by name; `overrides` replace defaults. Throws UnknownEntryError
/// for an unknown name and ParamError for an unknown parameter key.
CatalogEntry build_entry(const std::string& name, const std::map<std::string, double>& overrides = {},
                         const EntryOptions& options = {});

struct OracleDelta {
  std::vector<std::pair<std::string, Norms>> items;  // per comparison
  Norms potential;  // final potential
  Norms solution;   // final solution
  /// Nodes where exactly one of machinery and oracle could be evaluated.
  std::size_t mask_mismatch = 0;
  Norms worst() const;
};

/// Norms of machinery - oracle over nodes where both are masked in. Throws
/// PathBlockedError when a Q path cannot reach some grid node.
OracleDelta oracle_delta(const CatalogEntry& entry, const GridSpec& spec,
                         const ScalarField2::Domain& region = {});
OracleDelta oracle_delta(const CatalogEntry& entry);

/// Rebuilds the entry recorded in `record` and returns the largest
/// difference of its machinery fields against `entry`'s at `probes`.
double replay(const TransformRecord& record, const CatalogEntry& entry,
              const std::vector<Point2>& probes);

}  // namespace darboux
