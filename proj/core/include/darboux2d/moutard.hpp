#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "darboux2d/field.hpp"
#include "darboux2d/grid.hpp"
#include "darboux2d/recovery.hpp"

namespace darboux {

enum class TransformKind { kMoutard, kTwofold, kNonlocalShift };

const char* to_string(TransformKind kind);

using ParamList = std::vector<std::pair<std::string, double>>;

struct TransformStep {
  TransformKind kind = TransformKind::kMoutard;
  std::vector<std::string> seeds;  // field identifiers
  ParamList params;                // constants, base points, profile parameters
};

/// Ordered log of the transformations that produced a pair, together with
/// the catalog entry and parameters of the starting point.
struct TransformRecord {
  std::string entry;
  ParamList params;
  std::vector<TransformStep> steps;

  TransformRecord& add(TransformKind kind, std::vector<std::string> seeds, ParamList params);
  std::optional<double> param(const std::string& key) const;
};

/// Potential u with a claimed zero-energy solution Y of (Laplacian - u) Y = 0.
struct SchrodingerPair {
  ScalarField2 u;
  ScalarField2 y;
  TransformRecord provenance;
};

/// u = -Laplacian(h) + h_x^2 + h_y^2.
double drift_potential(const ScalarField2& h, Point2 p);
ScalarField2 drift_potential_field(const ScalarField2& h);

/// Y = W e^h and its inverse W = Y e^-h.
ScalarField2 substitution_y_from_w(const ScalarField2& w, const ScalarField2& h);
ScalarField2 substitution_w_from_y(const ScalarField2& y, const ScalarField2& h);

/// Relative threshold below which a seed value counts as zero; the scale
/// is max(1, |Y_h,x|, |Y_h,y|).
inline constexpr double kZeroSeedTolerance = 1e-12;

/// u - 2 Laplacian(ln Y_h) = u - 2 (Y_h Laplacian(Y_h) - |grad Y_h|^2) / Y_h^2.
/// Throws ZeroSeedError where Y_h vanishes.
double moutard_potential(const ScalarField2& u, const ScalarField2& yh, Point2 p);
ScalarField2 moutard_potential_field(const ScalarField2& u, const ScalarField2& yh);

/// (W_new, Y_new) = (e^{2h} Q, e^h Q).
std::pair<ScalarField2, ScalarField2> moutard_pair_map(const ScalarField2& w, const ScalarField2& q,
                                                       const ScalarField2& h);

/// Q / Y_h for Q recovered from (Y, Y_h). Throws CompatibilityError when the
/// recorded curl defect of Q exceeds kCompatibilityTolerance; the returned
/// field raises ZeroSeedError where Y_h vanishes.
ScalarField2 moutard_solution(const ScalarField2& y, const ScalarField2& yh, const NonlocalPotential& q);

/// 1 / Y_h.
ScalarField2 moutard_simple_solution(const ScalarField2& yh);

/// Relative threshold below which Q12 counts as zero.
inline constexpr double kZeroQTolerance = 1e-12;

/// Potential after two Moutard steps seeded by Y1 then the image of Y2:
///   u + 4 (Y2_y Y1_x - Y2_x Y1_y) / Q12
///     + 2 ((Y2_x Y1 - Y2 Y1_x)^2 + (Y2_y Y1 - Y2 Y1_y)^2) / Q12^2,
/// with Q12 recovered from (Y2, Y1). Throws ZeroQError where Q12 vanishes.
double twofold_potential(const ScalarField2& u, const ScalarField2& y1, const ScalarField2& y2,
                         const NonlocalPotential& q12, Point2 p);
ScalarField2 twofold_potential_field(const ScalarField2& u, const ScalarField2& y1,
                                     const ScalarField2& y2, const ScalarField2& q12);

/// Y1 / Q12; the returned field raises ZeroQError where Q12 vanishes.
ScalarField2 twofold_solution(const ScalarField2& y1, const ScalarField2& q12);

/// Additive constant that makes sampled Q values strictly positive:
/// 0 when the samples already have one sign, otherwise -min + margin with
/// margin = 1e-6 (max - min). Returns nullopt when the samples cannot
/// decide (non-finite values or a spread beyond kDefaultMagnitudeCap).
std::optional<double> choose_sign_constant(const GridData& q_samples);

}  // namespace darboux
