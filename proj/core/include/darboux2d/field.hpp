#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "darboux2d/taylor.hpp"

namespace darboux {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Value and partial derivatives up to third order at one point.
/// Mixed partials are stored once.
struct Jet3 {
  double value = 0.0;
  double x = 0.0, y = 0.0;
  double xx = 0.0, xy = 0.0, yy = 0.0;
  double xxx = 0.0, xxy = 0.0, xyy = 0.0, yyy = 0.0;
  bool valid = true;

  double laplacian() const { return xx + yy; }
  static Jet3 from_taylor(const Taylor2& t);
  Taylor2 to_taylor(int order) const;
};

/// Default finite-difference step at `p`: 1e-4 * max(1, |x|, |y|).
double default_fd_step(Point2 p);

/**
 * Real scalar field on (a region of) the plane.
 *
 * Every field has a plain evaluator and a domain predicate. Closed-form
 * fields additionally carry an analytic Taylor evaluator valid up to
 * `analytic_order()`; `taylor()` falls back to central finite differences
 * (up to third order) when the analytic one is absent or too short.
 *
 * Fields are immutable values; copies share their evaluators.
 */
class ScalarField2 {
 public:
  using Evaluator = std::function<double(Point2)>;
  using TaylorEvaluator = std::function<Taylor2(Point2, int)>;
  using Domain = std::function<bool(Point2)>;

  ScalarField2();
  ScalarField2(std::string name, Evaluator value, Domain domain = {});
  ScalarField2(std::string name, Evaluator value, TaylorEvaluator taylor, int analytic_order,
               Domain domain = {});

  double operator()(Point2 p) const { return value_(p); }
  bool in_domain(Point2 p) const;

  /// Highest order served by the analytic evaluator, or -1 without one.
  int analytic_order() const { return analytic_order_; }
  bool has_analytic_jets(int order = 3) const { return analytic_order_ >= order; }

  /// Taylor polynomial of the given order at `p`: analytic when available,
  /// else finite differences (order <= 3, step `fd_step` or the default).
  Taylor2 taylor(Point2 p, int order, double fd_step = 0.0) const;

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }

  ScalarField2 renamed(std::string name) const;
  /// Same values, analytic evaluator dropped (finite differences only).
  ScalarField2 without_jets() const;
  /// Same field with the domain intersected with `extra`.
  ScalarField2 restricted(Domain extra) const;

 private:
  std::string name_;
  Evaluator value_;
  TaylorEvaluator taylor_;
  int analytic_order_ = -1;
  Domain domain_;
};

/// Builds a field from a generic callable `fn(x, y)` that is valid for both
/// `double` and `Taylor2` arguments; the result carries analytic jets.
template <class Fn>
ScalarField2 make_field(std::string name, Fn fn, ScalarField2::Domain domain = {},
                        int analytic_order = Taylor2::kMaxOrder) {
  ScalarField2::Evaluator value = [fn](Point2 p) { return static_cast<double>(fn(p.x, p.y)); };
  ScalarField2::TaylorEvaluator taylor = [fn](Point2 p, int order) -> Taylor2 {
    return fn(Taylor2::variable(p.x, 0, order), Taylor2::variable(p.y, 1, order));
  };
  return ScalarField2(std::move(name), std::move(value), std::move(taylor), analytic_order,
                      std::move(domain));
}

ScalarField2 constant_field(double c, std::string name = {});

/// Field computed pointwise from the Taylor polynomials of `inputs`.
/// Input k is requested `losses[k]` orders above the requested output
/// order; `combine` receives them in input order and must return a
/// polynomial of at least the requested order. `extra` further restricts
/// the domain.
using Combiner = std::function<Taylor2(std::span<const Taylor2>)>;
ScalarField2 combine_fields(std::string name, std::vector<ScalarField2> inputs,
                            std::vector<int> losses, Combiner combine,
                            ScalarField2::Domain extra = {});

ScalarField2 operator+(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator*(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator/(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator*(double c, const ScalarField2& a);
ScalarField2 operator-(const ScalarField2& a);
ScalarField2 exp(const ScalarField2& a);
ScalarField2 log_abs(const ScalarField2& a);
ScalarField2 reciprocal(const ScalarField2& a);

/// Analytic jet when available, else order-2 central differences
/// (5 points per axis; mixed thirds compose a first and a second
/// difference).
Jet3 jet3_at(const ScalarField2& f, Point2 p, double fd_step = 0.0);
double laplacian_at(const ScalarField2& f, Point2 p, double fd_step = 0.0);

/// Central-difference jet ignoring any analytic evaluator.
Jet3 fd_jet3(const ScalarField2& f, Point2 p, double fd_step);
/// Mixed second derivative by nested central first differences, applied
/// x-then-y (`x_first`) or y-then-x.
double fd_mixed_xy(const ScalarField2& f, Point2 p, double fd_step, bool x_first);

}  // namespace darboux
