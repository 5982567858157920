#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "darboux2d/field.hpp"

namespace darboux {

/// Rectangular sampling window with nx * ny nodes including the edges.
struct GridSpec {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  int nx = 3, ny = 3;

  /// Throws GridError unless x_min < x_max, y_min < y_max and nx, ny >= 3.
  void validate() const;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  /// Row-major: index = j * nx + i, with i along x.
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Point2 node(int i, int j) const;
  Point2 node(std::size_t k) const { return node(static_cast<int>(k % nx), static_cast<int>(k / nx)); }

  /// Same window with 2n - 1 nodes per axis (half the spacing).
  GridSpec refined() const;
  std::string describe() const;
};

struct GridData {
  GridSpec spec;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;  // 1 = valid sample

  explicit GridData(GridSpec s);
  GridData() = default;

  std::size_t masked_in() const;
  bool valid(std::size_t k) const { return mask[k] != 0; }
};

struct Norms {
  double max_abs = 0.0;
  double rms = 0.0;
};

inline constexpr double kDefaultMagnitudeCap = 1e8;

/// Samples `f` at every node. Nodes are masked out where the domain
/// predicate fails, evaluation raises a library error, the value is not
/// finite or exceeds `magnitude_cap`, or `region` (when given) is false.
GridData sample(const ScalarField2& f, const GridSpec& spec,
                double magnitude_cap = kDefaultMagnitudeCap, const ScalarField2::Domain& region = {});

/// Max-abs and root-mean-square over masked-in nodes; EmptyMaskError when
/// none are.
Norms residual_norms(const GridData& g);

/// CSV layout: "# x_min,x_max,y_min,y_max,nx,ny" header carrying the values,
/// then one "x,y,value,mask" row per node in row-major order, 17 significant
/// digits.
void write_csv(const GridData& g, std::ostream& out);
GridData read_csv(std::istream& in);
void write_csv_file(const GridData& g, const std::string& path);
GridData read_csv_file(const std::string& path);

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

}  // namespace darboux
