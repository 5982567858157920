#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "darboux2d/grid.hpp"
#include "darboux2d/verify.hpp"

namespace darboux::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verification failed or a transformation raised
  kExitUnknown = 2,  // unknown entry, kind or parameter owner
  kExitInput = 3,    // unreadable input, bad number, bad configuration
};

/// Values shared by the subcommands; a --config file fills them first and
/// command-line flags override.
struct Settings {
  std::optional<double> x_min, x_max, y_min, y_max;
  std::optional<int> nx, ny;
  VerifyThresholds thresholds;
  int quadrature_n = kDefaultPanelsPerUnit;
  double clip_lo = 2.0;
  double clip_hi = 98.0;
  double oracle_max_abs = 1e-5;
  std::string out_dir = ".";

  /// `base` with the window and node overrides applied.
  GridSpec grid(GridSpec base) const;
};

/// Flat "key = value" lines; blank lines and lines starting with '#' are
/// skipped. Throws ParseError on a malformed line.
std::map<std::string, std::string> parse_config(std::istream& in);
/// Applies known keys to `s`; throws ParseError on an unknown key or value.
void apply_config(const std::map<std::string, std::string>& kv, Settings& s);

/// Linear-interpolated percentile (0..100) of the valid samples.
double percentile(std::vector<double> values, double pct);

/// Binary P6 image, one pixel per node with y increasing upwards.
/// Valid nodes are mapped linearly blue-white-red over the [clip_lo, clip_hi]
/// percentile range; masked nodes are black. Returns false when no node is
/// valid (the image is then all black).
bool write_ppm(const GridData& g, double clip_lo, double clip_hi, std::ostream& out);

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace darboux::cli
