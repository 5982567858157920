#include "darboux2d/grid.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "darboux2d/errors.hpp"

namespace darboux {

void GridSpec::validate() const {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw GridError("grid bounds must satisfy x_min < x_max and y_min < y_max");
  }
  if (nx < 3 || ny < 3) throw GridError("grid needs at least 3 nodes per axis");
}

Point2 GridSpec::node(int i, int j) const {
  // Scaling before division keeps nested grids node-coincident bit for bit.
  return {x_min + (x_max - x_min) * i / (nx - 1), y_min + (y_max - y_min) * j / (ny - 1)};
}

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.nx = 2 * nx - 1;
  g.ny = 2 * ny - 1;
  return g;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "[" << format_double(x_min) << "," << format_double(x_max) << "]x[" << format_double(y_min)
     << "," << format_double(y_max) << "]@" << nx << "x" << ny;
  return os.str();
}

GridData::GridData(GridSpec s)
    : spec(s), values(s.size(), std::numeric_limits<double>::quiet_NaN()), mask(s.size(), 0) {}

std::size_t GridData::masked_in() const {
  std::size_t n = 0;
  for (auto m : mask) n += (m != 0);
  return n;
}

GridData sample(const ScalarField2& f, const GridSpec& spec, double magnitude_cap,
                const ScalarField2::Domain& region) {
  spec.validate();
  GridData g(spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const Point2 p = spec.node(k);
    if (region && !region(p)) continue;
    if (!f.in_domain(p)) continue;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = f(p);
    } catch (const Error&) {
      continue;
    }
    g.values[k] = v;
    g.mask[k] = std::isfinite(v) && std::fabs(v) <= magnitude_cap;
  }
  return g;
}

Norms residual_norms(const GridData& g) {
  Norms n;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (!g.valid(k)) continue;
    const double a = std::fabs(g.values[k]);
    n.max_abs = std::max(n.max_abs, a);
    sum += a * a;
    ++count;
  }
  if (count == 0) throw EmptyMaskError("no masked-in nodes");
  n.rms = std::sqrt(sum / static_cast<double>(count));
  return n;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const GridData& g, std::ostream& out) {
  const GridSpec& s = g.spec;
  out << "# " << format_double(s.x_min) << "," << format_double(s.x_max) << ","
      << format_double(s.y_min) << "," << format_double(s.y_max) << "," << s.nx << "," << s.ny
      << "\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Point2 p = s.node(k);
    out << format_double(p.x) << "," << format_double(p.y) << "," << format_double(g.values[k])
        << "," << (g.valid(k) ? 1 : 0) << "\n";
  }
}

namespace {

double parse_double(std::string_view tok, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& t : out) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r')) t.remove_suffix(1);
  }
  return out;
}

}  // namespace

GridData read_csv(std::istream& in) {
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) {
    throw ParseError("missing '# x_min,x_max,y_min,y_max,nx,ny' header");
  }
  const auto head = split(std::string_view(line).substr(1));
  if (head.size() != 6) throw ParseError("header must carry six entries");
  GridSpec spec;
  spec.x_min = parse_double(head[0], lineno);
  spec.x_max = parse_double(head[1], lineno);
  spec.y_min = parse_double(head[2], lineno);
  spec.y_max = parse_double(head[3], lineno);
  const double nx = parse_double(head[4], lineno);
  const double ny = parse_double(head[5], lineno);
  if (nx != std::floor(nx) || ny != std::floor(ny) || nx > 1e7 || ny > 1e7) {
    throw ParseError("node counts must be integers");
  }
  spec.nx = static_cast<int>(nx);
  spec.ny = static_cast<int>(ny);
  try {
    spec.validate();
  } catch (const GridError& e) {
    throw ParseError(e.what());
  }

  GridData g(spec);
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (k >= spec.size()) throw ParseError("more rows than nx*ny");
    const auto tok = split(line);
    if (tok.size() != 4) throw ParseError("line " + std::to_string(lineno) + ": expected x,y,value,mask");
    parse_double(tok[0], lineno);
    parse_double(tok[1], lineno);
    g.values[k] = parse_double(tok[2], lineno);
    if (tok[3] == "1") {
      g.mask[k] = 1;
    } else if (tok[3] == "0") {
      g.mask[k] = 0;
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": mask must be 0 or 1");
    }
    ++k;
  }
  if (k != spec.size()) throw ParseError("fewer rows than nx*ny");
  return g;
}

void write_csv_file(const GridData& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  write_csv(g, out);
  if (!out) throw ParseError("write failed for " + path);
}

GridData read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return read_csv(in);
}

}  // namespace darboux
