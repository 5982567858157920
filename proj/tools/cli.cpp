#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "darboux2d/catalog.hpp"
#include "darboux2d/errors.hpp"
#include "darboux2d/moutard.hpp"
#include "darboux2d/nonlocal.hpp"

namespace darboux::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kParamKeys = {"C1", "C2", "CL1", "CL2", "C", "p", "x0"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError(what + ": '" + text + "' is not a finite number");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_number(text, what);
  if (v != std::floor(v) || std::fabs(v) > 1e7) throw ParseError(what + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

Point2 parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("base point must be 'x,y', got '" + text + "'");
  return {parse_number(text.substr(0, comma), "base x"), parse_number(text.substr(comma + 1), "base y")};
}

std::filesystem::path out_path(const Settings& s, const std::string& file) {
  return std::filesystem::path(s.out_dir) / file;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw ParseError("write failed for " + path.string());
}

Json params_json(const ParamList& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params) j[k] = v;
  return j;
}

Json record_json(const TransformRecord& r) {
  Json j;
  j["entry"] = r.entry;
  j["params"] = params_json(r.params);
  Json steps = Json::array();
  for (const auto& st : r.steps) {
    Json s;
    s["kind"] = to_string(st.kind);
    s["seeds"] = st.seeds;
    s["params"] = params_json(st.params);
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

Json tolerances_json(const Settings& s) {
  Json j;
  j["max_abs"] = s.thresholds.max_abs;
  j["order_min"] = s.thresholds.order_min;
  j["order_max"] = s.thresholds.order_max;
  j["growth_factor"] = s.thresholds.growth_factor;
  j["oracle_max_abs"] = s.oracle_max_abs;
  j["compatibility"] = kCompatibilityTolerance;
  return j;
}

/// Output of a command that produces a (potential, solution) pair.
struct PairProduct {
  std::string entry;
  ParamList params;
  std::optional<bool> nonsingular;
  SchrodingerPair pair;
  GridSpec grid;
  ScalarField2::Domain region;
  std::vector<NonlocalPotential> potentials;
};

void write_pair(const PairProduct& prod, const Settings& s, const std::string& prefix, std::ostream& out) {
  for (const auto& q : prod.potentials) q.check_paths(prod.grid, prod.region);
  const GridData u = sample(prod.pair.u, prod.grid, kDefaultMagnitudeCap, prod.region);
  const GridData y = sample(prod.pair.y, prod.grid, kDefaultMagnitudeCap, prod.region);

  ensure_dir(s.out_dir);
  const auto pu = out_path(s, prefix + "_potential.csv");
  const auto py = out_path(s, prefix + "_solution.csv");
  const auto pm = out_path(s, prefix + "_meta.json");
  std::ostringstream us, ys;
  write_csv(u, us);
  write_csv(y, ys);
  write_text(pu, us.str());
  write_text(py, ys.str());

  Json meta;
  meta["entry"] = prod.entry;
  meta["params"] = params_json(prod.params);
  meta["nonsingular"] = prod.nonsingular ? Json(*prod.nonsingular) : Json(nullptr);
  meta["transform_record"] = record_json(prod.pair.provenance);
  meta["tolerances"] = tolerances_json(s);
  meta["grid"] = prod.grid.describe();
  meta["fields"] = {{"potential", prod.pair.u.name()}, {"solution", prod.pair.y.name()}};
  meta["masked_in"] = {{"potential", u.masked_in()}, {"solution", y.masked_in()}};
  write_text(pm, meta.dump(2) + "\n");

  out << pu.string() << "\n" << py.string() << "\n" << pm.string() << "\n";
}

/// Flags shared by the subcommands; values are applied after the config file.
struct CommonFlags {
  std::string config;
  std::optional<double> x_min, x_max, y_min, y_max;
  std::optional<int> nx, ny;
  std::optional<int> quadrature_n;
  std::optional<std::string> out_dir;
  std::vector<std::pair<std::string, CLI::Option*>> param_opts;
  std::map<std::string, std::string> param_text;

  void attach(CLI::App* app, bool with_params, bool with_grid) {
    app->add_option("--config", config, "key=value configuration file");
    app->add_option("--out-dir", out_dir, "directory for output files");
    if (with_grid) {
      app->add_option("--x-min", x_min, "window");
      app->add_option("--x-max", x_max, "window");
      app->add_option("--y-min", y_min, "window");
      app->add_option("--y-max", y_max, "window");
      app->add_option("--nx", nx, "nodes along x");
      app->add_option("--ny", ny, "nodes along y");
      app->add_option("--n", quadrature_n, "quadrature panels per unit length");
    }
    if (with_params) {
      for (const auto& key : kParamKeys) {
        param_opts.emplace_back(key, app->add_option("--" + key, param_text[key], "entry parameter " + key));
      }
    }
  }

  Settings settings() const {
    Settings s;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw ParseError("cannot open config " + config);
      apply_config(parse_config(in), s);
    }
    if (x_min) s.x_min = x_min;
    if (x_max) s.x_max = x_max;
    if (y_min) s.y_min = y_min;
    if (y_max) s.y_max = y_max;
    if (nx) s.nx = nx;
    if (ny) s.ny = ny;
    if (quadrature_n) s.quadrature_n = *quadrature_n;
    if (out_dir) s.out_dir = *out_dir;
    if (s.quadrature_n <= 0) throw ParamError("quadrature panels per unit must be positive");
    return s;
  }

  std::map<std::string, double> params() const {
    std::map<std::string, double> p;
    for (const auto& [key, opt] : param_opts) {
      if (opt->count() > 0) p[key] = parse_number(param_text.at(key), "--" + key);
    }
    return p;
  }
};

EntryOptions entry_options(const Settings& s, const std::optional<std::string>& base) {
  EntryOptions o;
  o.quadrature_n = s.quadrature_n;
  if (base) o.base = parse_point(*base);
  return o;
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

PairProduct product_of(const CatalogEntry& e, const Settings& s) {
  return {e.name, e.params, e.nonsingular, e.machinery, s.grid(e.reference_grid), e.region, e.potentials};
}

const Comparison& comparison(const CatalogEntry& e, const std::string& label) {
  for (const auto& c : e.comparisons) {
    if (c.label == label) return c;
  }
  throw UnknownEntryError("entry '" + e.name + "' has no field '" + label + "'");
}

PairProduct transform_product(const std::string& kind, const std::string& entry_name,
                              std::map<std::string, double> params, const std::string& seed,
                              const EntryOptions& opts, const Settings& s) {
  if (kind == "moutard") {
    const CatalogEntry e = build_entry(entry_name, params, opts);
    if (seed != "solution") throw UnknownEntryError("unknown seed '" + seed + "' (expected 'solution')");
    const ScalarField2& yh = e.closed_form.y;
    PairProduct prod = product_of(e, s);
    prod.pair.u = moutard_potential_field(e.closed_form.u, yh).renamed("moutard[" + e.closed_form.u.name() + "]");
    prod.pair.y = moutard_simple_solution(yh);
    prod.pair.provenance = e.machinery.provenance;
    prod.pair.provenance.add(TransformKind::kMoutard, {yh.name()}, {});
    prod.nonsingular.reset();
    prod.potentials.clear();
    return prod;
  }
  if (kind == "twofold") {
    if (entry_name != "radial") {
      throw UnknownEntryError("no twofold route for entry '" + entry_name + "' (expected 'radial')");
    }
    const double c = take(params, "C", 0.0);
    const double c1 = take(params, "C1", 1.5);
    const double c2 = take(params, "C2", 1.0);
    if (c1 != 1.5 || c2 != 1.0) throw ParamError("the twofold seeds exist for C1 = 1.5, C2 = 1 only");
    if (!params.empty()) throw ParamError("twofold takes only C, C1, C2");
    return product_of(build_twofold_radial(c, opts), s);
  }
  if (kind == "shift") {
    const CatalogEntry e = build_entry(entry_name, params, opts);
    PairProduct prod = product_of(e, s);
    if (e.name == "trig") {
      prod.pair.u = comparison(e, "intermediate_potential").machinery;
      prod.pair.y = comparison(e, "seed").machinery;
      prod.pair.provenance.steps.resize(1);
      prod.nonsingular = false;
    } else if (e.name != "radial") {
      throw UnknownEntryError("no shift route for entry '" + e.name + "'");
    }
    return prod;
  }
  throw UnknownEntryError("unknown transform kind '" + kind + "' (expected moutard, twofold or shift)");
}

int report_error(const Error& e, std::ostream& err) {
  err << e.kind() << ": " << e.what() << "\n";
  if (dynamic_cast<const UnknownEntryError*>(&e)) return kExitUnknown;
  if (dynamic_cast<const ParamError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const GridError*>(&e)) {
    return kExitInput;
  }
  return kExitFailure;
}

}  // namespace

GridSpec Settings::grid(GridSpec base) const {
  if (x_min) base.x_min = *x_min;
  if (x_max) base.x_max = *x_max;
  if (y_min) base.y_min = *y_min;
  if (y_max) base.y_max = *y_max;
  if (nx) base.nx = *nx;
  if (ny) base.ny = *ny;
  base.validate();
  return base;
}

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

void apply_config(const std::map<std::string, std::string>& kv, Settings& s) {
  for (const auto& [key, value] : kv) {
    if (key == "x_min") s.x_min = parse_number(value, key);
    else if (key == "x_max") s.x_max = parse_number(value, key);
    else if (key == "y_min") s.y_min = parse_number(value, key);
    else if (key == "y_max") s.y_max = parse_number(value, key);
    else if (key == "nx") s.nx = parse_int(value, key);
    else if (key == "ny") s.ny = parse_int(value, key);
    else if (key == "max_abs") s.thresholds.max_abs = parse_number(value, key);
    else if (key == "order_min") s.thresholds.order_min = parse_number(value, key);
    else if (key == "order_max") s.thresholds.order_max = parse_number(value, key);
    else if (key == "growth_factor") s.thresholds.growth_factor = parse_number(value, key);
    else if (key == "oracle_max_abs") s.oracle_max_abs = parse_number(value, key);
    else if (key == "quadrature_n") s.quadrature_n = parse_int(value, key);
    else if (key == "clip_lo") s.clip_lo = parse_number(value, key);
    else if (key == "clip_hi") s.clip_hi = parse_number(value, key);
    else if (key == "out_dir") s.out_dir = value;
    else throw ParseError("unknown config key '" + key + "'");
  }
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw EmptyMaskError("percentile of no values");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(pct, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return values[lo] + t * (values[hi] - values[lo]);
}

bool write_ppm(const GridData& g, double clip_lo, double clip_hi, std::ostream& out) {
  if (!(clip_lo >= 0.0 && clip_hi <= 100.0 && clip_lo < clip_hi)) {
    throw ParamError("clip percentiles must satisfy 0 <= lo < hi <= 100");
  }
  std::vector<double> valid;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    if (g.valid(k)) valid.push_back(g.values[k]);
  }
  double lo = 0.0, hi = 0.0;
  if (!valid.empty()) {
    lo = percentile(valid, clip_lo);
    hi = percentile(valid, clip_hi);
  }
  const GridSpec& s = g.spec;
  out << "P6\n" << s.nx << " " << s.ny << "\n255\n";
  std::string row(static_cast<std::size_t>(s.nx) * 3, '\0');
  for (int j = s.ny - 1; j >= 0; --j) {
    for (int i = 0; i < s.nx; ++i) {
      const std::size_t k = s.index(i, j);
      unsigned char rgb[3] = {0, 0, 0};
      if (g.valid(k)) {
        const double t = hi > lo ? std::clamp((g.values[k] - lo) / (hi - lo), 0.0, 1.0) : 0.5;
        const auto ramp = [](double a) { return static_cast<unsigned char>(std::lround(255.0 * a)); };
        if (t < 0.5) {
          rgb[0] = rgb[1] = ramp(2.0 * t);
          rgb[2] = 255;
        } else {
          rgb[0] = 255;
          rgb[1] = rgb[2] = ramp(2.0 - 2.0 * t);
        }
      }
      std::copy(rgb, rgb + 3, row.begin() + static_cast<std::ptrdiff_t>(3 * i));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  return !valid.empty();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exactly solvable 2D Schroedinger operators: catalog, transformations, verification"};
  app.require_subcommand(1);

  // catalog
  auto* cat = app.add_subcommand("catalog", "write potential, solution and meta files of a catalog entry");
  CommonFlags cat_flags;
  std::string cat_name;
  bool cat_closed = false;
  std::optional<std::string> cat_base;
  cat->add_option("entry", cat_name, "radial, twofold-radial or trig")->required();
  cat->add_flag("--closed-form", cat_closed, "export the closed-form pair instead of the machinery pair");
  cat->add_option("--base", cat_base, "base point x,y of the Q recoveries");
  cat_flags.attach(cat, true, true);

  // verify
  auto* ver = app.add_subcommand("verify", "verify a catalog entry or a (potential, solution) CSV pair");
  CommonFlags ver_flags;
  std::vector<std::string> ver_inputs;
  std::optional<std::string> ver_report;
  bool ver_oracle = false;
  ver->add_option("inputs", ver_inputs, "entry name, or potential.csv solution.csv")->required()->expected(1, 2);
  ver->add_option("--report", ver_report, "report path");
  ver->add_flag("--oracle", ver_oracle, "also compare the machinery with the closed forms");
  ver_flags.attach(ver, true, true);

  // transform
  auto* tr = app.add_subcommand("transform", "apply a transformation to a catalog pair");
  CommonFlags tr_flags;
  std::string tr_kind;
  std::optional<std::string> tr_u, tr_entry, tr_base, tr_prefix;
  std::string tr_seed = "solution";
  tr->add_option("kind", tr_kind, "moutard, twofold or shift")->required();
  tr->add_option("--u", tr_u, "catalog entry supplying the potential");
  tr->add_option("--entry", tr_entry, "catalog entry (alias of --u)");
  tr->add_option("--seed", tr_seed, "seed field of the entry (solution)");
  tr->add_option("--base", tr_base, "base point x,y of the Q recoveries");
  tr->add_option("--prefix", tr_prefix, "output file prefix");
  tr_flags.attach(tr, true, true);

  // export-ppm
  auto* ppm = app.add_subcommand("export-ppm", "render a field CSV as a P6 heatmap");
  CommonFlags ppm_flags;
  std::string ppm_in, ppm_out;
  std::optional<double> clip_lo, clip_hi;
  ppm->add_option("csv", ppm_in, "field CSV")->required();
  ppm->add_option("out", ppm_out, "output .ppm path")->required();
  ppm->add_option("--clip-lo", clip_lo, "lower percentile (default 2)");
  ppm->add_option("--clip-hi", clip_hi, "upper percentile (default 98)");
  ppm_flags.attach(ppm, false, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ParseError: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (cat->parsed()) {
      const Settings s = cat_flags.settings();
      CatalogEntry e = build_entry(cat_name, cat_flags.params(), entry_options(s, cat_base));
      PairProduct prod = product_of(e, s);
      if (cat_closed) {
        prod.pair.u = e.closed_form.u;
        prod.pair.y = e.closed_form.y;
        prod.potentials.clear();
      }
      write_pair(prod, s, e.name, out);
      return kExitOk;
    }

    if (ver->parsed()) {
      const Settings s = ver_flags.settings();
      VerificationReport rep;
      std::string stem;
      if (ver_inputs.size() == 2) {
        const GridData u = read_csv_file(ver_inputs[0]);
        const GridData y = read_csv_file(ver_inputs[1]);
        rep = verify_grids(u, y, ver_inputs[0] + "," + ver_inputs[1], s.thresholds);
        stem = std::filesystem::path(ver_inputs[1]).stem().string();
      } else {
        const CatalogEntry e = build_entry(ver_inputs[0], ver_flags.params(), entry_options(s, std::nullopt));
        const GridSpec g = s.grid(e.reference_grid);
        rep = verify_entry(e, g, e.region, s.thresholds);
        if (ver_oracle) {
          const double d = oracle_delta(e, g, e.region).worst().max_abs;
          rep.oracle_delta = d;
          if (!(d <= s.oracle_max_abs)) {
            rep.failures.push_back("oracle_delta " + format_double(d) + " > " + format_double(s.oracle_max_abs));
            rep.passed = false;
          }
        }
        stem = e.name;
      }
      const std::string text = rep.to_string();
      std::filesystem::path path;
      if (ver_report) {
        path = *ver_report;
      } else {
        ensure_dir(s.out_dir);
        path = out_path(s, stem + "_report.txt");
      }
      write_text(path, text);
      out << text;
      return rep.passed ? kExitOk : kExitFailure;
    }

    if (tr->parsed()) {
      const Settings s = tr_flags.settings();
      if (tr_u && tr_entry && *tr_u != *tr_entry) throw ParamError("--u and --entry disagree");
      const std::optional<std::string> name = tr_u ? tr_u : tr_entry;
      if (!name) throw ParamError("transform needs --u or --entry");
      const PairProduct prod =
          transform_product(tr_kind, *name, tr_flags.params(), tr_seed, entry_options(s, tr_base), s);
      write_pair(prod, s, tr_prefix.value_or(*name + "_" + tr_kind), out);
      return kExitOk;
    }

    if (ppm->parsed()) {
      Settings s = ppm_flags.settings();
      if (clip_lo) s.clip_lo = *clip_lo;
      if (clip_hi) s.clip_hi = *clip_hi;
      const GridData g = read_csv_file(ppm_in);
      std::ostringstream img;
      if (!write_ppm(g, s.clip_lo, s.clip_hi, img)) {
        err << "warning: every node of " << ppm_in << " is masked; writing a black image\n";
      }
      write_text(ppm_out, img.str());
      out << ppm_out << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    return report_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace darboux::cli
