#include "widthlab/cli.hpp"

#include "widthlab/coarse.hpp"
#include "widthlab/empirical.hpp"
#include "widthlab/error.hpp"
#include "widthlab/measure.hpp"
#include "widthlab/orders.hpp"
#include "widthlab/partition.hpp"
#include "widthlab/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#ifndef WIDTHLAB_VERSION
#define WIDTHLAB_VERSION "0.0.0"
#endif

namespace widthlab::cli {

using json = nlohmann::json;

std::string version() { return WIDTHLAB_VERSION; }

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

double parse_double(std::string_view text) {
  std::string s(text);
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

std::vector<unsigned> parse_levels(std::string_view text) {
  auto read = [&](std::string_view s) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ParseError("bad level range '" + std::string(text) + "' (expected a..b)");
    }
    return v;
  };
  std::vector<unsigned> out;
  if (auto dots = text.find(".."); dots != std::string_view::npos) {
    const unsigned a = read(text.substr(0, dots)), b = read(text.substr(dots + 2));
    if (a > b) throw ParseError("empty level range '" + std::string(text) + "'");
    for (unsigned n = a; n <= b; ++n) out.push_back(n);
  } else {
    for (const auto& part : split(text, ',')) out.push_back(read(part));
  }
  return out;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw ParseError("bad grid '" + std::string(text) + "' (expected a:b:step)");
    const double a = parse_double(parts[0]), b = parse_double(parts[1]), step = parse_double(parts[2]);
    if (!(step > 0) || !(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
      throw ParseError("bad grid '" + std::string(text) + "'");
    }
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (count > 10'000'000) throw ParseError("grid '" + std::string(text) + "' is too large");
    for (long i = 0; i <= count; ++i) out.push_back(round12(a + step * i));
  } else {
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  }
  if (out.empty()) throw ParseError("empty grid");
  return out;
}

namespace {

struct Options {
  std::string measure;
  std::string config;
  std::string out;
  std::string summary;
  std::string cells;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t max_cubes = std::uint64_t{1} << 24;
  std::uint64_t max_cells = std::uint64_t{1} << 22;
  std::uint64_t seed = 1;
  std::string levels;
  std::string t;
  std::string neg_log2_t;
  std::string alpha;
  double rho = 1;
  unsigned m = 0;
  unsigned sigma = 1;
  std::string p = "2";
  std::string q = "2";
  std::string function = "sin";
  std::string n = "4";
  unsigned depth = 4;
  unsigned spectrum_level = 10;
  unsigned resolution = 6;
};

class Outputs {
 public:
  Outputs(std::ostream& out, std::string header_hash) : out_(out), hash_(std::move(header_hash)) {}

  std::string csv_header() const { return "# widthlab " + version() + " config=" + hash_ + "\n"; }

  json meta() const { return {{"version", version()}, {"config_hash", hash_}}; }

  void write(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
      out_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << text;
  }

 private:
  std::ostream& out_;
  std::string hash_;
};

ComputeLimits limits_of(const Options& o) {
  ComputeLimits l;
  l.max_cubes = o.max_cubes;
  l.max_cells = o.max_cells;
  l.threads = o.threads;
  return l;
}

MeasureModel measure_of(const Options& o) {
  if (o.measure.empty()) throw ValidationError("--measure is required");
  return load_measure_file(o.measure);
}

std::vector<double> thresholds_of(const Options& o) {
  if (!o.neg_log2_t.empty()) {
    std::vector<double> ts;
    for (double x : parse_grid(o.neg_log2_t)) ts.push_back(std::exp2(-x));
    return ts;
  }
  if (o.t.empty()) throw ValidationError("thresholds required: --t list or --neg-log2-t a:b:step");
  return parse_grid(o.t);
}

EmbeddingParams params_of(const Options& o, const MeasureModel& model, const std::string& p, const std::string& q) {
  EmbeddingParams params;
  params.m = o.m == 0 ? model.dim() : o.m;
  if (params.m != model.dim()) {
    throw ValidationError("--m " + std::to_string(params.m) + " differs from the measure dimension " +
                          std::to_string(model.dim()));
  }
  params.sigma = o.sigma;
  params.p = ExtendedReal::parse(p);
  params.q = ExtendedReal::parse(q);
  params.validate();
  return params;
}

json exponents_json(const std::array<double, 3>& v) {
  json j;
  for (auto t : kWidthTypes) j[std::string(1, width_letter(t))] = jnum(v[static_cast<int>(t)]);
  return j;
}

json report_json(const OrderReport& r) {
  json j;
  j["params"] = {{"m", r.params.m},
                 {"sigma", r.params.sigma},
                 {"p", r.params.p.to_string()},
                 {"q", r.params.q.to_string()},
                 {"rho_hat", r.params.rho_hat()},
                 {"rho", jnum(r.params.rho())}};
  j["curve"] = r.curve;
  j["case"] = r.case_label;
  j["s_rho"] = jnum(r.s_rho);
  j["dim_upper"] = r.dim_upper;
  j["dim_lower"] = r.dim_lower;
  j["S_upper"] = jnum(r.S_upper);
  j["S_upper_check"] = jnum(r.S_upper_check);
  j["S_lower"] = r.S_lower ? jnum(*r.S_lower) : json(nullptr);
  json e;
  for (auto t : kWidthTypes) e[std::string(1, width_letter(t))] = to_double(r.exponent[static_cast<int>(t)]);
  j["exponents"] = e;
  j["upper_order"] = exponents_json(r.upper_order);
  if (r.has_lower) {
    json lower;
    for (auto t : kWidthTypes) {
      const int i = static_cast<int>(t);
      lower[std::string(1, width_letter(t))] = {jnum(r.lower_lo[i]), jnum(r.lower_hi[i])};
    }
    j["lower_order"] = lower;
    j["lower_exact"] = r.lower_exact;
    j["regularity_flag"] = r.regularity_flag;
    if (!r.params.q.is_infinite()) {
      j["optimized_upper"] = r.optimized_upper;
      j["optimized_lower"] = r.optimized_lower;
    }
  }
  return j;
}

struct Context {
  const Options& o;
  Outputs& io;
  std::ostream& err;
};

// ---- subcommands -------------------------------------------------------

int cmd_validate(Context& c) {
  const auto model = measure_of(c.o);
  json j;
  j["meta"] = c.io.meta();
  j["valid"] = true;
  j["type"] = model.kind();
  j["m"] = model.dim();
  j["finite_support"] = model.finite_support();
  j["closed_form_spectrum"] = closed_form_spectrum(model).has_value();
  c.io.write(c.o.out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_spectrum(Context& c) {
  const auto model = measure_of(c.o);
  const auto levels = parse_levels(c.o.levels.empty() ? "1..8" : c.o.levels);
  const auto ts = c.o.t.empty() ? default_t_grid() : parse_grid(c.o.t);
  std::string text = c.io.csv_header() + "n,t,beta_n\n";
  for (unsigned n : levels) {
    const auto values = beta_n_grid(model, n, ts, limits_of(c.o));
    for (std::size_t i = 0; i < ts.size(); ++i) text += std::to_string(n) + "," + num(ts[i]) + "," + num(values[i]) + "\n";
  }
  c.io.write(c.o.out, text);
  return kExitOk;
}

int cmd_dims(Context& c) {
  const auto model = measure_of(c.o);
  const auto levels = parse_levels(c.o.levels.empty() ? "1..8" : c.o.levels);
  std::string text = c.io.csv_header() + "n,boxdim\n";
  std::vector<double> values;
  for (unsigned n : levels) {
    const auto est = minkowski(model, n, n, limits_of(c.o));
    text += std::to_string(n) + "," + num(est.values.front()) + "\n";
    values.push_back(est.values.front());
  }
  c.io.write(c.o.out, text);
  if (!c.o.summary.empty()) {
    json j;
    j["meta"] = c.io.meta();
    j["window_min"] = *std::min_element(values.begin(), values.end());
    j["window_max"] = *std::max_element(values.begin(), values.end());
    j["finite_support"] = model.finite_support();
    c.io.write(c.o.summary, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_partition(Context& c) {
  const auto model = measure_of(c.o);
  const auto ts = thresholds_of(c.o);
  std::string text = c.io.csv_header() + "t,card,min_level,max_level,max_j\n";
  std::string dump;
  for (double t : ts) {
    const auto p = build_partition(model, c.o.rho, t, limits_of(c.o));
    text += num(t) + "," + std::to_string(p.card) + "," + std::to_string(p.min_level) + "," +
            std::to_string(p.max_level) + "," + num(p.max_j) + "\n";
    if (!c.o.cells.empty()) {
      for (const auto& cell : p.cells) dump += num(t) + ",\"" + cell.cube.to_string() + "\"," + to_string(cell.mass) + "\n";
    }
  }
  c.io.write(c.o.out, text);
  if (!c.o.cells.empty()) c.io.write(c.o.cells, c.io.csv_header() + "t,cube,mass\n" + dump);
  if (!c.o.summary.empty()) {
    json j;
    j["meta"] = c.io.meta();
    const auto fit = entropy_slope(model, c.o.rho, ts, limits_of(c.o));
    j["slope"] = fit.slope;
    j["points"] = fit.ts.size();
    if (auto curve = closed_form_spectrum(model)) j["target_s_rho"] = s_b_solve(*curve, c.o.rho);
    c.io.write(c.o.summary, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_coarse(Context& c) {
  const auto model = measure_of(c.o);
  const auto levels = parse_levels(c.o.levels.empty() ? "6..12" : c.o.levels);
  const auto alphas = c.o.alpha.empty() ? default_alpha_grid(model.dim(), c.o.rho) : parse_grid(c.o.alpha);
  const auto prof = coarse_profile(model, levels, c.o.rho, alphas, limits_of(c.o));
  std::string text = c.io.csv_header() + "n,alpha,count,F_est\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const auto cnt = prof.counts[i][a];
      const double f = cnt == 0 ? -INFINITY : std::log2(static_cast<double>(cnt)) / levels[i];
      text += std::to_string(levels[i]) + "," + num(alphas[a]) + "," + std::to_string(cnt) + "," + num(f) + "\n";
    }
  }
  c.io.write(c.o.out, text);
  if (!c.o.summary.empty()) {
    json j;
    j["meta"] = c.io.meta();
    j["rho"] = c.o.rho;
    j["optimized_upper"] = prof.optimized_upper;
    j["optimized_lower"] = prof.optimized_lower;
    j["alpha_at_upper"] = prof.alpha_at_upper;
    j["alpha_at_lower"] = prof.alpha_at_lower;
    j["regular"] = prof.regular();
    if (auto curve = closed_form_spectrum(model)) j["s_rho"] = s_b_solve(*curve, c.o.rho);
    c.io.write(c.o.summary, j.dump(2) + "\n");
  }
  return kExitOk;
}

OrderReport full_report(const Options& o, const MeasureModel& model, const EmbeddingParams& params,
                        const SpectrumCurve& curve, const DimensionEstimate& dims, const std::vector<unsigned>& levels) {
  OrderReport r = upper_order(params, curve, dims);
  if (params.q.is_infinite()) {
    lower_order(r, nullptr);
  } else {
    const auto prof = coarse_profile(model, levels, params.rho(), default_alpha_grid(model.dim(), params.rho()),
                                     limits_of(o));
    lower_order(r, &prof);
  }
  return r;
}

int cmd_order(Context& c) {
  const auto model = measure_of(c.o);
  const auto levels = parse_levels(c.o.levels.empty() ? "6..12" : c.o.levels);
  auto curve = closed_form_spectrum(model);
  if (!curve) curve = empirical_spectrum(model, c.o.spectrum_level, default_t_grid(), limits_of(c.o));
  const auto dims = minkowski(model, levels.front(), levels.back(), limits_of(c.o));

  const auto ps = split(c.o.p, ',');
  const auto qs = split(c.o.q, ',');
  if (ps.size() == 1 && qs.size() == 1) {
    const auto params = params_of(c.o, model, ps[0], qs[0]);
    const auto r = full_report(c.o, model, params, *curve, dims, levels);
    json j = report_json(r);
    j["meta"] = c.io.meta();
    if (!params.q.is_infinite()) {
      const auto g = geometric_bounds(params, *curve, dims);
      j["geometric_bounds"] = {{"neg_S_upper", jnum(g.neg_S_upper)},
                               {"box_bound", jnum(g.box_bound)},
                               {"ambient_bound", jnum(g.ambient_bound)},
                               {"chain_holds", g.first_holds && g.second_holds}};
    }
    c.io.write(c.o.out, j.dump(2) + "\n");
    return kExitOk;
  }

  std::string text = c.io.csv_header() + "p,q,uAO_K,uAO_G,uAO_L,lAO_lo,lAO_hi,case\n";
  for (const auto& p : ps) {
    for (const auto& q : qs) {
      EmbeddingParams params;
      try {
        params = params_of(c.o, model, p, q);
      } catch (const ValidationError& e) {
        c.err << "skipping p=" << p << ", q=" << q << ": " << e.what() << "\n";
        continue;
      }
      const auto r = full_report(c.o, model, params, *curve, dims, levels);
      text += params.p.to_string() + "," + params.q.to_string() + "," + num(r.upper_order[0]) + "," +
              num(r.upper_order[1]) + "," + num(r.upper_order[2]) + "," + num(r.lower_lo[0]) + "," +
              num(r.lower_hi[0]) + "," + r.case_label + "\n";
    }
  }
  c.io.write(c.o.out, text);
  return kExitOk;
}

int cmd_empirical(Context& c) {
  const auto model = measure_of(c.o);
  const auto params = params_of(c.o, model, c.o.p, c.o.q);
  const auto f = make_test_function(c.o.function, model.dim());
  DecayOptions opt;
  opt.extra_depth = c.o.depth;
  opt.fallback_level = c.o.spectrum_level;
  opt.limits = limits_of(c.o);
  const auto res = decay_experiment(f, model, params, thresholds_of(c.o), opt);
  std::string text = c.io.csv_header() + "t,card,error,logcard,logerror\n";
  for (const auto& row : res.rows) {
    text += num(row.t) + "," + std::to_string(row.card) + "," + num(row.error) + "," + num(row.logcard) + "," +
            num(row.logerror) + "\n";
  }
  c.io.write(c.o.out, text);
  if (!c.o.summary.empty()) {
    json j;
    j["meta"] = c.io.meta();
    j["function"] = res.function;
    j["slope"] = jnum(res.slope);
    j["predicted"] = res.predicted;
    j["tolerance"] = res.tolerance;
    j["degenerate"] = res.degenerate;
    j["pass"] = res.pass;
    c.io.write(c.o.summary, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_probe(Context& c) {
  const auto model = measure_of(c.o);
  const auto params = params_of(c.o, model, c.o.p, c.o.q);
  if (c.o.alpha.empty()) throw ValidationError("--alpha is required for probe");
  const double alpha = parse_double(c.o.alpha);
  ProbeOptions opt;
  opt.extra_depth = c.o.depth;
  opt.resolution = c.o.resolution;
  opt.seed = c.o.seed;
  opt.limits = limits_of(c.o);
  json runs = json::array();
  for (unsigned n : parse_levels(c.o.n)) {
    const auto r = packing_probe(model, n, alpha, params, opt);
    runs.push_back({{"n", n},
                    {"good_count", r.good_count},
                    {"family_size", r.family.size()},
                    {"supports_disjoint", r.supports_disjoint},
                    {"norm_q", r.norm_q},
                    {"norm_sobolev", r.norm_sobolev},
                    {"norm_sobolev_closed", r.norm_sobolev_closed},
                    {"ratio", r.ratio},
                    {"normalized_ratio", r.normalized},
                    {"operator_bound", r.operator_bound},
                    {"operator_max_ratio", r.operator_max_ratio},
                    {"span_reproduction_error", r.span_reproduction_error},
                    {"operator_ok", r.operator_ok}});
  }
  json j;
  j["meta"] = c.io.meta();
  j["alpha"] = alpha;
  j["runs"] = runs;
  c.io.write(c.o.out, j.dump(2) + "\n");
  return kExitOk;
}

// Appends flags from a JSON config file for every key not already on the
// command line. Keys are the flag names without dashes.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") path = args[i + 1];
  }
  for (const auto& a : args) {
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  auto present = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  if (doc.contains("command") && (args.empty() || args.front().rfind("--", 0) == 0)) {
    args.insert(args.begin(), doc.at("command").get<std::string>());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "command" || key == "config") continue;
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    args.push_back(flag);
    if (value.is_string()) {
      args.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      args.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      args.push_back(num(value.get<double>()));
    } else {
      throw ParseError("config key '" + key + "' must be a string or a number");
    }
  }
  return args;
}

std::string canonical_config(const std::string& command, const std::vector<std::string>& args, const Options& o) {
  // Flags sorted by name so that argument order does not change the hash;
  // the measure document itself is part of the configuration.
  std::map<std::string, std::string> kv;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    auto eq = a.find('=');
    if (eq != std::string::npos) {
      kv[a.substr(2, eq - 2)] = a.substr(eq + 1);
    } else if (i + 1 < args.size()) {
      kv[a.substr(2)] = args[i + 1];
    }
  }
  kv.erase("out");
  kv.erase("summary");
  kv.erase("cells");
  kv.erase("config");
  kv.erase("threads");
  std::string s = command;
  for (const auto& [k, v] : kv) s += "\n" + k + "=" + v;
  if (!o.measure.empty()) {
    std::ifstream in(o.measure, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    s += "\nmeasure-doc=" + buf.str();
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Options o;
  CLI::App app{"Multifractal spectra, adaptive partitions and approximation orders of Sobolev embeddings", "widthlab"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--measure", o.measure, "measure-spec JSON file");
    sub->add_option("--config", o.config, "JSON file with flag values");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-cubes", o.max_cubes, "cap on positive-mass cubes per level")->check(CLI::PositiveNumber);
    sub->add_option("--max-cells", o.max_cells, "cap on partition cells")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
  };
  auto embedding = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "dimension (defaults to the measure's)");
    sub->add_option("--sigma", o.sigma, "smoothness")->check(CLI::PositiveNumber);
    sub->add_option("--p", o.p, "Sobolev integrability (number or inf; comma list for sweeps)");
    sub->add_option("--q", o.q, "target integrability (number or inf; comma list for sweeps)");
  };

  auto* validate = app.add_subcommand("validate", "check a measure spec");
  common(validate);

  auto* spectrum = app.add_subcommand("spectrum", "finite-level L^q-spectra as CSV n,t,beta_n");
  common(spectrum);
  spectrum->add_option("--levels", o.levels, "level range a..b");
  spectrum->add_option("--t", o.t, "t grid a:b:step or list");

  auto* dims = app.add_subcommand("dims", "box-counting dimensions as CSV n,boxdim");
  common(dims);
  dims->add_option("--levels", o.levels, "level range a..b");
  dims->add_option("--summary", o.summary, "JSON window summary file");

  auto* partition = app.add_subcommand("partition", "stopping-time partitions as CSV t,card,min_level,max_level,max_j");
  common(partition);
  partition->add_option("--rho", o.rho, "exponent rho")->check(CLI::PositiveNumber);
  partition->add_option("--t", o.t, "thresholds a:b:step or list");
  partition->add_option("--neg-log2-t", o.neg_log2_t, "thresholds t = 2^-x for x in a:b:step or list");
  partition->add_option("--cells", o.cells, "CSV dump of all cells");
  partition->add_option("--summary", o.summary, "JSON entropy-slope summary file");

  auto* coarse = app.add_subcommand("coarse", "coarse multifractal counts as CSV n,alpha,count,F_est");
  common(coarse);
  coarse->add_option("--levels", o.levels, "level range a..b");
  coarse->add_option("--rho", o.rho, "exponent rho")->check(CLI::PositiveNumber);
  coarse->add_option("--alpha", o.alpha, "alpha grid a:b:step or list");
  coarse->add_option("--summary", o.summary, "JSON summary with optimized dimensions");

  auto* order = app.add_subcommand("order", "approximation-order report (JSON), or CSV sweep for lists of p/q");
  common(order);
  embedding(order);
  order->add_option("--levels", o.levels, "levels for box dimensions and coarse profiles");
  order->add_option("--spectrum-level", o.spectrum_level, "level of the empirical spectrum when no closed form exists");

  auto* empirical = app.add_subcommand("empirical", "piecewise-polynomial decay experiment as CSV t,card,error,logcard,logerror");
  common(empirical);
  embedding(empirical);
  empirical->add_option("--function", o.function, "test function: const, x, x2, sin, bump");
  empirical->add_option("--t", o.t, "thresholds a:b:step or list");
  empirical->add_option("--neg-log2-t", o.neg_log2_t, "thresholds t = 2^-x for x in a:b:step or list");
  empirical->add_option("--depth", o.depth, "quadrature levels below the finest cell");
  empirical->add_option("--spectrum-level", o.spectrum_level, "level of the empirical spectrum when no closed form exists");
  empirical->add_option("--summary", o.summary, "JSON verdict file");

  auto* probe = app.add_subcommand("probe", "packing lower-bound probe (JSON)");
  common(probe);
  embedding(probe);
  probe->add_option("--n", o.n, "levels a..b");
  probe->add_option("--alpha", o.alpha, "alpha");
  probe->add_option("--depth", o.depth, "quadrature levels below n");
  probe->add_option("--resolution", o.resolution, "Sobolev quadrature cells per axis = 2^resolution");

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
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  Outputs io(out, hex(fnv1a(canonical_config(command, args, o))));
  Context ctx{o, io, err};
  try {
    if (command == "validate") return cmd_validate(ctx);
    if (command == "spectrum") return cmd_spectrum(ctx);
    if (command == "dims") return cmd_dims(ctx);
    if (command == "partition") return cmd_partition(ctx);
    if (command == "coarse") return cmd_coarse(ctx);
    if (command == "order") return cmd_order(ctx);
    if (command == "empirical") return cmd_empirical(ctx);
    if (command == "probe") return cmd_probe(ctx);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace widthlab::cli
