#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "relaybounds/relaybounds.h"

namespace relaybounds_cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
  rb_status status;
  LibraryError(rb_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(rb_status s) {
  if (s != RB_OK) throw LibraryError(s, rb_last_error_message());
}

// 12 significant digits; never prints a negative zero.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(fmt(x).c_str(), nullptr);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\";\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

struct ResultDeleter {
  void operator()(rb_bound_result* r) const { rb_result_free(r); }
};
struct ReportDeleter {
  void operator()(rb_verify_report* r) const { rb_report_free(r); }
};
using ResultPtr = std::unique_ptr<rb_bound_result, ResultDeleter>;
using ReportPtr = std::unique_ptr<rb_verify_report, ReportDeleter>;

struct Common {
  double grid = 1e-3;
  double refine = 1e-6;
  std::string log_base = "2";
  std::string v2_constant = "bits";
  int threads = 0;
  std::string format = "text";
  std::string config;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--grid", c.grid, "grid step of the correlation search")->capture_default_str();
  sub->add_option("--refine", c.refine, "local refinement tolerance")->capture_default_str();
  sub->add_option("--log-base", c.log_base, "logarithm base: 2 (bits) or e (nats)")
      ->check(CLI::IsMember({"2", "e"}))
      ->capture_default_str();
  sub->add_option("--v2-constant", c.v2_constant, "unit of the second objective's constant: bits or literal")
      ->check(CLI::IsMember({"bits", "literal"}))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads; 0 uses the hardware count")->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  sub->add_option("--config", c.config, "file of key=value lines; flags on the command line win");
}

int resolve_threads(int requested) {
  if (requested < 0) throw UsageError("--threads must be >= 0");
  int n = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RELAYBOUNDS_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1) throw UsageError("RELAYBOUNDS_THREADS must be a positive integer");
    n = static_cast<int>(std::min<long>(n, cap));
  }
  return n;
}

rb_config make_config(const Common& c) {
  if (!(c.grid > 0.0 && c.grid <= 0.5)) throw UsageError("--grid must lie in (0, 0.5]");
  if (!(c.refine > 0.0 && c.refine <= c.grid)) throw UsageError("--refine must lie in (0, grid]");
  rb_config cfg;
  rb_config_default(&cfg);
  cfg.grid_step = c.grid;
  cfg.refine_tol = c.refine;
  cfg.log_base = c.log_base == "e" ? RB_LOGE : RB_LOG2;
  cfg.v2_constant = c.v2_constant == "literal" ? RB_CONST_LITERAL : RB_CONST_BITS;
  cfg.threads = resolve_threads(c.threads);
  return cfg;
}

void require_relays(int relays) {
  if (relays < 1) throw UsageError("--relays must be an integer >= 1");
}

void require_gain(const char* flag, double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw UsageError(std::string(flag) + " must be a positive finite number");
}

std::string value_key(int log_base) { return log_base == RB_LOGE ? "value_nats" : "value_bits"; }

// A computed bound with the label it was requested under.
struct Labelled {
  std::string label;
  ResultPtr result;
  std::vector<std::pair<int, int>> not_applicable;  // cuts the second objective skips (m = N)
};

std::vector<std::pair<int, int>> pairs_of(const rb_bound_result* r) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < rb_result_pair_count(r); ++i) {
    int n = 0, m = 0;
    check(rb_result_pair(r, i, &n, &m));
    out.emplace_back(n, m);
  }
  return out;
}

std::string pairs_text(const std::vector<std::pair<int, int>>& pairs) {
  std::string s;
  for (const auto& [n, m] : pairs) {
    if (!s.empty()) s += ';';
    s += std::to_string(n) + "," + std::to_string(m);
  }
  return s;
}

json pairs_json(const std::vector<std::pair<int, int>>& pairs) {
  json a = json::array();
  for (const auto& [n, m] : pairs) a.push_back({n, m});
  return a;
}

struct Meta {
  double grid = 0, refine = 0, spacing = 0;
  long long evaluations = 0;
  int mode = 0;
};

Meta meta_of(const rb_bound_result* r) {
  Meta m;
  rb_result_meta(r, &m.grid, &m.refine, &m.spacing, &m.evaluations, &m.mode);
  return m;
}

std::array<double, 3> rho_of(const rb_bound_result* r) {
  std::array<double, 3> a{};
  rb_result_argmax(r, &a[0], &a[1], &a[2]);
  return a;
}

json result_json(const Labelled& l) {
  const rb_bound_result* r = l.result.get();
  const std::string vkey = value_key(rb_result_log_base(r));
  json j;
  j[vkey] = jnum(rb_result_value(r));
  j["variant"] = l.label;
  j["achieved_by"] = rb_variant_name(rb_result_achieved_by(r));
  j["minimizer_pairs"] = pairs_json(pairs_of(r));
  const auto rho = rho_of(r);
  j["rho"] = {{"rho1", jnum(rho[0])}, {"rho2", jnum(rho[1])}, {"rho12", jnum(rho[2])}};
  const Meta m = meta_of(r);
  j["solver_meta"] = {{"grid_step", jnum(m.grid)},
                      {"refine_tol", jnum(m.refine)},
                      {"final_spacing", jnum(m.spacing)},
                      {"evaluations", m.evaluations},
                      {"rho12_mode", m.mode == RB_RHO12_JOINT ? "joint" : "zero"}};
  if (rb_result_component_count(r) > 0) {
    json comps = json::array();
    for (std::size_t i = 0; i < rb_result_component_count(r); ++i) {
      int v = 0;
      double value = 0;
      check(rb_result_component(r, i, &v, &value));
      comps.push_back({{"variant", rb_variant_name(v)}, {vkey, jnum(value)}});
    }
    j["components"] = comps;
  }
  if (rb_result_pair_eval_count(r) > 0) {
    json rows = json::array();
    for (std::size_t i = 0; i < rb_result_pair_eval_count(r); ++i) {
      int n = 0, m2 = 0, source = 0, has_v2 = 0;
      double v1 = 0, v2 = 0;
      check(rb_result_pair_eval(r, i, &n, &m2, &source, &v1, &v2, &has_v2));
      json row;
      row["pair"] = {n, m2};
      row["source"] = rb_variant_name(source);
      row["v1"] = jnum(v1);
      row["v2"] = has_v2 ? jnum(v2) : json("n/a");
      rows.push_back(row);
    }
    j["pairs"] = rows;
  }
  if (!l.not_applicable.empty()) j["v2_not_applicable_pairs"] = pairs_json(l.not_applicable);
  return j;
}

void result_text(const Labelled& l, std::ostream& out) {
  const rb_bound_result* r = l.result.get();
  const std::string vkey = value_key(rb_result_log_base(r));
  out << "variant=" << l.label << "\n";
  out << vkey << "=" << fmt(rb_result_value(r)) << "\n";
  out << "achieved_by=" << rb_variant_name(rb_result_achieved_by(r)) << "\n";
  out << "minimizer_pairs=" << pairs_text(pairs_of(r)) << "\n";
  const auto rho = rho_of(r);
  out << "rho=" << fmt(rho[0]) << "," << fmt(rho[1]) << "," << fmt(rho[2]) << "\n";
  const Meta m = meta_of(r);
  out << "solver_meta=grid_step:" << fmt(m.grid) << " refine_tol:" << fmt(m.refine)
      << " final_spacing:" << fmt(m.spacing) << " evaluations:" << m.evaluations
      << " rho12_mode:" << (m.mode == RB_RHO12_JOINT ? "joint" : "zero") << "\n";
  for (std::size_t i = 0; i < rb_result_component_count(r); ++i) {
    int v = 0;
    double value = 0;
    check(rb_result_component(r, i, &v, &value));
    out << "component." << rb_variant_name(v) << "=" << fmt(value) << "\n";
  }
  if (rb_result_pair_eval_count(r) > 0) {
    out << "pair\tsource\tv1\tv2\n";
    for (std::size_t i = 0; i < rb_result_pair_eval_count(r); ++i) {
      int n = 0, m2 = 0, source = 0, has_v2 = 0;
      double v1 = 0, v2 = 0;
      check(rb_result_pair_eval(r, i, &n, &m2, &source, &v1, &v2, &has_v2));
      out << n << "," << m2 << "\t" << rb_variant_name(source) << "\t" << fmt(v1) << "\t"
          << (has_v2 ? fmt(v2) : std::string("n/a")) << "\n";
    }
  }
  if (!l.not_applicable.empty()) out << "v2_not_applicable_pairs=" << pairs_text(l.not_applicable) << "\n";
}

const char* kResultCsvHeader = "variant,value,unit,achieved_by,minimizer_pairs,rho1,rho2,rho12,grid_step,refine_tol,evaluations";

void result_csv_row(const Labelled& l, std::ostream& out) {
  const rb_bound_result* r = l.result.get();
  const auto rho = rho_of(r);
  const Meta m = meta_of(r);
  out << l.label << "," << fmt(rb_result_value(r)) << "," << (rb_result_log_base(r) == RB_LOGE ? "nats" : "bits")
      << "," << rb_variant_name(rb_result_achieved_by(r)) << "," << csv_quote(pairs_text(pairs_of(r))) << ","
      << fmt(rho[0]) << "," << fmt(rho[1]) << "," << fmt(rho[2]) << "," << fmt(m.grid) << "," << fmt(m.refine)
      << "," << m.evaluations << "\n";
}

// Layered variants in request order, duplicates dropped.
struct VariantSpec {
  std::string label;
  bool theorem;
  int code;  // rb_variant for lemma forms, RB_THEOREM2_* selector for theorem forms
};

VariantSpec parse_variant(const std::string& v) {
  if (v == "v1") return {"lemma2_v1", false, RB_LEMMA2_V1};
  if (v == "v2") return {"lemma2_v2", false, RB_LEMMA2_V2};
  if (v == "min") return {"lemma2_min", false, RB_LEMMA2_MIN};
  if (v == "mu") return {"special_mu", false, RB_SPECIAL_MU};
  if (v == "theorem2") return {"theorem2", true, RB_THEOREM2_BOTH};
  if (v == "theorem2_v1") return {"theorem2_v1", true, RB_THEOREM2_ONLY_V1};
  if (v == "theorem2_v2") return {"theorem2_v2", true, RB_THEOREM2_ONLY_V2};
  throw UsageError("--variant: unknown value '" + v + "'");
}

std::vector<VariantSpec> parse_variants(const std::vector<std::string>& raw) {
  std::vector<VariantSpec> out;
  std::set<std::string> seen;
  for (const auto& v : raw) {
    VariantSpec s = parse_variant(v);
    if (seen.insert(s.label).second) out.push_back(s);
  }
  if (out.empty()) throw UsageError("--variant: at least one value required");
  return out;
}

Labelled compute_layered(int relays, double r1, double r2, double r3, const VariantSpec& v, const rb_config& cfg) {
  Labelled l{v.label, nullptr, {}};
  rb_bound_result* raw = nullptr;
  if (v.theorem)
    check(rb_theorem2_bound(relays, r1, r2, r3, v.code, &cfg, &raw));
  else
    check(rb_layered_bound(relays, r1, r2, r3, v.code, &cfg, &raw));
  l.result.reset(raw);
  if (v.code == RB_LEMMA2_V2 && !v.theorem) {
    for (int n = 1; n <= relays; ++n) l.not_applicable.emplace_back(n, relays);
  }
  return l;
}

Labelled compute_nd(int relays, double r1, double r2, const rb_config& cfg) {
  rb_bound_result* raw = nullptr;
  check(rb_nd_bound(relays, r1, r2, &cfg, &raw));
  return Labelled{"nd", ResultPtr(raw), {}};
}

struct Ordering {
  std::string lemma, theorem;
  bool holds;
};

std::vector<Ordering> orderings(const std::vector<Labelled>& results, const std::vector<VariantSpec>& specs,
                                double tol) {
  std::vector<Ordering> out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (specs[i].theorem) continue;
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (!specs[j].theorem) continue;
      const double a = rb_result_value(results[i].result.get());
      const double b = rb_result_value(results[j].result.get());
      out.push_back({results[i].label, results[j].label, a <= b + tol});
    }
  }
  return out;
}

void emit_results(const std::vector<Labelled>& results, const std::vector<Ordering>& order, const std::string& format,
                  bool single, std::ostream& out) {
  if (format == "json") {
    if (single) {
      out << result_json(results.front()).dump(2) << "\n";
      return;
    }
    json doc;
    doc["results"] = json::array();
    for (const auto& l : results) doc["results"].push_back(result_json(l));
    json ord = json::array();
    for (const auto& o : order)
      ord.push_back({{"lower", o.lemma}, {"upper", o.theorem}, {"relation", o.holds ? "<=" : ">"}});
    doc["ordering"] = ord;
    out << doc.dump(2) << "\n";
  } else if (format == "csv") {
    out << kResultCsvHeader << "\n";
    for (const auto& l : results) result_csv_row(l, out);
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i > 0) out << "\n";
      result_text(results[i], out);
    }
    if (!order.empty()) out << "\n";
    for (const auto& o : order) out << "ordering=" << o.lemma << (o.holds ? " <= " : " > ") << o.theorem << "\n";
  }
}

// Sweep -----------------------------------------------------------------

std::vector<double> sweep_points(const std::string& param, double from, double to, int steps,
                                 const std::string& scale) {
  std::vector<double> pts;
  if (param == "N") {
    for (long k = std::lround(from); k <= std::lround(to); ++k) pts.push_back(static_cast<double>(k));
    return pts;
  }
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    double x;
    if (scale == "log")
      x = std::exp(std::log(from) + t * (std::log(to) - std::log(from)));
    else
      x = from + t * (to - from);
    pts.push_back(i == steps - 1 ? to : (i == 0 ? from : x));
  }
  return pts;
}

// Verify ----------------------------------------------------------------

struct SuiteOutcome {
  ReportPtr report;
  bool hard_passed;
  std::size_t findings;
};

json report_json(const rb_verify_report* r, bool timing) {
  auto records = [&](bool findings) {
    json rows = json::array();
    const std::size_t n = findings ? rb_report_finding_count(r) : rb_report_failure_count(r);
    for (std::size_t i = 0; i < n; ++i) {
      const char* chk = nullptr;
      const char* input = nullptr;
      double e = 0, g = 0, d = 0;
      if (findings)
        check(rb_report_finding(r, i, &chk, &input, &e, &g, &d));
      else
        check(rb_report_failure(r, i, &chk, &input, &e, &g, &d));
      rows.push_back({{"check", chk}, {"input", input}, {"expected", jnum(e)}, {"got", jnum(g)}, {"diff", jnum(d)}});
    }
    return rows;
  };
  json j;
  j["suite"] = rb_report_suite(r);
  j["passed"] = rb_report_passed(r) != 0;
  j["samples"] = rb_report_samples(r);
  j["seed"] = rb_report_seed(r);
  json tol;
  for (std::size_t i = 0; i < rb_report_tolerance_count(r); ++i) {
    const char* name = nullptr;
    double v = 0;
    check(rb_report_tolerance(r, i, &name, &v));
    tol[name] = jnum(v);
  }
  j["tolerances"] = tol.is_null() ? json::object() : tol;
  json notes = json::array();
  for (std::size_t i = 0; i < rb_report_note_count(r); ++i) notes.push_back(rb_report_note(r, i));
  j["notes"] = notes;
  j["failures"] = records(false);
  j["findings"] = records(true);
  if (timing) j["wall_time_s"] = jnum(rb_report_wall_time(r));
  return j;
}

std::string report_text(const rb_verify_report* r, bool timing) {
  const std::size_t len = rb_report_serialize(r, timing ? 1 : 0, nullptr, 0);
  std::string s(len + 1, '\0');
  rb_report_serialize(r, timing ? 1 : 0, s.data(), s.size());
  s.resize(len);
  return s;
}

bool truthy(const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off" || s.empty()) return false;
  throw UsageError("--config: '" + v + "' is not a boolean");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kBooleanFlags = {"strict", "timing"};

// Appends flags from a --config file for every flag not given explicitly.
std::vector<std::string> inject_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(name);
    if (name == "config") {
      if (eq != std::string::npos)
        path = a.substr(eq + 1);
      else if (i + 1 < args.size())
        path = args[i + 1];
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw UsageError("--config: cannot read '" + *path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config: line " + std::to_string(lineno) + " is not key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw UsageError("--config: nested config files are not supported");
    if (given.count(key)) continue;
    if (kBooleanFlags.count(key)) {
      if (truthy(value)) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity upper bounds for symmetric Gaussian diamond and 2-layer relay networks"};
  app.name("relaybounds");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(rb_version()));

  // diamond
  Common dc;
  int d_relays = 0;
  double d_r1 = 0, d_r2 = 0;
  auto* diamond = app.add_subcommand("diamond", "diamond network bound");
  diamond->add_option("--relays", d_relays, "number of relays N")->required();
  diamond->add_option("--r1", d_r1, "source-relay gain")->required();
  diamond->add_option("--r2", d_r2, "relay-destination gain")->required();
  add_common(diamond, dc, "text");

  // layered
  Common lc;
  int l_relays = 0;
  double l_r1 = 0, l_r2 = 0, l_r3 = 0;
  std::vector<std::string> l_variants{"min"};
  std::string l_mode = "zero";
  auto* layered = app.add_subcommand("layered", "2-layer network bounds");
  layered->add_option("--relays", l_relays, "relays per layer N")->required();
  layered->add_option("--r1", l_r1, "source-layer1 gain")->required();
  layered->add_option("--r2", l_r2, "layer1-layer2 gain")->required();
  layered->add_option("--r3", l_r3, "layer2-destination gain")->required();
  layered->add_option("--variant", l_variants, "v1, v2, min, mu, theorem2, theorem2_v1, theorem2_v2")
      ->delimiter(',')
      ->capture_default_str();
  layered->add_option("--rho12-mode", l_mode, "cross-layer correlation: zero or joint")
      ->check(CLI::IsMember({"zero", "joint"}))
      ->capture_default_str();
  add_common(layered, lc, "text");

  // sweep
  Common sc;
  std::optional<int> s_relays;
  std::optional<double> s_r1, s_r2, s_r3;
  std::vector<std::string> s_variants{"min"};
  std::string s_mode = "zero", s_param, s_scale = "linear";
  double s_from = 0, s_to = 0;
  int s_steps = 0;
  auto* sweep = app.add_subcommand("sweep", "CSV sweep of one parameter");
  sweep->add_option("--param", s_param, "swept parameter")->required()->check(CLI::IsMember({"r1", "r2", "r3", "N"}));
  sweep->add_option("--from", s_from, "first value")->required();
  sweep->add_option("--to", s_to, "last value")->required();
  sweep->add_option("--steps", s_steps, "number of points (ignored for N)");
  sweep->add_option("--scale", s_scale, "linear or log")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
  sweep->add_option("--relays", s_relays, "relays per layer N");
  sweep->add_option("--r1", s_r1, "first-hop gain");
  sweep->add_option("--r2", s_r2, "second-hop gain");
  sweep->add_option("--r3", s_r3, "third-hop gain");
  sweep->add_option("--variant", s_variants, "nd or any layered variant")->delimiter(',')->capture_default_str();
  sweep->add_option("--rho12-mode", s_mode, "zero or joint")->check(CLI::IsMember({"zero", "joint"}));
  add_common(sweep, sc, "csv");

  // verify
  Common vc;
  std::string v_suite = "all";
  std::uint64_t v_seed = 42;
  int v_samples = 500, v_nmax = 4;
  bool v_strict = false, v_timing = false;
  std::string v_mutation = "none";
  double v_joint_grid = 1e-2;
  std::vector<double> v_gains;
  std::optional<int> v_lemma3_nmax, v_timeshare_relays;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", v_suite, "suite to run")
      ->check(CLI::IsMember({"all", "oracle", "maxima", "lemma3", "limits", "timeshare", "eigen"}))
      ->capture_default_str();
  verify->add_option("--seed", v_seed, "random seed")->capture_default_str();
  verify->add_option("--samples", v_samples, "samples per suite")->capture_default_str();
  verify->add_option("--nmax", v_nmax, "largest relay count")->capture_default_str();
  verify->add_flag("--strict", v_strict, "fail on timeshare findings");
  verify->add_flag("--timing", v_timing, "include wall time in the report");
  verify->add_option("--mutation", v_mutation, "deliberate oracle-suite mutation: none or psi_sign_flip")
      ->check(CLI::IsMember({"none", "psi_sign_flip"}))
      ->capture_default_str();
  verify->add_option("--joint-grid", v_joint_grid, "grid step of joint-mode searches")->capture_default_str();
  verify->add_option("--gains", v_gains, "gain triples r1,r2,r3,... for lemma3 and timeshare")->delimiter(',');
  verify->add_option("--lemma3-nmax", v_lemma3_nmax, "largest relay count of the lemma3 suite (default min(nmax,3))");
  verify->add_option("--timeshare-relays", v_timeshare_relays, "relay count of the timeshare suite (default 2)");
  add_common(verify, vc, "text");

  std::vector<std::string> args;
  try {
    args = inject_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*diamond) {
      require_relays(d_relays);
      require_gain("--r1", d_r1);
      require_gain("--r2", d_r2);
      const rb_config cfg = make_config(dc);
      std::vector<Labelled> results;
      results.push_back(compute_nd(d_relays, d_r1, d_r2, cfg));
      emit_results(results, {}, dc.format, true, out);
      return kExitOk;
    }

    if (*layered) {
      require_relays(l_relays);
      require_gain("--r1", l_r1);
      require_gain("--r2", l_r2);
      require_gain("--r3", l_r3);
      rb_config cfg = make_config(lc);
      cfg.rho12_mode = l_mode == "joint" ? RB_RHO12_JOINT : RB_RHO12_ZERO;
      const auto specs = parse_variants(l_variants);
      std::vector<Labelled> results;
      for (const auto& s : specs) results.push_back(compute_layered(l_relays, l_r1, l_r2, l_r3, s, cfg));
      const auto order = orderings(results, specs, cfg.refine_tol);
      emit_results(results, order, lc.format, false, out);
      return kExitOk;
    }

    if (*sweep) {
      if (!(s_from < s_to)) throw UsageError("--from must be less than --to");
      const bool sweep_n = s_param == "N";
      if (sweep_n) {
        if (s_from < 1 || s_from != std::floor(s_from) || s_to != std::floor(s_to))
          throw UsageError("--from and --to must be integers >= 1 when sweeping N");
      } else {
        if (s_steps < 2) throw UsageError("--steps must be >= 2");
        if (!(s_from > 0.0)) throw UsageError("--from must be positive when sweeping a gain");
        if (!std::isfinite(s_to)) throw UsageError("--to must be finite");
      }
      if (s_scale == "log" && !(s_from > 0.0)) throw UsageError("--from must be positive on a log scale");

      std::vector<VariantSpec> specs;
      {
        std::set<std::string> seen;
        for (const auto& v : s_variants) {
          if (v == "nd") {
            if (seen.insert("nd").second) specs.push_back({"nd", false, RB_ND});
            continue;
          }
          VariantSpec s = parse_variant(v);
          if (seen.insert(s.label).second) specs.push_back(s);
        }
      }
      const bool needs_r3 = std::any_of(specs.begin(), specs.end(), [](const auto& s) { return s.code != RB_ND || s.theorem; });
      auto base = [&](const char* flag, const std::optional<double>& v, bool needed) -> double {
        if (!needed) return v.value_or(1.0);
        if (!v) throw UsageError(std::string(flag) + " is required");
        require_gain(flag, *v);
        return *v;
      };
      const double r1 = base("--r1", s_r1, s_param != "r1");
      const double r2 = base("--r2", s_r2, s_param != "r2");
      const double r3 = base("--r3", s_r3, s_param != "r3" && needs_r3);
      int relays = 0;
      if (!sweep_n) {
        if (!s_relays) throw UsageError("--relays is required");
        require_relays(*s_relays);
        relays = *s_relays;
      }
      rb_config cfg = make_config(sc);
      cfg.rho12_mode = s_mode == "joint" ? RB_RHO12_JOINT : RB_RHO12_ZERO;
      const std::string unit = cfg.log_base == RB_LOGE ? "nats" : "bits";
      const auto points = sweep_points(s_param, s_from, s_to, s_steps, s_scale);

      json rows = json::array();
      if (sc.format != "json") {
        out << s_param;
        for (const auto& s : specs) out << "," << s.label << "_" << unit;
        out << ",minimizer_pairs,rho1,rho2,rho12\n";
      }
      for (double x : points) {
        const int n = sweep_n ? static_cast<int>(x) : relays;
        const double g1 = s_param == "r1" ? x : r1;
        const double g2 = s_param == "r2" ? x : r2;
        const double g3 = s_param == "r3" ? x : r3;
        std::vector<Labelled> results;
        for (const auto& s : specs) {
          if (s.label == "nd")
            results.push_back(compute_nd(n, g1, g2, cfg));
          else
            results.push_back(compute_layered(n, g1, g2, g3, s, cfg));
        }
        const rb_bound_result* lead = results.front().result.get();
        const auto pairs = pairs_of(lead);
        const auto rho = rho_of(lead);
        if (sc.format == "json") {
          json row;
          row[s_param] = sweep_n ? json(n) : jnum(x);
          for (const auto& l : results) row[l.label + "_" + unit] = jnum(rb_result_value(l.result.get()));
          row["minimizer_pairs"] = pairs_json(pairs);
          row["rho"] = {{"rho1", jnum(rho[0])}, {"rho2", jnum(rho[1])}, {"rho12", jnum(rho[2])}};
          rows.push_back(row);
        } else {
          out << (sweep_n ? std::to_string(n) : fmt(x));
          for (const auto& l : results) out << "," << fmt(rb_result_value(l.result.get()));
          out << "," << csv_quote(pairs_text(pairs)) << "," << fmt(rho[0]) << "," << fmt(rho[1]) << ","
              << fmt(rho[2]) << "\n";
        }
      }
      if (sc.format == "json") out << json{{"parameter", s_param}, {"rows", rows}}.dump(2) << "\n";
      return kExitOk;
    }

    if (*verify) {
      if (v_samples < 1) throw UsageError("--samples must be >= 1");
      if (v_nmax < 1) throw UsageError("--nmax must be >= 1");
      if (!(v_joint_grid > 0.0 && v_joint_grid <= 0.5)) throw UsageError("--joint-grid must lie in (0, 0.5]");
      if (v_gains.size() % 3 != 0) throw UsageError("--gains must list whole triples r1,r2,r3");
      for (double g : v_gains) require_gain("--gains", g);
      if (v_lemma3_nmax && *v_lemma3_nmax < 1) throw UsageError("--lemma3-nmax must be >= 1");
      if (v_timeshare_relays && *v_timeshare_relays < 1) throw UsageError("--timeshare-relays must be >= 1");
      const rb_config cfg = make_config(vc);

      const std::vector<std::string> all = {"oracle", "maxima", "lemma3", "limits", "timeshare", "eigen"};
      const std::vector<std::string> suites = v_suite == "all" ? all : std::vector<std::string>{v_suite};
      const int mutation = v_mutation == "psi_sign_flip" ? RB_MUTATION_PSI_SIGN_FLIP : RB_MUTATION_NONE;

      std::vector<SuiteOutcome> outcomes;
      for (const auto& s : suites) {
        rb_verify_report* raw = nullptr;
        if (s == "oracle") {
          check(rb_verify_oracle(v_nmax, v_samples, v_seed, mutation, &raw));
        } else if (s == "maxima") {
          check(rb_verify_maxima(v_nmax, v_samples, v_seed, &raw));
        } else if (s == "lemma3") {
          std::vector<double> gains = v_gains;
          if (gains.empty()) gains = {1, 1, 1, 10, 0.1, 1};
          const int n = v_lemma3_nmax.value_or(std::min(v_nmax, 3));
          check(rb_verify_lemma3(n, gains.data(), gains.size() / 3, &cfg, v_joint_grid, &raw));
        } else if (s == "limits") {
          check(rb_verify_limits(v_nmax, &raw));
        } else if (s == "timeshare") {
          double gains[3] = {10, 1, 1};
          if (!v_gains.empty()) std::copy(v_gains.begin(), v_gains.begin() + 3, gains);
          rb_config joint = cfg;
          joint.grid_step = v_joint_grid;
          check(rb_verify_timeshare(v_timeshare_relays.value_or(2), v_samples, v_seed, gains, &joint, &raw));
        } else {
          check(rb_verify_eigen(v_nmax, v_samples, v_seed, &raw));
        }
        ReportPtr rep(raw);
        const bool hard = rb_report_passed(rep.get()) != 0;
        const std::size_t findings = rb_report_finding_count(rep.get());
        outcomes.push_back({std::move(rep), hard, findings});
      }

      bool ok = true;
      for (const auto& o : outcomes) ok = ok && o.hard_passed && !(v_strict && o.findings > 0);

      if (vc.format == "json") {
        json doc;
        doc["suites"] = json::array();
        for (const auto& o : outcomes) doc["suites"].push_back(report_json(o.report.get(), v_timing));
        doc["strict"] = v_strict;
        doc["passed"] = ok;
        out << doc.dump(2) << "\n";
      } else if (vc.format == "csv") {
        out << "suite,passed,samples,seed,failures,findings\n";
        for (const auto& o : outcomes) {
          const rb_verify_report* r = o.report.get();
          out << rb_report_suite(r) << "," << (o.hard_passed ? "true" : "false") << "," << rb_report_samples(r)
              << "," << rb_report_seed(r) << "," << rb_report_failure_count(r) << "," << o.findings << "\n";
        }
      } else {
        for (const auto& o : outcomes) out << report_text(o.report.get(), v_timing) << "\n";
        out << "overall=" << (ok ? "pass" : "fail") << "\n";
      }
      return ok ? kExitOk : kExitVerifyFailed;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LibraryError& e) {
    err << "error: " << e.what() << "\n";
    return e.status == RB_INVALID_ARGUMENT ? kExitUsage : kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace relaybounds_cli
