#include "glspace/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glspace/error.hpp"
#include "glspace/io.hpp"
#include "glspace/measure.hpp"
#include "glspace/operators.hpp"
#include "glspace/spaces.hpp"
#include "glspace/verify.hpp"

namespace glspace::cli {

namespace {

const std::vector<std::string> kCommands{"norm",  "family",    "phi",       "kappa",     "tail",
                                         "apply", "measure-c", "verify-p1", "verify-p2", "verify-p3"};

const std::vector<std::pair<std::string, std::string>> kScalarOptions{
    {"output", "output file (written atomically)"},
    {"format", "json | csv"},
    {"q", "Lebesgue exponent for norm"},
    {"psi", "generating function (JSON or kind:key=value,...)"},
    {"nu", "generating function of the target space"},
    {"x-norm", "m.r.i. norm of the source space (JSON)"},
    {"y-norm", "m.r.i. norm of the target space (JSON)"},
    {"delta", "measure value(s), comma separated"},
    {"t", "operator parameter(s), comma separated"},
    {"op", "operator spec"},
    {"q-range", "open q range lo,hi"},
    {"p-range", "open p range lo,hi"},
    {"q-grid", "q grid lo,hi"},
    {"p-grid", "p grid lo,hi"},
    {"window-points", "points per exponent grid"},
    {"pairs", "all | ordered (p >= q only)"},
    {"a-pow", "A(t) = t^a"},
    {"b-pow", "B(t) = t^b"},
    {"c-hat", "use this constant instead of measuring it"},
    {"d-hat", "use this constant instead of measuring it"},
    {"seed", "seed of the generated test family"},
    {"count", "size of the generated test family"},
    {"nodes", "nodes of the generated base space"},
    {"length", "length of the generated base space"},
    {"tolerance", "relative tolerance of a check"},
    {"grid", "scan grid points"},
    {"pmax", "largest finite exponent scanned"}};

std::vector<double> parse_list(const std::string& text, const std::string& source) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    out.push_back(io::parse_double(rest.substr(0, comma), source));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& source) {
  const auto v = parse_list(text, source);
  if (v.size() != 2) throw ParseError(source, 0, "expected 'lo,hi'");
  return {v[0], v[1]};
}

std::uint64_t parse_u64(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.starts_with('-')) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(source, 0, "expected a nonnegative integer, got '" + text + "'");
  }
}

// Config-file value rendered in the same textual form the flag would take.
std::string config_value_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number()) return io::format_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + config_value_text(e);
    return out;
  }
  return v.dump();
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Grand Lebesgue Space norms, fundamental functions and operator inequality checks", "glspace"};
  std::string command;
  std::vector<std::string> inputs;
  std::string config_path;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  app.add_option("command", command, "norm | family | phi | kappa | tail | apply | measure-c | verify-p1..3")
      ->required();
  app.add_option("--input,-i", inputs, "function CSV (node,weight,value); repeatable");
  app.add_option("--config", config_path, "JSON config; flags override its values");
  for (const auto& [name, text] : kScalarOptions) opts[name] = app.add_option("--" + name, raw[name], text);
  // MriNorm for kappa
  opts["norm"] = app.add_option("--norm", raw["norm"], "m.r.i. norm JSON (kappa)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    RunConfig help;
    help.command = "help";
    help.help = app.help();
    return help;
  } catch (const CLI::ParseError& e) {
    throw ParseError("command line", 0, e.what());
  }

  std::map<std::string, std::string> merged;
  std::string config_dir;
  if (!config_path.empty()) {
    const std::string text = io::read_file(config_path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(config_path, 0, "config must be a JSON object");
    config_dir = std::filesystem::path(config_path).parent_path().string();
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string key = it.key();
      std::replace(key.begin(), key.end(), '_', '-');
      if (key == "command") {
        if (command.empty()) command = it.value().get<std::string>();
      } else if (key == "input") {
        if (inputs.empty()) {
          if (it.value().is_array())
            for (const auto& e : it.value()) inputs.push_back(e.get<std::string>());
          else
            inputs.push_back(it.value().get<std::string>());
        }
      } else {
        merged[key] = config_value_text(it.value());
      }
    }
  }
  bool op_from_flag = false;
  for (const auto& [name, opt] : opts)
    if (opt->count() > 0) {
      merged[name] = raw[name];
      if (name == "op") op_from_flag = true;
    }

  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw ParseError("command line", 0, "unknown command '" + command + "'");

  RunConfig c;
  c.command = command;
  c.inputs = inputs;
  auto has = [&](const char* k) { return merged.count(k) > 0; };
  auto src = [](const char* k) { return std::string("--") + k; };
  auto num = [&](const char* k) { return io::parse_double(merged.at(k), src(k)); };

  if (has("output")) c.output = merged["output"];
  if (has("format")) c.format = merged["format"];
  if (c.format != "json" && c.format != "csv") throw ParseError("--format", 0, "expected json or csv");
  if (has("q")) c.q = num("q");
  if (has("psi")) c.psi = merged["psi"];
  if (has("nu")) c.nu = merged["nu"];
  if (has("x-norm")) c.x_norm = merged["x-norm"];
  if (has("y-norm")) c.y_norm = merged["y-norm"];
  if (has("norm")) c.x_norm = merged["norm"];
  if (has("delta")) c.deltas = parse_list(merged["delta"], "--delta");
  if (has("t")) c.t = parse_list(merged["t"], "--t");
  if (has("op")) {
    c.op = merged["op"];
    if (!op_from_flag) c.base_dir = config_dir;
  }
  if (has("q-range")) std::tie(c.q_range_lo, c.q_range_hi) = parse_pair(merged["q-range"], "--q-range");
  if (has("p-range")) std::tie(c.p_range_lo, c.p_range_hi) = parse_pair(merged["p-range"], "--p-range");
  if (has("q-grid")) std::tie(c.q_grid_lo, c.q_grid_hi) = parse_pair(merged["q-grid"], "--q-grid");
  if (has("p-grid")) std::tie(c.p_grid_lo, c.p_grid_hi) = parse_pair(merged["p-grid"], "--p-grid");
  if (has("window-points")) c.window_points = parse_u64(merged["window-points"], "--window-points");
  if (has("pairs")) c.pairs = merged["pairs"];
  if (c.pairs != "all" && c.pairs != "ordered") throw ParseError("--pairs", 0, "expected all or ordered");
  if (has("a-pow")) c.a_pow = num("a-pow");
  if (has("b-pow")) c.b_pow = num("b-pow");
  if (has("c-hat")) c.c_hat = num("c-hat");
  if (has("d-hat")) c.d_hat = num("d-hat");
  if (has("seed")) c.seed = parse_u64(merged["seed"], "--seed");
  if (has("count")) c.count = parse_u64(merged["count"], "--count");
  if (has("nodes")) c.nodes = parse_u64(merged["nodes"], "--nodes");
  if (has("length")) c.length = num("length");
  if (has("tolerance")) c.tolerance = num("tolerance");
  if (!(c.tolerance > 0.0)) throw ParseError("--tolerance", 0, "tolerance must be positive");
  if (has("grid")) c.grid = parse_u64(merged["grid"], "--grid");
  if (has("pmax")) c.pmax = num("pmax");
  return c;
}

namespace {

template <class T>
const T& need(const std::optional<T>& v, const char* flag) {
  if (!v) throw ParseError("command line", 0, std::string("missing ") + flag);
  return *v;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& contents) {
  if (c.output)
    io::write_file_atomic(*c.output, contents);
  else
    out << contents;
}

SampledFunction single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw ParseError("command line", 0, "exactly one --input is required");
  return io::load_function_csv(c.inputs.front());
}

OperatorSpec load_operator(const RunConfig& c) {
  return io::parse_operator(need(c.op, "--op"), c.t, "--op", c.base_dir);
}

std::vector<SampledFunction> load_family(const RunConfig& c, const OperatorSpec& op) {
  if (!c.inputs.empty()) {
    std::vector<SampledFunction> fam;
    for (const auto& path : c.inputs) fam.push_back(io::load_function_csv(path));
    return fam;
  }
  return make_test_family(op, c.count, c.seed, FamilyOptions{c.nodes, c.length});
}

ExponentWindow make_window(const RunConfig& c) {
  return ExponentWindow::log_spaced({c.q_range_lo, c.q_range_hi}, c.q_grid_lo, c.q_grid_hi,
                                    {c.p_range_lo, c.p_range_hi}, c.p_grid_lo, c.p_grid_hi, c.window_points,
                                    c.pairs == "ordered" ? PairRule::p_at_least_q : PairRule::all);
}

std::string window_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["q_range"] = {io::format_double(c.q_range_lo), io::format_double(c.q_range_hi)};
  j["p_range"] = {io::format_double(c.p_range_lo), io::format_double(c.p_range_hi)};
  j["q_grid"] = {c.q_grid_lo, c.q_grid_hi, c.window_points};
  j["p_grid"] = {c.p_grid_lo, c.p_grid_hi, c.window_points};
  j["pairs"] = c.pairs;
  return j.dump();
}

ScanOptions scan(const RunConfig& c) { return ScanOptions{c.grid, c.pmax}; }

std::string line(double v) { return io::format_double(v) + "\n"; }

int run_norm(const RunConfig& c, std::ostream& out) {
  const SampledFunction f = single_input(c);
  double v;
  if (c.psi)
    v = gls_norm(f, io::parse_generating_function(*c.psi, "--psi"), scan(c));
  else
    v = lp_norm(f, need(c.q, "--q or --psi"));
  emit(c, out, line(v));
  return kPass;
}

int run_family(const RunConfig& c, std::ostream& out) {
  const SampledFunction f = single_input(c);
  const NormFamily h = norm_family(f, PGrid::log_spaced(1.0, c.pmax, c.grid, true));
  emit(c, out, c.format == "csv" ? io::norm_family_csv(h) : io::norm_family_json(h) + "\n");
  return kPass;
}

std::vector<double> sorted_deltas(const RunConfig& c) {
  if (c.deltas.empty()) throw ParseError("command line", 0, "missing --delta");
  std::vector<double> d = c.deltas;
  std::sort(d.begin(), d.end());
  return d;
}

int run_phi(const RunConfig& c, std::ostream& out) {
  const GeneratingFunction psi = io::parse_generating_function(need(c.psi, "--psi"), "--psi");
  if (c.deltas.size() == 1) {
    emit(c, out, line(fundamental_function(psi, c.deltas.front(), scan(c))));
  } else {
    emit(c, out, io::fundamental_curve_csv(fundamental_curve(psi, sorted_deltas(c), scan(c))));
  }
  return kPass;
}

int run_kappa(const RunConfig& c, std::ostream& out) {
  const MriNorm z = io::parse_mri_norm(need(c.x_norm, "--norm"), "--norm");
  if (c.deltas.size() == 1) {
    emit(c, out, line(kappa(z, c.deltas.front(), scan(c))));
  } else {
    emit(c, out, io::fundamental_curve_csv(kappa_curve(z, sorted_deltas(c), scan(c))));
  }
  return kPass;
}

int run_tail(const RunConfig& c, std::ostream& out) {
  const SampledFunction f = single_input(c);
  if (c.t.empty()) throw ParseError("command line", 0, "missing --t");
  std::optional<GeneratingFunction> psi;
  double norm = 0.0;
  if (c.psi) {
    psi = io::parse_generating_function(*c.psi, "--psi");
    norm = gls_norm(f, *psi, scan(c));
  }
  std::string csv = psi ? "t,tail,bound\n" : "t,tail\n";
  for (double t : c.t) {
    csv += io::format_double(t) + "," + io::format_double(tail_function(f, t));
    if (psi) csv += "," + io::format_double(tail_bound(*psi, norm, t, scan(c)));
    csv += "\n";
  }
  emit(c, out, csv);
  return kPass;
}

int run_apply(const RunConfig& c, std::ostream& out) {
  const SampledFunction f = single_input(c);
  const OperatorSpec op = load_operator(c);
  if (c.t.size() != 1) throw ParseError("command line", 0, "apply needs exactly one --t");
  emit(c, out, io::function_csv(apply(op, f, c.t.front())));
  return kPass;
}

std::optional<ScalingFunctions> scaling(const RunConfig& c) {
  if (!c.a_pow && !c.b_pow) return std::nullopt;
  return ScalingFunctions::power(c.t, c.a_pow.value_or(1.0), c.b_pow.value_or(1.0));
}

int run_measure(const RunConfig& c, std::ostream& out) {
  const OperatorSpec op = load_operator(c);
  const auto family = load_family(c, op);
  const ExponentWindow window = make_window(c);
  const auto sc = scaling(c);
  const double v = sc ? measure_constant_general(op, family, window, *sc) : measure_constant(op, family, window);
  emit(c, out, line(v));
  return kPass;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  const OperatorSpec op = load_operator(c);
  const auto family = load_family(c, op);
  const ExponentWindow window = make_window(c);

  VerificationReport rep;
  std::map<std::string, std::string> meta;
  meta["operator"] = *c.op;
  meta["t_set"] = nlohmann::json(op.t_set()).dump();
  meta["window"] = window_json(c);
  meta["seed"] = std::to_string(c.seed);
  meta["family"] = c.inputs.empty() ? std::to_string(c.count) + " generated" : nlohmann::json(c.inputs).dump();

  if (c.command == "verify-p1") {
    const auto psi = io::parse_generating_function(need(c.psi, "--psi"), "--psi");
    const auto nu = io::parse_generating_function(need(c.nu, "--nu"), "--nu");
    const double ch = c.c_hat ? *c.c_hat : measure_constant(op, family, window);
    rep = check_proposition1(op, family, psi, nu, window, ch, c.tolerance);
    meta["psi"] = io::generating_function_json(psi);
    meta["nu"] = io::generating_function_json(nu);
  } else {
    const auto x = io::parse_mri_norm(need(c.x_norm, "--x-norm"), "--x-norm");
    const auto y = io::parse_mri_norm(need(c.y_norm, "--y-norm"), "--y-norm");
    meta["x_norm"] = io::mri_norm_json(x);
    meta["y_norm"] = io::mri_norm_json(y);
    if (c.command == "verify-p2") {
      const double ch = c.c_hat ? *c.c_hat : measure_constant(op, family, window);
      rep = check_proposition2(op, family, x, y, window, ch, c.tolerance);
    } else {
      const ScalingFunctions sc = ScalingFunctions::power(op.t_set(), c.a_pow.value_or(1.0), c.b_pow.value_or(1.0));
      const double dh = c.d_hat ? *c.d_hat : measure_constant_general(op, family, window, sc);
      rep = check_proposition3(op, family, x, y, window, sc, dh, c.tolerance);
      meta["scaling"] = "{\"a_pow\":" + io::format_double(c.a_pow.value_or(1.0)) +
                        ",\"b_pow\":" + io::format_double(c.b_pow.value_or(1.0)) + "}";
    }
  }
  rep.metadata = std::move(meta);

  const std::string body = c.format == "csv" ? io::report_csv(rep) : io::report_json(rep);
  if (c.output) io::write_file_atomic(*c.output, body);
  out << rep.check << ": " << (rep.passed ? "pass" : "fail") << " worst_ratio=" << io::format_double(rep.worst_ratio)
      << " constant=" << io::format_double(rep.measured_constant) << " skipped=" << rep.skipped << "\n";
  if (!c.output) out << body;
  return rep.passed ? kPass : kFail;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "help") {
      out << c.help;
      return kPass;
    }
    if (c.command == "norm") return run_norm(c, out);
    if (c.command == "family") return run_family(c, out);
    if (c.command == "phi") return run_phi(c, out);
    if (c.command == "kappa") return run_kappa(c, out);
    if (c.command == "tail") return run_tail(c, out);
    if (c.command == "apply") return run_apply(c, out);
    if (c.command == "measure-c") return run_measure(c, out);
    if (c.command.starts_with("verify-p")) return run_verify(c, out);
    err << "glspace: unknown command '" << c.command << "'\n";
    return kParse;
  } catch (const ParseError& e) {
    err << "glspace: " << e.what() << "\n";
    return kParse;
  } catch (const DegenerateError& e) {
    err << "glspace: degenerate: " << e.what() << "\n";
    return kDegenerate;
  } catch (const DomainError& e) {
    err << "glspace: " << e.what() << "\n";
    return kDomain;
  } catch (const PreconditionError& e) {
    err << "glspace: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "glspace: " << e.what() << "\n";
    return kInternal;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const ParseError& e) {
    err << "glspace: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "glspace: " << e.what() << "\n";
    return kParse;
  }
  return run(config, out, err);
}

}  // namespace glspace::cli
