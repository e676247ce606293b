#include "glspace/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "glspace/error.hpp"

namespace glspace::io {

using Json = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source, 0, e.what());
  }
}

// Numbers may also be written as the strings "inf", "-inf", "nan".
Json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double json_number(const Json& j, const std::string& source, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>(), source);
  throw ParseError(source, 0, std::string("field '") + key + "' must be a number");
}

const Json& require(const Json& j, const char* key, const std::string& source) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(source, 0, std::string("missing field '") + key + "'");
  return j.at(key);
}

double require_number(const Json& j, const char* key, const std::string& source) {
  return json_number(require(j, key, source), source, key);
}

std::vector<double> number_array(const Json& j, const std::string& source, const char* key) {
  if (!j.is_array()) throw ParseError(source, 0, std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const Json& v : j) out.push_back(json_number(v, source, key));
  return out;
}

// Wraps constructor validation failures so they carry the input name.
template <class Fn>
auto with_source(const std::string& source, Fn fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw ParseError(source, 0, e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(source, 0, e.what());
  }
}

struct CsvReader {
  std::istream& in;
  const std::string& source;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  }

  void expect_header(const std::vector<std::string_view>& names) {
    std::string line;
    if (!next(line)) throw ParseError(source, line_no, "empty file");
    auto fields = split(line, ',');
    if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].remove_prefix(3);
    if (fields != names) {
      std::string want;
      for (auto n : names) want += (want.empty() ? "" : ",") + std::string(n);
      throw ParseError(source, line_no, "expected header '" + want + "'");
    }
  }

  std::vector<double> row(const std::string& line, std::size_t width) {
    const auto fields = split(line, ',');
    if (fields.size() != width)
      throw ParseError(source, line_no, "expected " + std::to_string(width) + " fields, got " +
                                            std::to_string(fields.size()));
    std::vector<double> v;
    for (auto f : fields) v.push_back(parse_double(f, source, line_no));
    return v;
  }
};

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& source, std::size_t line) {
  text = trim(text);
  if (text == "inf" || text == "+inf" || text == "infinity") return kInfinity;
  if (text == "-inf" || text == "-infinity") return -kInfinity;
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError(source, line, "not a number: '" + std::string(text) + "'");
  return v;
}

SampledFunction read_function_csv(std::istream& in, const std::string& source) {
  CsvReader csv{in, source};
  csv.expect_header({"node", "weight", "value"});
  std::vector<double> nodes, weights, values;
  std::string line;
  while (csv.next(line)) {
    const auto r = csv.row(line, 3);
    nodes.push_back(r[0]);
    weights.push_back(r[1]);
    values.push_back(r[2]);
  }
  try {
    auto space = std::make_shared<const MeasureSpace>(std::move(nodes), std::move(weights));
    return SampledFunction(std::move(space), std::move(values));
  } catch (const PreconditionError& e) {
    throw ParseError(source, 0, e.what());
  }
}

SampledFunction load_function_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_function_csv(in, path.string());
}

std::string function_csv(const SampledFunction& f) {
  std::string out = "node,weight,value\n";
  const auto n = f.space().nodes();
  const auto w = f.space().weights();
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    out += format_double(n[i]) + "," + format_double(w[i]) + "," + format_double(v[i]) + "\n";
  return out;
}

std::string pgrid_json(const PGrid& grid) {
  Json j;
  j["points"] = std::vector<double>(grid.points().begin(), grid.points().end());
  j["infinity"] = grid.includes_infinity();
  return j.dump();
}

PGrid parse_pgrid(std::string_view text, const std::string& source) {
  const Json j = parse_json(text, source);
  auto pts = number_array(require(j, "points", source), source, "points");
  const bool inf = j.contains("infinity") ? j.at("infinity").get<bool>() : false;
  return with_source(source, [&] { return PGrid(std::move(pts), inf); });
}

namespace {

Json psi_to_json(const GeneratingFunction& psi) {
  return std::visit(Overloaded{[](const PowerLaw& k) { return Json{{"kind", "power"}, {"m", k.m}}; },
                               [](const EndpointSingular& k) {
                                 return Json{{"kind", "endpoint"}, {"a", k.a}, {"b", k.b}, {"alpha", k.alpha},
                                             {"beta", k.beta}};
                               },
                               [](const Extremal& k) { return Json{{"kind", "extremal"}, {"r", k.r}}; },
                               [](const Tabulated& k) { return Json{{"kind", "tabulated"}, {"p", k.p}, {"psi", k.psi}}; }},
                    psi.kind());
}

GeneratingFunction psi_from_json(const Json& j, const std::string& source) {
  const std::string kind = require(j, "kind", source).get<std::string>();
  return with_source(source, [&] {
    if (kind == "power") return GeneratingFunction::power(require_number(j, "m", source));
    if (kind == "endpoint")
      return GeneratingFunction::endpoint(require_number(j, "a", source), require_number(j, "b", source),
                                          require_number(j, "alpha", source), require_number(j, "beta", source));
    if (kind == "extremal") return GeneratingFunction::extremal(require_number(j, "r", source));
    if (kind == "tabulated")
      return GeneratingFunction::tabulated(number_array(require(j, "p", source), source, "p"),
                                           number_array(require(j, "psi", source), source, "psi"));
    throw ParseError(source, 0, "unknown generating function kind '" + kind + "'");
  });
}

// `kind:key=value,key=value`; list values separated by ';'.
Json shorthand_to_json(std::string_view text, const std::string& source) {
  const std::size_t colon = text.find(':');
  Json j;
  j["kind"] = std::string(trim(text.substr(0, colon)));
  if (colon == std::string_view::npos) return j;
  for (auto item : split(text.substr(colon + 1), ',')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, 0, "expected key=value in '" + std::string(item) + "'");
    const std::string key(trim(item.substr(0, eq)));
    const std::string_view val = trim(item.substr(eq + 1));
    if (val.find(';') != std::string_view::npos) {
      Json arr = Json::array();
      for (auto v : split(val, ';')) arr.push_back(parse_double(v, source));
      j[key] = arr;
    } else if (key == "p" || key == "psi") {
      j[key] = Json::array({parse_double(val, source)});
    } else {
      j[key] = parse_double(val, source);
    }
  }
  return j;
}

Json parse_object_or_shorthand(std::string_view text, const std::string& source) {
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_json(t, source);
  return shorthand_to_json(t, source);
}

}  // namespace

GeneratingFunction parse_generating_function(std::string_view text, const std::string& source) {
  return psi_from_json(parse_object_or_shorthand(text, source), source);
}

std::string generating_function_json(const GeneratingFunction& psi) { return psi_to_json(psi).dump(); }

MriNorm parse_mri_norm(std::string_view text, const std::string& source) {
  const Json j = parse_json(trim(text), source);
  const std::string kind = require(j, "kind", source).get<std::string>();
  const Json& pj = require(j, "psi", source);
  GeneratingFunction psi = pj.is_string() ? parse_generating_function(pj.get<std::string>(), source)
                                          : psi_from_json(pj, source);
  return with_source(source, [&] {
    if (kind == "sup") return MriNorm::sup(std::move(psi));
    if (kind == "integral") return MriNorm::integral(std::move(psi), require_number(j, "s", source));
    throw ParseError(source, 0, "unknown m.r.i. norm kind '" + kind + "'");
  });
}

std::string mri_norm_json(const MriNorm& z) {
  return std::visit(Overloaded{[](const SupWeighted& k) { return Json{{"kind", "sup"}, {"psi", psi_to_json(k.psi)}}; },
                               [](const IntegralWeighted& k) {
                                 return Json{{"kind", "integral"}, {"psi", psi_to_json(k.psi)}, {"s", k.s}};
                               }},
                    z.kind())
      .dump();
}

std::string fundamental_curve_csv(const FundamentalCurve& c) {
  std::string out = "delta,value\n";
  for (std::size_t i = 0; i < c.deltas().size(); ++i)
    out += format_double(c.deltas()[i]) + "," + format_double(c.values()[i]) + "\n";
  return out;
}

FundamentalCurve parse_fundamental_curve_csv(std::istream& in, const std::string& source) {
  CsvReader csv{in, source};
  csv.expect_header({"delta", "value"});
  std::vector<double> d, v;
  std::string line;
  while (csv.next(line)) {
    const auto r = csv.row(line, 2);
    d.push_back(r[0]);
    v.push_back(r[1]);
  }
  return with_source(source, [&] { return FundamentalCurve(std::move(d), std::move(v)); });
}

std::string norm_family_csv(const NormFamily& h) {
  std::string out = "p,h\n";
  const auto pts = h.grid().points();
  for (std::size_t i = 0; i < pts.size(); ++i) out += format_double(pts[i]) + "," + format_double(h.values()[i]) + "\n";
  if (h.essential_sup()) out += "inf," + format_double(*h.essential_sup()) + "\n";
  return out;
}

std::string norm_family_json(const NormFamily& h) {
  Json j;
  j["points"] = std::vector<double>(h.grid().points().begin(), h.grid().points().end());
  j["infinity"] = h.grid().includes_infinity();
  j["values"] = std::vector<double>(h.values().begin(), h.values().end());
  j["essential_sup"] = h.essential_sup() ? Json(*h.essential_sup()) : Json(nullptr);
  return j.dump();
}

std::vector<double> parse_t_set(std::string_view text, const std::string& source) {
  return number_array(parse_json(text, source), source, "t_set");
}

std::vector<KernelTable::Row> read_kernel_table_csv(std::istream& in, const std::string& source) {
  CsvReader csv{in, source};
  csv.expect_header({"t", "y", "x", "v", "K"});
  std::vector<KernelTable::Row> rows;
  std::string line;
  while (csv.next(line)) {
    const auto r = csv.row(line, 5);
    rows.push_back({r[0], r[1], r[2], r[3], r[4]});
  }
  return rows;
}

OperatorSpec parse_operator(std::string_view text, std::vector<double> t_set, const std::string& source,
                            const std::filesystem::path& base_dir) {
  const Json j = parse_object_or_shorthand(text, source);
  const std::string kind = require(j, "kind", source).get<std::string>();
  OperatorSpec::Kind k;
  if (kind == "dilation") {
    k = Dilation{};
  } else if (kind == "heat") {
    const double n = require_number(j, "n", source);
    if (!(n >= 1.0) || n != std::floor(n)) throw ParseError(source, 0, "heat resolution n must be a positive integer");
    k = HeatConvolution{require_number(j, "length", source), static_cast<std::size_t>(n)};
  } else if (kind == "nikolskii") {
    const double d = require_number(j, "degree", source);
    if (!(d >= 0.0) || d != std::floor(d)) throw ParseError(source, 0, "degree must be a nonnegative integer");
    k = NikolskiiIdentity{static_cast<int>(d)};
  } else if (kind == "kernel") {
    std::filesystem::path table_path = require(j, "table", source).get<std::string>();
    if (table_path.is_relative() && !base_dir.empty()) table_path = base_dir / table_path;
    std::ifstream in(table_path);
    if (!in) throw ParseError(table_path.string(), 0, "cannot open kernel table");
    auto table = std::make_shared<const KernelTable>(
        with_source(table_path.string(), [&] { return KernelTable(read_kernel_table_csv(in, table_path.string())); }));
    std::vector<double> xw, yw;
    if (j.contains("x_weights")) xw = number_array(j.at("x_weights"), source, "x_weights");
    if (j.contains("y_weights")) yw = number_array(j.at("y_weights"), source, "y_weights");
    if (t_set.empty()) t_set = table->t_values();
    k = with_source(source, [&] { return make_kernel_integral(table, std::move(xw), std::move(yw)); });
  } else {
    throw ParseError(source, 0, "unknown operator kind '" + kind + "'");
  }
  return with_source(source, [&] { return OperatorSpec(std::move(k), std::move(t_set)); });
}

std::string report_json(const VerificationReport& r) {
  Json j;
  j["check"] = r.check;
  j["measured_constant"] = number_json(r.measured_constant);
  j["tolerance"] = number_json(r.tolerance);
  j["worst_ratio"] = number_json(r.worst_ratio);
  j["verdict"] = r.passed ? "pass" : "fail";
  j["skipped"] = r.skipped;
  Json meta = Json::object();
  for (const auto& [key, value] : r.metadata) {
    Json parsed = Json::parse(value, nullptr, false);
    meta[key] = parsed.is_discarded() ? Json(value) : parsed;
  }
  j["metadata"] = meta;
  Json rows = Json::array();
  for (const RatioRow& row : r.rows)
    rows.push_back(Json{{"f_index", row.f_index},
                        {"t", number_json(row.t)},
                        {"lhs", number_json(row.lhs)},
                        {"rhs", number_json(row.rhs)},
                        {"ratio", number_json(row.ratio)},
                        {"skipped", row.skipped}});
  j["per_t_ratios"] = rows;
  return j.dump(2) + "\n";
}

VerificationReport parse_report_json(std::string_view text, const std::string& source) {
  const Json j = parse_json(text, source);
  VerificationReport r;
  try {
    r.check = require(j, "check", source).get<std::string>();
    r.measured_constant = require_number(j, "measured_constant", source);
    r.tolerance = require_number(j, "tolerance", source);
    r.worst_ratio = require_number(j, "worst_ratio", source);
    r.passed = require(j, "verdict", source).get<std::string>() == "pass";
    r.skipped = require(j, "skipped", source).get<std::size_t>();
    for (const auto& [key, value] : require(j, "metadata", source).items())
      r.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
    for (const Json& row : require(j, "per_t_ratios", source))
      r.rows.push_back({require(row, "f_index", source).get<std::size_t>(), require_number(row, "t", source),
                        require_number(row, "lhs", source), require_number(row, "rhs", source),
                        require_number(row, "ratio", source), require(row, "skipped", source).get<bool>()});
  } catch (const Json::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  return r;
}

std::string report_csv(const VerificationReport& r) {
  std::string out = "t,lhs,rhs,ratio\n";
  for (const RatioRow& row : r.rows)
    out += format_double(row.t) + "," + format_double(row.lhs) + "," + format_double(row.rhs) + "," +
           format_double(row.ratio) + "\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace glspace::io
