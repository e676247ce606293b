#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glspace/measure.hpp"
#include "glspace/operators.hpp"
#include "glspace/spaces.hpp"
#include "glspace/verify.hpp"

namespace glspace::io {

/// Shortest decimal that round-trips to the same double; "inf", "-inf", "nan" otherwise.
std::string format_double(double v);
/// Parses a decimal (or inf/nan) occupying the whole string; throws ParseError naming `source`.
double parse_double(std::string_view text, const std::string& source = "<input>", std::size_t line = 0);

/// CSV with header `node,weight,value`, one row per node.
SampledFunction read_function_csv(std::istream& in, const std::string& source = "<input>");
SampledFunction load_function_csv(const std::filesystem::path& path);
std::string function_csv(const SampledFunction& f);

/// `{"points":[...],"infinity":bool}`
std::string pgrid_json(const PGrid& grid);
PGrid parse_pgrid(std::string_view json, const std::string& source = "<input>");

/// `{"kind":"power","m":..}` | `{"kind":"endpoint","a":..,"b":..,"alpha":..,"beta":..}` |
/// `{"kind":"extremal","r":..}` | `{"kind":"tabulated","p":[..],"psi":[..]}`.
/// Also accepts the shorthand `kind:key=value,...` (e.g. `extremal:r=2`, `power:m=1`).
GeneratingFunction parse_generating_function(std::string_view text, const std::string& source = "<input>");
std::string generating_function_json(const GeneratingFunction& psi);

/// `{"kind":"sup","psi":{..}}` | `{"kind":"integral","psi":{..},"s":..}`
MriNorm parse_mri_norm(std::string_view text, const std::string& source = "<input>");
std::string mri_norm_json(const MriNorm& z);

/// CSV `delta,value`.
std::string fundamental_curve_csv(const FundamentalCurve& c);
FundamentalCurve parse_fundamental_curve_csv(std::istream& in, const std::string& source = "<input>");

/// CSV `p,h`; the p = infinity row is written as `inf`.
std::string norm_family_csv(const NormFamily& h);
std::string norm_family_json(const NormFamily& h);

/// `{"kind":"dilation"}` | `{"kind":"heat","length":..,"n":..}` | `{"kind":"nikolskii","degree":..}` |
/// `{"kind":"kernel","table":"path.csv"}`; a kernel table path is resolved against `base_dir`.
/// The t set comes separately (`t_set_json` is a JSON array).
OperatorSpec parse_operator(std::string_view json, std::vector<double> t_set, const std::string& source = "<input>",
                            const std::filesystem::path& base_dir = {});
std::vector<double> parse_t_set(std::string_view json, const std::string& source = "<input>");

/// Kernel table CSV with header `t,y,x,v,K`.
std::vector<KernelTable::Row> read_kernel_table_csv(std::istream& in, const std::string& source = "<input>");

std::string report_json(const VerificationReport& r);
VerificationReport parse_report_json(std::string_view json, const std::string& source = "<input>");
/// Per-trial table `t,lhs,rhs,ratio`.
std::string report_csv(const VerificationReport& r);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace glspace::io
