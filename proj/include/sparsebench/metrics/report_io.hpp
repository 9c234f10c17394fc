#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsebench/core/text_io.hpp"
#include "sparsebench/metrics/solve_report.hpp"

namespace sparsebench {

inline constexpr const char* kReportCsvHeader =
    "problem,solver,precond,blocks,epsilon,n,nnz,t_rhs,order_s,symbolic_s,factor_s,precond_s,"
    "solve_s,total_s,flops,iterations,fill_density,mem_bytes,x_err,residual,converged";

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw Error(ErrorCode::invalid_argument, "unknown format '" + s + "' (expected csv or json)");
}

namespace detail {

inline std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
inline std::string csv_opt(const std::optional<Index>& v) { return v ? std::to_string(*v) : ""; }

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"')
        quoted = false;
      else
        fields.back() += c;
    } else if (c == '"')
      quoted = true;
    else if (c == ',')
      fields.emplace_back();
    else if (c != '\r')
      fields.back() += c;
  }
  return fields;
}

inline std::optional<double> parse_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

inline Index parse_index(const std::string& s) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    fail(ErrorCode::parse_error, "not an unsigned integer: '" + s + "'");
  return v;
}

inline std::optional<Index> parse_opt_index(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_index(s);
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> json_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

inline void write_csv(std::ostream& out, const std::vector<SolveReport>& reports) {
  using detail::csv_opt;
  out << kReportCsvHeader << '\n';
  for (const auto& r : reports) {
    out << detail::csv_text(r.problem) << ',' << detail::csv_text(r.solver) << ','
        << detail::csv_text(r.precond) << ',' << csv_opt(r.blocks) << ',' << csv_opt(r.epsilon) << ','
        << r.n << ',' << r.nnz << ',' << r.t_rhs << ',' << csv_opt(r.order_s) << ','
        << csv_opt(r.symbolic_s) << ',' << csv_opt(r.factor_s) << ',' << csv_opt(r.precond_s) << ','
        << csv_opt(r.solve_s) << ',' << csv_opt(r.total_s) << ',' << r.flops << ','
        << csv_opt(r.iterations) << ',' << csv_opt(r.fill_density) << ',' << r.mem_bytes << ','
        << csv_opt(r.x_err) << ',' << csv_opt(r.residual) << ',' << (r.converged ? "true" : "false")
        << '\n';
  }
}

/// Parses what write_csv produced. JSON-only fields keep their defaults.
inline std::vector<SolveReport> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) detail::fail(ErrorCode::parse_error, "missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportCsvHeader) detail::fail(ErrorCode::parse_error, "unexpected CSV header");
  std::vector<SolveReport> out;
  std::uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 21) throw IndexedError(ErrorCode::parse_error, line_no, "expected 21 CSV fields");
    try {
      SolveReport r;
      r.problem = f[0];
      r.solver = f[1];
      r.precond = f[2];
      r.blocks = detail::parse_opt_index(f[3]);
      r.epsilon = detail::parse_opt_double(f[4]);
      r.n = detail::parse_index(f[5]);
      r.nnz = detail::parse_index(f[6]);
      r.t_rhs = detail::parse_index(f[7]);
      r.order_s = detail::parse_opt_double(f[8]);
      r.symbolic_s = detail::parse_opt_double(f[9]);
      r.factor_s = detail::parse_opt_double(f[10]);
      r.precond_s = detail::parse_opt_double(f[11]);
      r.solve_s = detail::parse_opt_double(f[12]);
      r.total_s = detail::parse_opt_double(f[13]);
      r.flops = detail::parse_index(f[14]);
      r.iterations = detail::parse_opt_index(f[15]);
      r.fill_density = detail::parse_opt_double(f[16]);
      r.mem_bytes = detail::parse_index(f[17]);
      r.x_err = detail::parse_opt_double(f[18]);
      r.residual = detail::parse_opt_double(f[19]);
      if (f[20] != "true" && f[20] != "false") detail::fail(ErrorCode::parse_error, "converged must be true/false");
      r.converged = f[20] == "true";
      out.push_back(std::move(r));
    } catch (const Error& e) {
      throw IndexedError(ErrorCode::parse_error, line_no, e.what());
    }
  }
  return out;
}

inline nlohmann::json to_json(const SolveReport& r) {
  using detail::opt_json;
  nlohmann::json j;
  j["problem"] = r.problem;
  j["solver"] = r.solver;
  j["precond"] = r.precond;
  j["blocks"] = opt_json(r.blocks);
  j["epsilon"] = opt_json(r.epsilon);
  j["n"] = r.n;
  j["nnz"] = r.nnz;
  j["t_rhs"] = r.t_rhs;
  j["order_s"] = opt_json(r.order_s);
  j["symbolic_s"] = opt_json(r.symbolic_s);
  j["factor_s"] = opt_json(r.factor_s);
  j["precond_s"] = opt_json(r.precond_s);
  j["solve_s"] = opt_json(r.solve_s);
  j["total_s"] = opt_json(r.total_s);
  j["flops"] = r.flops;
  j["iterations"] = opt_json(r.iterations);
  j["fill_density"] = opt_json(r.fill_density);
  j["mem_bytes"] = r.mem_bytes;
  j["x_err"] = opt_json(r.x_err);
  j["residual"] = opt_json(r.residual);
  j["converged"] = r.converged;
  j["ordering"] = r.ordering;
  j["flop_rate"] = opt_json(r.flop_rate);
  j["timer_resolution_s"] = r.timer_resolution_s;
  j["error"] = r.error;
  j["error_message"] = r.error_message;
  return j;
}

inline SolveReport report_from_json(const nlohmann::json& j) {
  using detail::json_opt;
  try {
    SolveReport r;
    r.problem = j.at("problem").get<std::string>();
    r.solver = j.at("solver").get<std::string>();
    r.precond = j.at("precond").get<std::string>();
    r.blocks = json_opt<Index>(j, "blocks");
    r.epsilon = json_opt<double>(j, "epsilon");
    r.n = j.at("n").get<Index>();
    r.nnz = j.at("nnz").get<Index>();
    r.t_rhs = j.at("t_rhs").get<Index>();
    r.order_s = json_opt<double>(j, "order_s");
    r.symbolic_s = json_opt<double>(j, "symbolic_s");
    r.factor_s = json_opt<double>(j, "factor_s");
    r.precond_s = json_opt<double>(j, "precond_s");
    r.solve_s = json_opt<double>(j, "solve_s");
    r.total_s = json_opt<double>(j, "total_s");
    r.flops = j.at("flops").get<std::uint64_t>();
    r.iterations = json_opt<Index>(j, "iterations");
    r.fill_density = json_opt<double>(j, "fill_density");
    r.mem_bytes = j.at("mem_bytes").get<std::uint64_t>();
    r.x_err = json_opt<double>(j, "x_err");
    r.residual = json_opt<double>(j, "residual");
    r.converged = j.at("converged").get<bool>();
    r.ordering = j.value("ordering", std::string{});
    r.flop_rate = json_opt<double>(j, "flop_rate");
    r.timer_resolution_s = j.value("timer_resolution_s", r.timer_resolution_s);
    r.error = j.value("error", std::string{});
    r.error_message = j.value("error_message", std::string{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(ErrorCode::parse_error, e.what());
  }
}

inline void write_json(std::ostream& out, const std::vector<SolveReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

inline std::vector<SolveReport> read_json(std::istream& in) {
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    detail::fail(ErrorCode::parse_error, e.what());
  }
  if (!arr.is_array()) detail::fail(ErrorCode::parse_error, "expected a JSON array of reports");
  std::vector<SolveReport> out;
  for (const auto& j : arr) out.push_back(report_from_json(j));
  return out;
}

inline void emit_report(const std::vector<SolveReport>& reports, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::csv)
    write_csv(out, reports);
  else
    write_json(out, reports);
}

inline void emit_report(const std::vector<SolveReport>& reports, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) detail::fail(ErrorCode::io_error, "cannot open " + path + " for writing");
  emit_report(reports, format, out);
  out.flush();
  if (!out) detail::fail(ErrorCode::io_error, "write failed: " + path);
}

inline std::vector<SolveReport> read_report_file(const std::string& path, ReportFormat format) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorCode::io_error, "cannot open " + path);
  return format == ReportFormat::csv ? read_csv(in) : read_json(in);
}

}  // namespace sparsebench
