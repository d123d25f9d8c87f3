#include "dirmix/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dirmix/errors.hpp"

namespace dirmix {

void ConvergenceReport::add_row(std::int64_t index, const Scalar& exact) {
  if (!rows_.empty() && index <= rows_.back().index) {
    throw InvalidArgument("report rows must be strictly increasing in k");
  }
  rows_.push_back(ReportRow{index, exact.to_double(), exact});
}

void ConvergenceReport::add_row(std::int64_t index, double value) {
  if (!rows_.empty() && index <= rows_.back().index) {
    throw InvalidArgument("report rows must be strictly increasing in k");
  }
  rows_.push_back(ReportRow{index, value, std::nullopt});
}

void ConvergenceReport::set_aux(const std::string& name, std::vector<double> column) {
  if (column.size() != rows_.size()) {
    throw InvalidArgument("aux column " + name + " does not match the row count");
  }
  aux_[name] = std::move(column);
}

std::string format_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, end);
}

std::string report_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "index,value_decimal,value_exact_num,value_exact_den\n";
  for (const auto& row : report.rows()) {
    out << row.index << ',' << format_decimal(row.value) << ',';
    if (row.exact && row.exact->is_rational()) {
      const Rational& q = row.exact->as_rational();
      out << q.get_num().get_str() << ',' << q.get_den().get_str();
    } else {
      out << ',';
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json report_sidecar(const ConvergenceReport& report) {
  nlohmann::json j;
  j["quantity"] = report.quantity();
  j["meta"] = report.meta();
  j["row_count"] = report.rows().size();
  std::vector<bool> exact;
  nlohmann::json irrational = nlohmann::json::object();
  for (const auto& row : report.rows()) {
    exact.push_back(row.exact.has_value());
    if (row.exact && !row.exact->is_rational()) {
      irrational[std::to_string(row.index)] = row.exact->to_string();
    }
  }
  j["row_exact"] = exact;
  j["irrational_exact_values"] = irrational;
  nlohmann::json aux = nlohmann::json::object();
  for (const auto& [name, column] : report.aux()) aux[name] = column;
  j["aux"] = aux;
  return j;
}

std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report,
                                               const std::filesystem::path& stem) {
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path json = stem;
  json += ".json";
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    out << report_csv(report);
  }
  {
    std::ofstream out(json, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + json.string());
    out << report_sidecar(report).dump(2) << '\n';
  }
  return {csv, json};
}

}  // namespace dirmix
