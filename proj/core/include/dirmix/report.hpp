#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirmix/scalar.hpp"

namespace dirmix {

struct ReportRow {
  std::int64_t index = 0;
  double value = 0.0;
  /// Present when the row was computed exactly.
  std::optional<Scalar> exact;
};

/// A table of (k, value) rows for one Cesàro / entropy / ergodic quantity.
/// Rows are kept strictly increasing in k.
class ConvergenceReport {
 public:
  explicit ConvergenceReport(std::string quantity) : quantity_(std::move(quantity)) {}

  void add_row(std::int64_t index, const Scalar& exact);
  void add_row(std::int64_t index, double value);

  const std::string& quantity() const { return quantity_; }
  const std::vector<ReportRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const ReportRow& back() const { return rows_.back(); }

  /// Free-form metadata (system, strip, events, ...), written to the sidecar.
  nlohmann::json& meta() { return meta_; }
  const nlohmann::json& meta() const { return meta_; }

  /// Extra per-row columns (same length as rows) carried in the sidecar.
  void set_aux(const std::string& name, std::vector<double> column);
  const std::map<std::string, std::vector<double>>& aux() const { return aux_; }

 private:
  std::string quantity_;
  std::vector<ReportRow> rows_;
  nlohmann::json meta_ = nlohmann::json::object();
  std::map<std::string, std::vector<double>> aux_;
};

/// Shortest round-trip decimal form of a double.
std::string format_decimal(double v);

/// CSV with header index,value_decimal,value_exact_num,value_exact_den. The
/// exact columns are empty for inexact or irrational rows.
std::string report_csv(const ConvergenceReport& report);
nlohmann::json report_sidecar(const ConvergenceReport& report);

/// Writes <stem>.csv and <stem>.json; returns the two paths.
std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report,
                                               const std::filesystem::path& stem);

}  // namespace dirmix
