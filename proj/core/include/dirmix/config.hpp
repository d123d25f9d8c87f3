#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirmix/lattice.hpp"
#include "dirmix/mixing_analysis.hpp"
#include "dirmix/partition_entropy.hpp"
#include "dirmix/systems.hpp"

namespace dirmix {

inline constexpr const char* kVerbs[] = {"strip",      "correlate", "wmavg",   "entropy",
                                         "fullseq",    "densityone", "ergodic", "suspend",
                                         "sumset",     "kvn"};

bool is_verb(const std::string& verb);

/// How the sequence for `entropy` / `ergodic` is obtained.
struct PlanSpec {
  enum class Kind { kPoints, kColumnMin, kFullEntropy };
  Kind kind = Kind::kColumnMin;
  std::vector<LatticePoint> points;
  std::int64_t length = 0;
  std::int64_t start = 0;
  std::vector<std::string> partitions;
};

/// A parsed experiment file. Scalars are strings ("p/q", "p/q + r/s*sqrt(d)")
/// so that exact values survive serialization.
struct ExperimentConfig {
  std::string verb;
  nlohmann::json raw;

  std::optional<System> system;
  std::optional<StripSpec> strip;
  std::optional<StripSpec> second_strip;  // sumset
  std::map<std::string, EventExpr> events;
  std::map<std::string, Partition> partitions;
  std::map<std::string, ObservableExpr> observables;
  std::optional<PlanSpec> plan;

  // names of the inputs each verb uses
  std::string event_b = "B";
  std::string event_c = "C";
  std::string observable_f = "f";
  std::string observable_g = "g";
  std::string partition = "alpha";
  std::vector<std::string> partition_list;

  std::int64_t k = 1000;
  bool k_given = false;
  std::int64_t n = 6;
  std::int64_t stride = 1;
  std::int64_t length = 12;
  std::int64_t horizon = 1000;
  std::int64_t pmax = 10;
  std::int64_t window = 50;
  std::size_t atom_cap = std::size_t{1} << 20;
  LogBase log_base = LogBase::kNats;
  bool enumerate_points = false;

  // suspend
  std::optional<Scalar> beta;
  std::int64_t n_max = 100;
  Arc d_arc{Scalar(0), Scalar(1)};

  // kvn
  std::optional<DirectionVector> kvn_direction;

  std::filesystem::path out_dir = "dirmix_out";
  std::string prefix;

  /// SHA-256 of the canonical dump of `raw` (verb included).
  std::string hash() const;
};

/// Parses and resolves every name the config references. `verb` comes from
/// the command line; a "verb" field in the file must agree with it.
/// Throws InvalidArgument (config error) on any problem.
ExperimentConfig parse_config(const nlohmann::json& j, const std::string& verb);
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& verb);

System parse_system(const nlohmann::json& j);
StripSpec parse_strip(const nlohmann::json& j);

}  // namespace dirmix
