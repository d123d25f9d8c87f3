#include "dirmix/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "dirmix/digest.hpp"
#include "dirmix/errors.hpp"

namespace dirmix {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw InvalidArgument("config: " + what); }

Scalar parse_scalar(const json& j, const std::string& where) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long>());
  config_error(where + ": scalars are strings like \"1/2\" or integers");
}

std::int64_t parse_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) config_error(where + " must be an integer");
  return j.get<std::int64_t>();
}

std::int64_t positive_int(const json& root, const char* key, std::int64_t fallback) {
  if (!root.contains(key)) return fallback;
  const std::int64_t v = parse_int(root[key], key);
  if (v < 1) config_error(std::string(key) + " must be >= 1");
  return v;
}

std::vector<Scalar> scalar_list(const json& j, const std::string& where) {
  if (!j.is_array()) config_error(where + " must be a list");
  std::vector<Scalar> out;
  for (const auto& e : j) out.push_back(parse_scalar(e, where));
  return out;
}

LatticePoint parse_point(const json& j, const std::string& where) {
  if (!j.is_array()) config_error(where + ": lattice points are integer lists");
  std::vector<std::int64_t> c;
  for (const auto& e : j) c.push_back(parse_int(e, where));
  return LatticePoint(std::move(c));
}

Arc parse_arc(const std::string& text) {
  if (text.size() < 4 || text.front() != '[' || text.back() != ')') {
    config_error("arc \"" + text + "\" must look like [a,b)");
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) config_error("arc \"" + text + "\" lacks ','");
  Arc a{Scalar::parse(text.substr(1, comma - 1)),
        Scalar::parse(text.substr(comma + 1, text.size() - comma - 2))};
  if (a.lo.sign() < 0 || a.hi > Scalar(1) || a.lo >= a.hi) {
    config_error("arc \"" + text + "\" is not a non-empty arc of [0,1)");
  }
  return a;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) config_error(where + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) config_error(where + " must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Resolves event specs, following name references on demand.
class EventResolver {
 public:
  EventResolver(const System& sys, const json& defs) : sys_(sys), defs_(defs) {}

  EventExpr resolve_name(const std::string& name) {
    if (name == "X") return EventExpr::whole();
    if (name == "empty") return EventExpr::empty();
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (!defs_.is_object() || !defs_.contains(name)) config_error("unknown event \"" + name + "\"");
    if (!active_.insert(name).second) config_error("event \"" + name + "\" refers to itself");
    EventExpr e = resolve(defs_[name], "events." + name);
    active_.erase(name);
    done_.emplace(name, e);
    return e;
  }

  EventExpr resolve(const json& spec, const std::string& where) {
    if (spec.is_string()) return resolve_name(spec.get<std::string>());
    if (spec.is_object()) {
      if (spec.contains("complement")) return sys_.complement(resolve(spec["complement"], where));
      config_error(where + ": unknown event form");
    }
    if (!spec.is_array()) config_error(where + ": events are constraint lists");
    if (spec.empty() || spec[0].is_string()) {
      EventExpr e = sys_.parse_event(string_list(spec, where));
      sys_.validate(e);
      return e;
    }
    std::vector<Cylinder> atoms;
    for (const auto& part : spec) {
      auto c = sys_.parse_cylinder(string_list(part, where));
      if (c) atoms.push_back(std::move(*c));
    }
    return EventExpr::disjoint_union(std::move(atoms));
  }

  std::map<std::string, EventExpr> all() {
    if (defs_.is_object()) {
      for (const auto& [name, _] : defs_.items()) resolve_name(name);
    }
    return done_;
  }

 private:
  const System& sys_;
  const json& defs_;
  std::map<std::string, EventExpr> done_;
  std::set<std::string> active_;
};

}  // namespace

bool is_verb(const std::string& verb) {
  return std::find(std::begin(kVerbs), std::end(kVerbs), verb) != std::end(kVerbs);
}

System parse_system(const json& j) {
  if (!j.is_object() || !j.contains("kind")) config_error("system needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  auto weights = [&]() {
    std::vector<Rational> w;
    for (const auto& s : scalar_list(j.value("weights", json::array({"1/2", "1/2"})), "weights")) {
      w.push_back(s.as_rational());
    }
    return w;
  };
  if (kind == "bernoulli2d") return System::bernoulli2d(weights());
  if (kind == "counterexample") return System::counterexample(weights());
  if (kind == "rotation2d") {
    const auto angles = scalar_list(j.at("angles"), "angles");
    if (angles.size() != 2) config_error("rotation2d needs two angles");
    return System::rotation2d(angles[0], angles[1]);
  }
  if (kind == "product") return System::product(parse_system(j.at("left")), parse_system(j.at("right")));
  config_error("unknown system kind \"" + kind + "\"");
}

StripSpec parse_strip(const json& j) {
  if (!j.is_object()) config_error("strip must be an object");
  auto direction = scalar_list(j.at("direction"), "direction");
  if (direction.size() < 2) config_error("direction needs at least two coordinates");
  if (!(direction.front() == Scalar(1))) {
    config_error("direction must have leading coordinate 1 (vertical directions are unsupported)");
  }
  direction.erase(direction.begin());
  return StripSpec(DirectionVector(std::move(direction)), scalar_list(j.at("widths"), "widths"));
}

std::string ExperimentConfig::hash() const { return sha256_hex(raw.dump()); }

ExperimentConfig parse_config(const json& j, const std::string& verb) {
  if (!j.is_object()) config_error("top level must be an object");
  if (!is_verb(verb)) config_error("unknown verb \"" + verb + "\"");
  if (j.contains("verb") && j["verb"].get<std::string>() != verb) {
    config_error("file declares verb \"" + j["verb"].get<std::string>() + "\" but \"" + verb +
                 "\" was requested");
  }
  ExperimentConfig cfg;
  cfg.verb = verb;
  cfg.raw = j;
  cfg.raw["verb"] = verb;

  try {
    if (j.contains("system")) cfg.system = parse_system(j["system"]);
    if (j.contains("strip")) cfg.strip = parse_strip(j["strip"]);
    if (j.contains("strip_w")) cfg.second_strip = parse_strip(j["strip_w"]);

    cfg.k = positive_int(j, "k", cfg.k);
    cfg.k_given = j.contains("k");
    cfg.n_max = positive_int(j, "n_max", cfg.n_max);
    cfg.n = positive_int(j, "N", cfg.n);
    cfg.stride = positive_int(j, "stride", cfg.stride);
    cfg.length = positive_int(j, "length", cfg.length);
    cfg.horizon = positive_int(j, "horizon", cfg.horizon);
    cfg.pmax = positive_int(j, "pmax", cfg.pmax);
    cfg.atom_cap = static_cast<std::size_t>(positive_int(j, "atom_cap", static_cast<std::int64_t>(cfg.atom_cap)));
    if (j.contains("window")) {
      cfg.window = parse_int(j["window"], "window");
      if (cfg.window < 0) config_error("window must be >= 0");
    }
    if (j.contains("log_base")) {
      const std::string b = j["log_base"].get<std::string>();
      if (b == "nats" || b == "e") cfg.log_base = LogBase::kNats;
      else if (b == "bits" || b == "2") cfg.log_base = LogBase::kBits;
      else config_error("log_base must be \"nats\" or \"bits\"");
    }
    cfg.enumerate_points = j.value("enumerate", false);
    if (j.contains("beta")) cfg.beta = parse_scalar(j["beta"], "beta");
    if (j.contains("D")) cfg.d_arc = parse_arc(j["D"].get<std::string>());
    if (j.contains("kvn_direction")) {
      auto d = scalar_list(j["kvn_direction"], "kvn_direction");
      if (d.size() < 2 || !(d.front() == Scalar(1))) config_error("kvn_direction must be (1, beta)");
      d.erase(d.begin());
      cfg.kvn_direction = DirectionVector(std::move(d));
    }

    if (j.contains("inputs")) {
      const json& in = j["inputs"];
      cfg.event_b = in.value("B", cfg.event_b);
      cfg.event_c = in.value("C", cfg.event_c);
      cfg.observable_f = in.value("f", cfg.observable_f);
      cfg.observable_g = in.value("g", cfg.observable_g);
      cfg.partition = in.value("partition", cfg.partition);
      if (in.contains("partitions")) cfg.partition_list = string_list(in["partitions"], "inputs.partitions");
    }

    if (j.contains("output")) {
      const json& out = j["output"];
      if (out.contains("dir")) cfg.out_dir = out["dir"].get<std::string>();
      cfg.prefix = out.value("prefix", "");
    }

    const bool needs_system = j.contains("events") || j.contains("partitions") || j.contains("observables");
    if (needs_system && !cfg.system) config_error("events, partitions and observables need a system");
    if (cfg.system) {
      const System& sys = *cfg.system;
      const json empty = json::object();
      EventResolver resolver(sys, j.contains("events") ? j["events"] : empty);
      cfg.events = resolver.all();

      if (j.contains("partitions")) {
        for (const auto& [name, spec] : j["partitions"].items()) {
          const std::string where = "partitions." + name;
          if (spec.is_object() && spec.contains("binary")) {
            cfg.partitions.emplace(name, Partition::binary(sys, resolver.resolve(spec["binary"], where)));
            continue;
          }
          if (!spec.is_array()) config_error(where + " must be a list of atoms or {\"binary\": event}");
          std::vector<EventExpr> atoms;
          for (const auto& atom : spec) atoms.push_back(resolver.resolve(atom, where));
          cfg.partitions.emplace(name, Partition::make(sys, std::move(atoms)));
        }
      }

      if (j.contains("observables")) {
        for (const auto& [name, spec] : j["observables"].items()) {
          const std::string where = "observables." + name;
          if (!spec.is_array()) config_error(where + " must be a list of {coef, event} terms");
          ObservableExpr f;
          for (const auto& term : spec) {
            f.add(parse_scalar(term.at("coef"), where), resolver.resolve(term.at("event"), where));
          }
          cfg.observables.emplace(name, std::move(f));
        }
      }
    }

    if (j.contains("plan")) {
      const json& p = j["plan"];
      PlanSpec plan;
      if (p.contains("points")) {
        plan.kind = PlanSpec::Kind::kPoints;
        for (const auto& pt : p["points"]) plan.points.push_back(parse_point(pt, "plan.points"));
        plan.length = static_cast<std::int64_t>(plan.points.size());
      } else if (p.contains("column_min")) {
        plan.kind = PlanSpec::Kind::kColumnMin;
        plan.length = parse_int(p["column_min"], "plan.column_min");
        plan.start = p.contains("start") ? parse_int(p["start"], "plan.start") : 0;
      } else if (p.contains("fullseq")) {
        plan.kind = PlanSpec::Kind::kFullEntropy;
        plan.partitions = string_list(p["fullseq"], "plan.fullseq");
        plan.length = positive_int(p, "length", cfg.length);
        for (const auto& name : plan.partitions) {
          if (!cfg.partitions.count(name)) config_error("plan refers to unknown partition \"" + name + "\"");
        }
      } else {
        config_error("plan needs \"points\", \"column_min\" or \"fullseq\"");
      }
      cfg.plan = std::move(plan);
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& verb) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_config(j, verb);
}

}  // namespace dirmix
