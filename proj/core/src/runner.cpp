#include "dirmix/runner.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "dirmix/digest.hpp"
#include "dirmix/errors.hpp"
#include "dirmix/lattice.hpp"
#include "dirmix/mixing_analysis.hpp"
#include "dirmix/partition_entropy.hpp"
#include "dirmix/suspension.hpp"

#ifndef DIRMIX_VERSION
#define DIRMIX_VERSION "0.0.0"
#endif

namespace dirmix {

std::string tool_version() { return DIRMIX_VERSION; }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = "dirmix";
  j["version"] = version;
  j["verb"] = verb;
  j["config_sha256"] = config_hash;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files) j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}});
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    j["reports"].push_back({{"file", r.file}, {"rows", r.rows}, {"row_exact", r.row_exact}});
  }
  j["summary"] = summary;
  j["timing"] = {{"wall_seconds", wall_seconds}};
  return j;
}

ConvergenceReport thin_report(const ConvergenceReport& report, std::int64_t stride) {
  if (stride <= 1) return report;
  ConvergenceReport out(report.quantity());
  out.meta() = report.meta();
  out.meta()["stride"] = stride;
  std::vector<std::size_t> kept;
  const auto& rows = report.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].index % stride == 0 || i + 1 == rows.size()) kept.push_back(i);
  }
  for (std::size_t i : kept) {
    if (rows[i].exact) out.add_row(rows[i].index, *rows[i].exact);
    else out.add_row(rows[i].index, rows[i].value);
  }
  for (const auto& [name, column] : report.aux()) {
    std::vector<double> c;
    for (std::size_t i : kept) c.push_back(column[i]);
    out.set_aux(name, std::move(c));
  }
  return out;
}

namespace {

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg) {
    manifest_.verb = cfg.verb;
    manifest_.config_hash = cfg.hash();
    manifest_.version = tool_version();
  }

  RunManifest run() {
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg_.out_dir);
    const std::string& v = cfg_.verb;
    if (v == "strip") run_strip();
    else if (v == "correlate") run_correlate();
    else if (v == "wmavg") run_wmavg();
    else if (v == "entropy") run_entropy();
    else if (v == "fullseq") run_fullseq();
    else if (v == "densityone") run_densityone();
    else if (v == "ergodic") run_ergodic();
    else if (v == "suspend") run_suspend();
    else if (v == "sumset") run_sumset();
    else if (v == "kvn") run_kvn();
    else throw InvalidArgument("config: unknown verb \"" + v + "\"");
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text("manifest.json", manifest_.to_json().dump(2) + "\n", /*listed=*/false);
    return manifest_;
  }

 private:
  // ------------------------------------------------------------ requirements
  const System& system() const {
    if (!cfg_.system) throw InvalidArgument("config: verb " + cfg_.verb + " needs a system");
    return *cfg_.system;
  }
  const StripSpec& strip() const {
    if (!cfg_.strip) throw InvalidArgument("config: verb " + cfg_.verb + " needs a strip");
    return *cfg_.strip;
  }
  const EventExpr& event(const std::string& name) const {
    auto it = cfg_.events.find(name);
    if (it != cfg_.events.end()) return it->second;
    if (name == "X") return whole_;
    throw InvalidArgument("config: verb " + cfg_.verb + " needs event \"" + name + "\"");
  }
  const ObservableExpr& observable(const std::string& name) const {
    auto it = cfg_.observables.find(name);
    if (it == cfg_.observables.end()) {
      throw InvalidArgument("config: verb " + cfg_.verb + " needs observable \"" + name + "\"");
    }
    return it->second;
  }
  const Partition& partition(const std::string& name) const {
    auto it = cfg_.partitions.find(name);
    if (it == cfg_.partitions.end()) {
      throw InvalidArgument("config: verb " + cfg_.verb + " needs partition \"" + name + "\"");
    }
    return it->second;
  }
  std::vector<Partition> partition_list() const {
    std::vector<Partition> out;
    if (cfg_.partition_list.empty()) out.push_back(partition(cfg_.partition));
    for (const auto& name : cfg_.partition_list) out.push_back(partition(name));
    return out;
  }

  SequencePlan resolve_plan() const {
    if (!cfg_.plan) throw InvalidArgument("config: verb " + cfg_.verb + " needs a plan");
    const PlanSpec& p = *cfg_.plan;
    switch (p.kind) {
      case PlanSpec::Kind::kPoints:
        return SequencePlan(p.points, strip());
      case PlanSpec::Kind::kColumnMin: {
        std::vector<LatticePoint> points;
        for (std::int64_t m = p.start; static_cast<std::int64_t>(points.size()) < p.length; ++m) {
          if (m - p.start > 64 * p.length + 1024) {
            throw InvalidArgument("config: strip too sparse for a column_min plan");
          }
          auto column = strip_column(strip(), m);
          if (!column.empty()) points.push_back(column.front());
        }
        return SequencePlan(std::move(points), strip());
      }
      case PlanSpec::Kind::kFullEntropy: {
        std::vector<Partition> alphas;
        for (const auto& name : p.partitions) alphas.push_back(partition(name));
        return construct_full_entropy_sequence(system(), alphas, strip(), p.length,
                                               full_options());
      }
    }
    throw InvalidArgument("config: bad plan");
  }

  FullSequenceOptions full_options() const {
    FullSequenceOptions o;
    o.horizon = cfg_.horizon;
    o.join.atom_cap = cfg_.atom_cap;
    return o;
  }

  // ------------------------------------------------------------ output
  std::filesystem::path stem(const std::string& suffix) const {
    return cfg_.out_dir / (cfg_.prefix + cfg_.verb + suffix);
  }

  void record(const std::filesystem::path& path) {
    manifest_.files.push_back(
        {std::filesystem::relative(path, cfg_.out_dir).generic_string(), sha256_file(path)});
  }

  void write_text(const std::string& name, const std::string& text, bool listed = true) {
    const auto path = cfg_.out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    out.close();
    if (listed) record(path);
  }

  void emit(const ConvergenceReport& full, const std::string& suffix = "") {
    ConvergenceReport report = thin_report(full, cfg_.stride);
    const auto paths = emit_report(report, stem(suffix));
    for (const auto& p : paths) record(p);
    RunManifest::ReportSummary s;
    s.file = std::filesystem::relative(paths.front(), cfg_.out_dir).generic_string();
    s.rows = report.rows().size();
    for (const auto& row : report.rows()) s.row_exact.push_back(row.exact.has_value());
    manifest_.reports.push_back(std::move(s));
    if (!report.empty()) {
      nlohmann::json last = {{"index", report.back().index},
                             {"value", report.back().value}};
      if (report.back().exact) last["exact"] = report.back().exact->to_string();
      manifest_.summary["final" + suffix] = last;
    }
  }

  void emit_points(const std::vector<LatticePoint>& points, const std::string& suffix) {
    std::ostringstream out;
    const std::size_t q = points.empty() ? 2 : points.front().dim();
    out << "index";
    for (std::size_t i = 1; i <= q; ++i) out << ",w" << i;
    out << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
      out << i;
      for (auto c : points[i].coords) out << ',' << c;
      out << '\n';
    }
    write_text(cfg_.prefix + cfg_.verb + suffix + ".csv", out.str());
  }

  // ------------------------------------------------------------ verbs
  void run_strip() {
    const StripSpec& s = strip();
    ConvergenceReport report("strip_density");
    report.meta()["strip"] = s.to_string();
    Integer count = 0;
    for (std::int64_t k = 1; k <= cfg_.k; ++k) {
      count += column_cardinality(s, k - 1);
      if (k % cfg_.stride == 0 || k == cfg_.k) {
        Rational d(count, Integer(k));
        d.canonicalize();
        report.add_row(k, Scalar(d));
      }
    }
    report.meta()["cardinality"] = count.get_str();
    manifest_.summary["cardinality"] = count.get_str();
    emit(report);
    if (cfg_.enumerate_points) {
      if (count > 1000000) throw InvalidArgument("config: refusing to enumerate more than 10^6 points");
      emit_points(enumerate_strip(s, cfg_.k), "_points");
    }
  }

  void run_correlate() {
    emit(correlation_average(system(), event(cfg_.event_b), event(cfg_.event_c), strip(), cfg_.k));
    const bool have_f = cfg_.observables.count(cfg_.observable_f) > 0;
    const bool have_g = cfg_.observables.count(cfg_.observable_g) > 0;
    if (have_f && have_g) {
      emit(observable_correlation_average(system(), observable(cfg_.observable_f),
                                          observable(cfg_.observable_g), strip(), cfg_.k),
           "_observable");
    }
  }

  void run_wmavg() {
    const ObservableExpr& f = observable(cfg_.observable_f);
    const ObservableExpr& g =
        cfg_.observables.count(cfg_.observable_g) ? observable(cfg_.observable_g) : f;
    emit(wm_average(system(), f, g, strip(), cfg_.k));
  }

  void run_entropy() {
    const Partition& alpha = partition(cfg_.partition);
    const SequencePlan plan = resolve_plan();
    const std::int64_t kmax = cfg_.k_given ? cfg_.k : static_cast<std::int64_t>(plan.size());
    SequenceEntropyOptions o;
    o.base = cfg_.log_base;
    o.join.atom_cap = cfg_.atom_cap;
    auto report = sequence_entropy_partial(system(), alpha, plan, kmax, o);
    report.meta()["H_alpha"] = shannon_entropy(alpha, cfg_.log_base);
    manifest_.summary["H_alpha"] = shannon_entropy(alpha, cfg_.log_base);
    emit_points(plan.points(), "_plan");
    emit(report);
  }

  void run_fullseq() {
    const auto alphas = partition_list();
    const SequencePlan plan =
        construct_full_entropy_sequence(system(), alphas, strip(), cfg_.length, full_options());
    emit_points(plan.points(), "_plan");
    SequenceEntropyOptions o;
    o.base = cfg_.log_base;
    o.join.atom_cap = cfg_.atom_cap;
    auto report = sequence_entropy_partial(system(), alphas.front(), plan,
                                           static_cast<std::int64_t>(plan.size()), o);
    report.meta()["H_alpha"] = shannon_entropy(alphas.front(), cfg_.log_base);
    manifest_.summary["H_alpha"] = shannon_entropy(alphas.front(), cfg_.log_base);
    emit(report);
  }

  void run_densityone() {
    const StripSpec& s = strip();
    const DensityOneSet set = extract_density_one_set(system(), event(cfg_.event_b),
                                                      event(cfg_.event_c), s, cfg_.pmax, cfg_.horizon);
    std::ostringstream th;
    th << "p,l_p,certified_to\n";
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& t : set.thresholds()) {
      th << t.p << ',' << t.l << ',' << t.certified_to << '\n';
      certs.push_back({{"p", t.p}, {"l_p", t.l}, {"certified_to", t.certified_to}});
    }
    write_text(cfg_.prefix + cfg_.verb + "_thresholds.csv", th.str());
    emit_points(set.excluded(), "_excluded");
    manifest_.summary["thresholds"] = certs;

    ConvergenceReport report("relative_density_Q");
    report.meta()["strip"] = s.to_string();
    std::int64_t total = 0;
    std::int64_t excluded = 0;
    std::size_t next = 0;
    const auto& ex = set.excluded();
    for (std::int64_t k = 1; k <= set.horizon(); ++k) {
      total += static_cast<std::int64_t>(column_cardinality(s, k - 1).get_si());
      while (next < ex.size() && ex[next][0] == k - 1) {
        ++excluded;
        ++next;
      }
      if (total == 0) continue;
      Rational r(total - excluded, total);
      r.canonicalize();
      report.add_row(k, Scalar(r));
    }
    emit(report);
  }

  void run_ergodic() {
    const SequencePlan plan = resolve_plan();
    const std::int64_t nmax = std::min<std::int64_t>(cfg_.n, static_cast<std::int64_t>(plan.size()));
    emit_points(plan.points(), "_plan");
    emit(mean_ergodic_norm(system(), event(cfg_.event_b), plan, nmax));
  }

  void run_suspend() {
    if (!cfg_.beta) throw InvalidArgument("config: verb suspend needs \"beta\"");
    const System& sys = system();
    const EventExpr& B = event(cfg_.event_b);
    const EventExpr& C = event(cfg_.event_c);
    ConvergenceReport report("suspension_correlation");
    report.meta()["system"] = sys.to_string();
    report.meta()["beta"] = cfg_.beta->to_string();
    report.meta()["D"] = cfg_.d_arc.to_string();
    for (std::int64_t n = 1; n <= cfg_.n_max; ++n) {
      report.add_row(n, suspension_correlation(sys, B, C, cfg_.d_arc, *cfg_.beta, n));
    }
    emit(report);
  }

  void run_sumset() {
    if (!cfg_.second_strip) throw InvalidArgument("config: verb sumset needs \"strip_w\"");
    const SumsetResult r = sumset_covers_window(strip(), *cfg_.second_strip, cfg_.window);
    nlohmann::json j = {{"covers", r.covers},
                        {"search_bound", r.search_bound},
                        {"window", cfg_.window},
                        {"strip_v", strip().to_string()},
                        {"strip_w", cfg_.second_strip->to_string()}};
    j["uncovered"] = r.uncovered ? nlohmann::json(r.uncovered->coords) : nlohmann::json(nullptr);
    write_text(cfg_.prefix + "sumset.json", j.dump(2) + "\n");
    manifest_.summary = j;
  }

  void run_kvn() {
    const System& sys = system();
    const ObservableExpr& f = observable(cfg_.observable_f);
    const DirectionVector direction =
        cfg_.kvn_direction ? *cfg_.kvn_direction : strip().direction();
    const KvnParts parts = kvn_decompose(sys, f, direction);
    auto terms = [&](const ObservableExpr& g) {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& t : g.terms()) {
        std::string ev;
        for (const auto& c : t.event.atoms()) ev += (ev.empty() ? "" : " | ") + sys.format_cylinder(c);
        out.push_back({{"coef", t.coef.to_string()}, {"event", ev}});
      }
      return out;
    };
    nlohmann::json j = {
        {"system", sys.to_string()},
        {"direction", direction.to_string()},
        {"kronecker_part", terms(parts.kronecker_part)},
        {"wm_part", terms(parts.wm_part)},
        {"inner_kronecker_wm", inner(sys, parts.kronecker_part, parts.wm_part).to_string()},
        {"norm2_f", inner(sys, f, f).to_string()},
        {"norm2_kronecker", inner(sys, parts.kronecker_part, parts.kronecker_part).to_string()},
        {"norm2_wm", inner(sys, parts.wm_part, parts.wm_part).to_string()},
    };
    write_text(cfg_.prefix + "kvn.json", j.dump(2) + "\n");
    manifest_.summary = j;
    if (cfg_.strip) {
      emit(wm_average(sys, parts.wm_part, parts.wm_part, *cfg_.strip, cfg_.k), "_wm_part");
      emit(wm_average(sys, parts.kronecker_part, parts.kronecker_part, *cfg_.strip, cfg_.k),
           "_kronecker_part");
    }
  }

  const ExperimentConfig& cfg_;
  RunManifest manifest_;
  EventExpr whole_ = EventExpr::whole();
};

}  // namespace

RunManifest run(const ExperimentConfig& cfg) { return Runner(cfg).run(); }

}  // namespace dirmix
