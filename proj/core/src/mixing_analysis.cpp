#include "dirmix/mixing_analysis.hpp"

#include <algorithm>
#include <functional>

#include "dirmix/errors.hpp"
#include "dirmix/parallel.hpp"

namespace dirmix {

// ---------------------------------------------------------------- observables

ObservableExpr ObservableExpr::indicator(EventExpr e, Scalar coef) {
  ObservableExpr f;
  f.add(std::move(coef), std::move(e));
  return f;
}

ObservableExpr ObservableExpr::constant(Scalar c) { return indicator(EventExpr::whole(), std::move(c)); }

ObservableExpr& ObservableExpr::add(Scalar coef, EventExpr e) {
  if (!coef.is_zero() && !e.is_empty()) terms_.push_back(Term{std::move(coef), std::move(e)});
  return *this;
}

ObservableExpr& ObservableExpr::operator+=(const ObservableExpr& o) {
  for (const auto& t : o.terms_) terms_.push_back(t);
  return *this;
}

ObservableExpr& ObservableExpr::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

Scalar translated_inner(const System& sys, const ObservableExpr& f, const LatticePoint& w,
                        const ObservableExpr& g) {
  Scalar total(0);
  for (const auto& a : f.terms()) {
    const EventExpr moved = sys.translate(a.event, w);
    for (const auto& b : g.terms()) total += a.coef * b.coef * sys.measure(intersect(moved, b.event));
  }
  return total;
}

Scalar inner(const System& sys, const ObservableExpr& f, const ObservableExpr& g) {
  Scalar total(0);
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) total += a.coef * b.coef * sys.measure(intersect(a.event, b.event));
  }
  return total;
}

Scalar mean(const System& sys, const ObservableExpr& f) {
  Scalar total(0);
  for (const auto& a : f.terms()) total += a.coef * sys.measure(a.event);
  return total;
}

// ---------------------------------------------------------------- strip averages

namespace {

// Cesàro rows of a non-negative per-point term over Λ_k, k = 1..kmax. Column
// sums are computed independently (possibly in parallel) and combined in
// order, so the exact result does not depend on the schedule.
ConvergenceReport strip_average(std::string quantity, const StripSpec& strip, std::int64_t kmax,
                                const std::function<Scalar(const LatticePoint&)>& term) {
  if (kmax < 1) throw InvalidArgument("kmax must be >= 1");
  if (strip.q() != 2) throw InvalidArgument("model systems act on Z^2; strip must be planar");
  std::vector<Scalar> column_sum(kmax);
  std::vector<std::int64_t> column_count(kmax);
  parallel_for(static_cast<std::size_t>(kmax), [&](std::size_t m) {
    Scalar s(0);
    const auto points = strip_column(strip, static_cast<std::int64_t>(m));
    for (const auto& w : points) s += term(w);
    column_sum[m] = std::move(s);
    column_count[m] = static_cast<std::int64_t>(points.size());
  });
  ConvergenceReport report(std::move(quantity));
  report.meta()["strip"] = strip.to_string();
  Scalar total(0);
  std::int64_t count = 0;
  std::int64_t skipped = 0;
  for (std::int64_t k = 1; k <= kmax; ++k) {
    total += column_sum[k - 1];
    count += column_count[k - 1];
    if (count == 0) {
      ++skipped;
      continue;
    }
    report.add_row(k, total / Scalar(count));
  }
  report.meta()["rows_skipped_empty_strip"] = skipped;
  return report;
}

std::string event_string(const System& sys, const EventExpr& e) {
  if (e.is_empty()) return "{}";
  std::string out;
  for (const auto& c : e.atoms()) out += (out.empty() ? "" : " | ") + sys.format_cylinder(c);
  return out;
}

nlohmann::json observable_json(const System& sys, const ObservableExpr& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : f.terms()) {
    out.push_back({{"coef", t.coef.to_string()}, {"event", event_string(sys, t.event)}});
  }
  return out;
}

}  // namespace

ConvergenceReport correlation_average(const System& sys, const EventExpr& B, const EventExpr& C,
                                      const StripSpec& strip, std::int64_t kmax) {
  sys.validate(B);
  sys.validate(C);
  const Scalar product = sys.measure(B) * sys.measure(C);
  auto report = strip_average("correlation_average", strip, kmax, [&](const LatticePoint& w) {
    return (sys.joint_measure(B, w, C) - product).abs();
  });
  report.meta()["system"] = sys.to_string();
  report.meta()["B"] = event_string(sys, B);
  report.meta()["C"] = event_string(sys, C);
  return report;
}

ConvergenceReport observable_correlation_average(const System& sys, const ObservableExpr& f,
                                                 const ObservableExpr& g, const StripSpec& strip,
                                                 std::int64_t kmax) {
  const Scalar product = mean(sys, f) * mean(sys, g);
  auto report =
      strip_average("observable_correlation_average", strip, kmax, [&](const LatticePoint& w) {
        return (translated_inner(sys, f, w, g) - product).abs();
      });
  report.meta()["system"] = sys.to_string();
  report.meta()["f"] = observable_json(sys, f);
  report.meta()["g"] = observable_json(sys, g);
  return report;
}

ConvergenceReport wm_average(const System& sys, const ObservableExpr& f, const ObservableExpr& g,
                             const StripSpec& strip, std::int64_t kmax) {
  auto report = strip_average("wm_average", strip, kmax, [&](const LatticePoint& w) {
    return translated_inner(sys, f, w, g).abs();
  });
  report.meta()["system"] = sys.to_string();
  report.meta()["f"] = observable_json(sys, f);
  report.meta()["g"] = observable_json(sys, g);
  return report;
}

// ---------------------------------------------------------------- density-one sets

DensityOneSet::DensityOneSet(StripSpec strip, std::int64_t horizon,
                             std::vector<Threshold> thresholds, std::vector<LatticePoint> excluded)
    : strip_(std::move(strip)),
      horizon_(horizon),
      thresholds_(std::move(thresholds)),
      excluded_(std::move(excluded)) {
  std::sort(excluded_.begin(), excluded_.end());
}

bool DensityOneSet::contains(const LatticePoint& w) const {
  if (w.dim() != strip_.q() || w[0] < 0 || w[0] >= horizon_) return false;
  if (!strip_contains(strip_, w)) return false;
  return !std::binary_search(excluded_.begin(), excluded_.end(), w);
}

std::vector<LatticePoint> DensityOneSet::members(std::int64_t k) const {
  std::vector<LatticePoint> out;
  for (const auto& w : enumerate_strip(strip_, std::min(k, horizon_))) {
    if (!std::binary_search(excluded_.begin(), excluded_.end(), w)) out.push_back(w);
  }
  return out;
}

DensityOneSet extract_density_one_set(const System& sys, const EventExpr& B, const EventExpr& C,
                                      const StripSpec& strip, std::int64_t pmax,
                                      std::int64_t horizon) {
  if (pmax < 1) throw InvalidArgument("pmax must be >= 1");
  if (horizon < 2) throw InvalidArgument("horizon must be >= 2");
  sys.validate(B);
  sys.validate(C);
  const Scalar product = sys.measure(B) * sys.measure(C);

  struct Entry {
    LatticePoint w;
    Scalar deviation;
  };
  std::vector<std::vector<Entry>> columns(horizon);
  parallel_for(static_cast<std::size_t>(horizon), [&](std::size_t m) {
    for (auto& w : strip_column(strip, static_cast<std::int64_t>(m))) {
      Scalar dev = (sys.joint_measure(B, w, C) - product).abs();
      columns[m].push_back(Entry{std::move(w), std::move(dev)});
    }
  });

  // total[k] = #Λ_k
  std::vector<std::int64_t> total(horizon + 1, 0);
  for (std::int64_t k = 1; k <= horizon; ++k) {
    total[k] = total[k - 1] + static_cast<std::int64_t>(columns[k - 1].size());
  }
  auto in_A = [](const Scalar& dev, std::int64_t p) { return dev * Scalar(p) >= Scalar(1); };

  std::vector<DensityOneSet::Threshold> thresholds;
  std::int64_t l = 1;
  for (std::int64_t p = 1; p <= pmax; ++p) {
    std::vector<std::int64_t> bad(horizon + 1, 0);
    for (std::int64_t k = 1; k <= horizon; ++k) {
      bad[k] = bad[k - 1];
      for (const auto& e : columns[k - 1]) bad[k] += in_A(e.deviation, p) ? 1 : 0;
    }
    auto certified = [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t k = lo; k <= hi; ++k) {
        if (total[k] == 0 || bad[k] * (p + 1) >= total[k]) return false;
      }
      return true;
    };
    while (true) {
      if (2 * l > horizon) {
        throw SearchExhausted("density-one extraction: cannot certify p=" + std::to_string(p) +
                              " below horizon " + std::to_string(horizon) +
                              "; largest certified p=" + std::to_string(p - 1));
      }
      if (certified(l, 2 * l)) break;
      l *= 2;
    }
    thresholds.push_back({p, l, 2 * l});
  }

  std::vector<LatticePoint> excluded;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const std::int64_t p = thresholds[i].p;
    const std::int64_t lo = thresholds[i].l;
    const std::int64_t hi = i + 1 < thresholds.size() ? thresholds[i + 1].l - 1 : horizon - 1;
    for (std::int64_t m = lo; m <= hi; ++m) {
      for (const auto& e : columns[m]) {
        if (in_A(e.deviation, p)) excluded.push_back(e.w);
      }
    }
  }
  return DensityOneSet(strip, horizon, std::move(thresholds), std::move(excluded));
}

// ---------------------------------------------------------------- mean ergodic

ConvergenceReport mean_ergodic_norm(const System& sys, const EventExpr& B, const SequencePlan& plan,
                                    std::int64_t Nmax) {
  if (Nmax < 1 || static_cast<std::size_t>(Nmax) > plan.size()) {
    throw InvalidArgument("mean_ergodic_norm needs 1 <= Nmax <= plan length");
  }
  sys.validate(B);
  const Scalar mu = sys.measure(B);
  const auto& w = plan.points();
  ConvergenceReport report("mean_ergodic_norm");
  report.meta()["system"] = sys.to_string();
  report.meta()["strip"] = plan.strip().to_string();
  report.meta()["B"] = event_string(sys, B);
  Scalar pair_sum(0);
  for (std::int64_t n = 1; n <= Nmax; ++n) {
    const std::size_t last = static_cast<std::size_t>(n - 1);
    for (std::size_t i = 0; i < last; ++i) {
      pair_sum += Scalar(2) * sys.joint_measure(B, w[i] - w[last], B);
    }
    pair_sum += sys.joint_measure(B, LatticePoint::zero(2), B);
    report.add_row(n, pair_sum / Scalar(n * n) - mu * mu);
  }
  return report;
}

// ---------------------------------------------------------------- Kronecker / KvN

namespace {

bool is_diagonal(const DirectionVector& v, int sign) {
  return v.q() == 2 && v.beta(2) == Scalar(sign);
}

ObservableExpr tensor(const ObservableExpr& left, const ObservableExpr& right) {
  ObservableExpr out;
  for (const auto& a : left.terms()) {
    for (const auto& b : right.terms()) out.add(a.coef * b.coef, product_event(a.event, b.event));
  }
  return out;
}

// Keeps the constraints of `c` whose key starts with `side`.
Cylinder side_of(const Cylinder& c, std::int64_t side) {
  Cylinder::Map m;
  for (const auto& [key, con] : c.constraints()) {
    if (key[0] == side) m.emplace(key, con);
  }
  return Cylinder(std::move(m));
}

ObservableExpr conditional_on_kronecker(const System& sys, const Cylinder& atom,
                                        const DirectionVector& v) {
  switch (sys.kind()) {
    case SystemKind::kBernoulli2D:
      return ObservableExpr::constant(sys.measure(atom));
    case SystemKind::kRotation2D:
      return ObservableExpr::indicator(EventExpr(atom));
    case SystemKind::kCounterexample: {
      // v=(1,-1) keeps the right factor fixed, v=(1,1) the left one.
      std::int64_t kept;
      if (is_diagonal(v, -1)) {
        kept = 1;
      } else if (is_diagonal(v, 1)) {
        kept = 0;
      } else {
        break;
      }
      return ObservableExpr::indicator(EventExpr(side_of(atom, kept)),
                                       sys.measure(side_of(atom, 1 - kept)));
    }
    case SystemKind::kProduct: {
      const ObservableExpr l = conditional_on_kronecker(sys.left(), factor_cylinder(atom, 0), v);
      const ObservableExpr r = conditional_on_kronecker(sys.right(), factor_cylinder(atom, 1), v);
      return tensor(l, r);
    }
  }
  throw UnsupportedKronecker("Kronecker algebra not analytically available for " + sys.to_string() +
                             " along " + v.to_string());
}

}  // namespace

KvnParts kvn_decompose(const System& sys, const ObservableExpr& f, const DirectionVector& direction) {
  if (direction.q() != 2) throw InvalidArgument("model systems act on Z^2");
  conditional_on_kronecker(sys, Cylinder(), direction);  // rejects unsupported pairs up front
  KvnParts parts;
  for (const auto& t : f.terms()) {
    sys.validate(t.event);
    for (const auto& atom : t.event.atoms()) {
      ObservableExpr e = conditional_on_kronecker(sys, atom, direction);
      e *= t.coef;
      parts.kronecker_part += e;
    }
  }
  parts.wm_part = f - parts.kronecker_part;
  return parts;
}

}  // namespace dirmix
