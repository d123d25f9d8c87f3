#include "dirmix/partition_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dirmix/errors.hpp"

namespace dirmix {
namespace {

long double entropy_nats(const Partition& alpha) {
  long double h = 0.0L;
  for (const auto& atom : alpha.atoms()) {
    const long double p = atom.measure.to_long_double();
    if (p > 0.0L) h -= p * std::log(p);
  }
  return h;
}

double in_base(long double nats, LogBase base) {
  return static_cast<double>(base == LogBase::kBits ? nats / std::log(2.0L) : nats);
}

std::string plan_string(const std::vector<LatticePoint>& points) {
  std::string out;
  for (const auto& p : points) out += p.to_string();
  return out.empty() ? "(empty)" : out;
}

}  // namespace

Partition Partition::make(const System& sys, std::vector<EventExpr> atoms) {
  std::vector<const Cylinder*> cylinders;
  for (const auto& e : atoms) {
    sys.validate(e);
    for (const auto& c : e.atoms()) cylinders.push_back(&c);
  }
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    for (std::size_t j = i + 1; j < cylinders.size(); ++j) {
      if (!Cylinder::disjoint(*cylinders[i], *cylinders[j])) {
        throw InvalidArgument("partition atoms overlap: " + sys.format_cylinder(*cylinders[i]) +
                              " and " + sys.format_cylinder(*cylinders[j]));
      }
    }
  }
  Partition out;
  Scalar total(0);
  for (auto& e : atoms) {
    Scalar m = sys.measure(e);
    total += m;
    if (!m.is_zero()) out.atoms_.push_back(Atom{std::move(e), std::move(m)});
  }
  if (!(total == Scalar(1))) {
    throw InvalidArgument("partition atoms have total measure " + total.to_string() + ", not 1");
  }
  return out;
}

Partition Partition::trivial() {
  Partition out;
  out.atoms_.push_back(Atom{EventExpr::whole(), Scalar(1)});
  return out;
}

Partition Partition::binary(const System& sys, const EventExpr& e) {
  return make(sys, {e, sys.complement(e)});
}

Partition Partition::from_atoms(std::vector<Atom> atoms) {
  Partition out;
  for (auto& a : atoms) {
    if (!a.measure.is_zero()) out.atoms_.push_back(std::move(a));
  }
  return out;
}

Partition translate(const System& sys, const Partition& alpha, const LatticePoint& w) {
  std::vector<Partition::Atom> atoms;
  atoms.reserve(alpha.size());
  for (const auto& a : alpha.atoms()) atoms.push_back({sys.translate(a.event, w), a.measure});
  return Partition::from_atoms(std::move(atoms));
}

double shannon_entropy(const Partition& alpha, LogBase base) {
  return in_base(entropy_nats(alpha), base);
}

double shannon_entropy(const System& sys, const Partition& alpha, LogBase base) {
  for (const auto& a : alpha.atoms()) sys.validate(a.event);
  return shannon_entropy(alpha, base);
}

Partition join(const System& sys, const Partition& a, const Partition& b, JoinOptions options) {
  std::vector<Partition::Atom> atoms;
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) {
      EventExpr e = intersect(x.event, y.event);
      if (e.is_empty()) continue;
      Scalar m = sys.measure(e);
      if (m.is_zero()) continue;
      atoms.push_back({std::move(e), std::move(m)});
      if (atoms.size() > options.atom_cap) {
        throw CapExceeded("join exceeds the atom cap of " + std::to_string(options.atom_cap) +
                          " atoms; use a smaller k or raise atom_cap");
      }
    }
  }
  return Partition::from_atoms(std::move(atoms));
}

Partition join(const System& sys, std::span<const Partition> alphas, JoinOptions options) {
  Partition out = Partition::trivial();
  for (const auto& a : alphas) out = join(sys, out, a, options);
  return out;
}

double conditional_entropy(const System& sys, const Partition& alpha, const Partition& eta,
                           LogBase base, JoinOptions options) {
  const Partition both = join(sys, alpha, eta, options);
  return in_base(entropy_nats(both) - entropy_nats(eta), base);
}

SequencePlan::SequencePlan(std::vector<LatticePoint> points, StripSpec strip)
    : points_(std::move(points)), strip_(std::move(strip)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!strip_contains(strip_, points_[i])) {
      throw InvalidArgument("plan point " + points_[i].to_string() + " lies outside " +
                            strip_.to_string());
    }
    if (i > 0 && points_[i][0] <= points_[i - 1][0]) {
      throw InvalidArgument("plan first coordinates must be strictly increasing at index " +
                            std::to_string(i));
    }
  }
}

ConvergenceReport sequence_entropy_partial(const System& sys, const Partition& alpha,
                                           const SequencePlan& plan, std::int64_t kmax,
                                           const SequenceEntropyOptions& options) {
  if (kmax < 1 || static_cast<std::size_t>(kmax) > plan.size()) {
    throw InvalidArgument("sequence entropy needs 1 <= kmax <= plan length");
  }
  ConvergenceReport report("sequence_entropy_partial");
  report.meta()["system"] = sys.to_string();
  report.meta()["strip"] = plan.strip().to_string();
  report.meta()["log_base"] = options.base == LogBase::kBits ? "bits" : "nats";
  report.meta()["no_limit_claimed"] = true;
  report.meta()["envelope_window"] = options.envelope_window;

  std::vector<double> bits;
  std::vector<double> envelope;
  std::deque<double> window;
  Partition joined = Partition::trivial();
  for (std::int64_t k = 1; k <= kmax; ++k) {
    joined = join(sys, joined, translate(sys, alpha, plan.points()[k - 1]), options.join);
    const long double h = entropy_nats(joined) / static_cast<long double>(k);
    report.add_row(k, in_base(h, options.base));
    bits.push_back(in_base(h, LogBase::kBits));
    window.push_back(in_base(h, options.base));
    if (window.size() > std::max<std::size_t>(options.envelope_window, 1)) window.pop_front();
    envelope.push_back(*std::max_element(window.begin(), window.end()));
  }
  report.set_aux("value_bits", std::move(bits));
  report.set_aux("trailing_max", std::move(envelope));
  return report;
}

SequencePlan construct_full_entropy_sequence(const System& sys, std::span<const Partition> alphas,
                                             const StripSpec& strip, std::int64_t length,
                                             const FullSequenceOptions& options) {
  if (alphas.empty()) throw InvalidArgument("full-entropy construction needs a partition");
  if (length < 1) throw InvalidArgument("sequence length must be >= 1");
  auto tolerance = options.tolerance
                       ? options.tolerance
                       : [](std::int64_t j) { return std::ldexp(1.0, -static_cast<int>(j)); };

  std::vector<long double> base_entropy;
  for (const auto& a : alphas) base_entropy.push_back(entropy_nats(a));

  std::vector<LatticePoint> points;
  std::vector<Partition> joins(alphas.size(), Partition::trivial());
  std::int64_t next_m = 0;
  for (std::int64_t j = 1; j <= length; ++j) {
    const std::size_t checked = std::min<std::size_t>(static_cast<std::size_t>(j), alphas.size());
    const long double tol = tolerance(j);
    bool placed = false;
    for (std::int64_t m = next_m; m <= options.horizon && !placed; ++m) {
      for (const auto& w : strip_column(strip, m)) {
        std::vector<Partition> refined;
        bool admissible = true;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          refined.push_back(join(sys, joins[a], translate(sys, alphas[a], w), options.join));
          if (j >= 2 && a < checked) {
            const long double gain = entropy_nats(refined.back()) - entropy_nats(joins[a]);
            if (gain < base_entropy[a] - tol) {
              admissible = false;
              break;
            }
          }
        }
        if (!admissible) continue;
        joins = std::move(refined);
        points.push_back(w);
        next_m = m + 1;
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw SearchExhausted("no admissible strip point for step j=" + std::to_string(j) +
                            " with first coordinate <= " + std::to_string(options.horizon) +
                            "; partial plan " + plan_string(points));
    }
  }
  return SequencePlan(std::move(points), strip);
}

}  // namespace dirmix
