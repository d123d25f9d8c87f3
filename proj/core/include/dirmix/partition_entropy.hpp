#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dirmix/lattice.hpp"
#include "dirmix/report.hpp"
#include "dirmix/systems.hpp"

namespace dirmix {

enum class LogBase { kNats, kBits };

/// A finite measurable partition of a model system, each atom carrying its
/// exact measure. Atoms of measure zero are never stored.
class Partition {
 public:
  struct Atom {
    EventExpr event;
    Scalar measure;
  };

  /// Validates pairwise disjointness and total measure 1; drops null atoms.
  static Partition make(const System& sys, std::vector<EventExpr> atoms);
  /// {X}.
  static Partition trivial();
  /// {e, X \ e}, null atoms dropped.
  static Partition binary(const System& sys, const EventExpr& e);
  /// Trusted construction from atoms already known to partition X.
  static Partition from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
};

/// T^{-w} alpha.
Partition translate(const System& sys, const Partition& alpha, const LatticePoint& w);

/// -sum mu(A) log mu(A), probabilities exact, 0 log 0 = 0.
double shannon_entropy(const Partition& alpha, LogBase base = LogBase::kNats);
double shannon_entropy(const System& sys, const Partition& alpha, LogBase base = LogBase::kNats);

struct JoinOptions {
  std::size_t atom_cap = std::size_t{1} << 20;
};

/// Common refinement. Throws CapExceeded when an intermediate refinement has
/// more than atom_cap atoms of positive measure.
Partition join(const System& sys, std::span<const Partition> alphas, JoinOptions options = {});
Partition join(const System& sys, const Partition& a, const Partition& b, JoinOptions options = {});

/// H(alpha | eta).
double conditional_entropy(const System& sys, const Partition& alpha, const Partition& eta,
                           LogBase base = LogBase::kNats, JoinOptions options = {});

/// Points of a strip with strictly increasing first coordinates.
class SequencePlan {
 public:
  SequencePlan(std::vector<LatticePoint> points, StripSpec strip);

  const std::vector<LatticePoint>& points() const { return points_; }
  const StripSpec& strip() const { return strip_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<LatticePoint> points_;
  StripSpec strip_;
};

struct SequenceEntropyOptions {
  LogBase base = LogBase::kNats;
  JoinOptions join;
  /// Trailing window of the running-maximum (limsup) diagnostic.
  std::size_t envelope_window = 8;
};

/// Rows (k, (1/k) H(join_{i<=k} T^{-w_i} alpha)) for k = 1..kmax. The sidecar
/// also carries the value in bits and the trailing running maximum; no limit
/// is claimed.
ConvergenceReport sequence_entropy_partial(const System& sys, const Partition& alpha,
                                           const SequencePlan& plan, std::int64_t kmax,
                                           const SequenceEntropyOptions& options = {});

struct FullSequenceOptions {
  /// Largest first coordinate the greedy search may use.
  std::int64_t horizon = 1000;
  /// Tolerance at step j; the default is 2^{-j}.
  std::function<double(std::int64_t)> tolerance;
  JoinOptions join;
};

/// Greedy construction of a strip sequence w_1, w_2, ... with
/// H(T^{-w_j} alpha | join_{i<j} T^{-w_i} alpha) >= H(alpha) - tol(j) for
/// every j >= 2 and each of the first min(j, #alphas) partitions. Among
/// admissible points the smallest first coordinate wins, then the smallest
/// remaining coordinates. Throws SearchExhausted when no admissible point
/// exists below the horizon.
SequencePlan construct_full_entropy_sequence(const System& sys, std::span<const Partition> alphas,
                                             const StripSpec& strip, std::int64_t length,
                                             const FullSequenceOptions& options = {});

}  // namespace dirmix
