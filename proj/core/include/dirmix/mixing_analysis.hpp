#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dirmix/lattice.hpp"
#include "dirmix/partition_entropy.hpp"
#include "dirmix/report.hpp"
#include "dirmix/systems.hpp"

namespace dirmix {

/// A finite linear combination sum_i c_i 1_{E_i}.
class ObservableExpr {
 public:
  struct Term {
    Scalar coef;
    EventExpr event;
  };

  ObservableExpr() = default;
  static ObservableExpr indicator(EventExpr e, Scalar coef = Scalar(1));
  static ObservableExpr constant(Scalar c);

  ObservableExpr& add(Scalar coef, EventExpr e);
  ObservableExpr& operator+=(const ObservableExpr& o);
  ObservableExpr& operator*=(const Scalar& s);
  friend ObservableExpr operator+(ObservableExpr a, const ObservableExpr& b) { return a += b; }
  friend ObservableExpr operator-(ObservableExpr a, ObservableExpr b) { return a += (b *= Scalar(-1)); }
  friend ObservableExpr operator*(Scalar s, ObservableExpr f) { return f *= s; }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
};

/// <f, g>.
Scalar inner(const System& sys, const ObservableExpr& f, const ObservableExpr& g);
/// <f o T^w, g> = sum c_i d_j mu(T^{-w} E_i ∩ F_j).
Scalar translated_inner(const System& sys, const ObservableExpr& f, const LatticePoint& w,
                        const ObservableExpr& g);
/// <f, 1>.
Scalar mean(const System& sys, const ObservableExpr& f);

/// Rows (k, (1/#Λ_k) sum_{w in Λ_k} |mu(T^{-w}B ∩ C) - mu(B) mu(C)|), k = 1..kmax,
/// every row exact.
ConvergenceReport correlation_average(const System& sys, const EventExpr& B, const EventExpr& C,
                                      const StripSpec& strip, std::int64_t kmax);

/// As correlation_average with |<f o T^w, g> - <f,1><1,g>|.
ConvergenceReport observable_correlation_average(const System& sys, const ObservableExpr& f,
                                                 const ObservableExpr& g, const StripSpec& strip,
                                                 std::int64_t kmax);

/// Rows (k, (1/#Λ_k) sum_{w in Λ_k} |<f o T^w, g>|).
ConvergenceReport wm_average(const System& sys, const ObservableExpr& f, const ObservableExpr& g,
                             const StripSpec& strip, std::int64_t kmax);

/// Density-one subset Q of the strip, certified up to a finite horizon.
///
/// A^p = {w : |mu(T^{-w}B ∩ C) - mu(B)mu(C)| >= 1/p}. Threshold l_p is
/// certified when #(A^p ∩ Λ_k)/#Λ_k < 1/(p+1) for every k in [l_p, 2 l_p].
/// The excluded set is A = ∪_p A^p ∩ ([l_p, l_{p+1} - 1] x Z), so every point
/// of Q with first coordinate in [l_p, l_{p+1} - 1] deviates by less than 1/p.
class DensityOneSet {
 public:
  struct Threshold {
    std::int64_t p = 0;
    std::int64_t l = 0;
    /// Largest k at which the certificate was checked (2 l_p, capped).
    std::int64_t certified_to = 0;
  };

  DensityOneSet(StripSpec strip, std::int64_t horizon, std::vector<Threshold> thresholds,
                std::vector<LatticePoint> excluded);

  const StripSpec& strip() const { return strip_; }
  std::int64_t horizon() const { return horizon_; }
  const std::vector<Threshold>& thresholds() const { return thresholds_; }
  /// Points of A with first coordinate below the horizon, sorted.
  const std::vector<LatticePoint>& excluded() const { return excluded_; }
  /// Membership in Q (strip points not in A); first coordinate < horizon.
  bool contains(const LatticePoint& w) const;
  /// Points of Q with first coordinate in [0, k-1].
  std::vector<LatticePoint> members(std::int64_t k) const;

 private:
  StripSpec strip_;
  std::int64_t horizon_;
  std::vector<Threshold> thresholds_;
  std::vector<LatticePoint> excluded_;
};

/// Throws SearchExhausted naming the largest certified p when some p <= pmax
/// cannot be certified below the horizon.
DensityOneSet extract_density_one_set(const System& sys, const EventExpr& B, const EventExpr& C,
                                      const StripSpec& strip, std::int64_t pmax,
                                      std::int64_t horizon);

/// Rows (N, (1/N^2) sum_{i,j<N} mu(T^{-(w_i - w_j)}B ∩ B) - mu(B)^2), the
/// squared L2 distance between the ergodic average of 1_B along the plan
/// and mu(B).
ConvergenceReport mean_ergodic_norm(const System& sys, const EventExpr& B, const SequencePlan& plan,
                                    std::int64_t Nmax);

struct KvnParts {
  ObservableExpr kronecker_part;
  ObservableExpr wm_part;
};

/// f = E(f | K^v) + (f - E(f | K^v)) for systems whose directional Kronecker
/// algebra is known in closed form:
///   Bernoulli2D, any v:           trivial algebra, E(f|K) = <f,1>
///   Rotation2D, any v:            full algebra, E(f|K) = f
///   Counterexample, v = (1,-1):   algebra of sets X x B (left factor averaged out)
///   Counterexample, v = (1,1):    algebra of sets A x X (right factor averaged out)
///   Product of supported systems: conditional expectations multiply on rectangles
/// Anything else throws UnsupportedKronecker.
KvnParts kvn_decompose(const System& sys, const ObservableExpr& f, const DirectionVector& direction);

}  // namespace dirmix
