#pragma once

// Test-only oracles and generators. Nothing here calls the library routine
// it is used to check.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dirmix/lattice.hpp"
#include "dirmix/systems.hpp"

namespace dirmix::oracle {

/// Canonical n/d.
inline Rational q(long n, long d = 1) {
  Rational r(n);
  r /= d;
  return r;
}

/// |n - (p/q) m| <= (r/s)/2 with integers only: |2 s (q n - p m)| <= r q, q, s > 0.
inline bool rational_strip_contains(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s,
                                    std::int64_t m, std::int64_t n) {
  const __int128 lhs = static_cast<__int128>(2) * s *
                       (static_cast<__int128>(q) * n - static_cast<__int128>(p) * m);
  const __int128 rhs = static_cast<__int128>(r) * q;
  return (lhs < 0 ? -lhs : lhs) <= rhs;
}

/// Brute-force strip of slope p/q, width r/s over [0,k-1] x [-tall, tall].
inline std::vector<LatticePoint> brute_strip(std::int64_t p, std::int64_t q, std::int64_t r,
                                             std::int64_t s, std::int64_t k, std::int64_t tall) {
  std::vector<LatticePoint> out;
  for (std::int64_t m = 0; m < k; ++m) {
    for (std::int64_t n = -tall; n <= tall; ++n) {
      if (rational_strip_contains(p, q, r, s, m, n)) out.push_back(LatticePoint{m, n});
    }
  }
  return out;
}

/// sign(p + r sqrt(d)) evaluated with 512-bit floats.
inline int float_sign(const Rational& p, const Rational& r, std::int64_t d) {
  mpf_class x(0, 512);
  mpf_class root(0, 512);
  mpf_class dd(static_cast<double>(d), 512);
  mpf_sqrt(root.get_mpf_t(), dd.get_mpf_t());
  x = mpf_class(p, 512) + mpf_class(r, 512) * root;
  return sgn(x);
}

/// Exact measure of a symbolic event by enumerating every joint assignment
/// of the coordinates it mentions. Valid for systems whose coordinates are
/// i.i.d. with the given weights (Bernoulli2D, Counterexample).
inline Rational enumerate_measure(const EventExpr& e, const std::vector<Rational>& weights) {
  std::set<CoordKey> keys;
  for (const auto& atom : e.atoms()) {
    for (const auto& [k, c] : atom.constraints()) keys.insert(k);
  }
  const std::vector<CoordKey> coords(keys.begin(), keys.end());
  const std::size_t a = weights.size();
  std::vector<std::size_t> assign(coords.size(), 0);
  Rational total = 0;
  while (true) {
    bool member = false;
    for (const auto& atom : e.atoms()) {
      bool ok = true;
      for (const auto& [k, c] : atom.constraints()) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(coords.begin(), coords.end(), k) - coords.begin());
        if (static_cast<int>(assign[idx]) != std::get<int>(c)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        member = true;
        break;
      }
    }
    if (member) {
      Rational prob = 1;
      for (std::size_t i = 0; i < coords.size(); ++i) prob *= weights[assign[i]];
      total += prob;
    }
    std::size_t i = 0;
    while (i < coords.size() && ++assign[i] == a) assign[i++] = 0;
    if (i == coords.size()) break;
  }
  return total;
}

/// Random weights over `a` symbols summing to 1.
inline std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t a) {
  std::uniform_int_distribution<int> d(1, 5);
  std::vector<int> raw(a);
  int sum = 0;
  for (auto& r : raw) sum += (r = d(rng));
  std::vector<Rational> out;
  for (int r : raw) {
    Rational q(r, sum);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// A random Bernoulli2D cylinder with up to `max_c` constraints in a small box.
inline Cylinder random_bernoulli_cylinder(std::mt19937_64& rng, int symbols, int max_c = 3,
                                          std::int64_t box = 3) {
  Cylinder::Map m;
  const auto n = uniform(rng, 0, max_c);
  for (std::int64_t i = 0; i < n; ++i) {
    m[CoordKey{uniform(rng, -box, box), uniform(rng, -box, box)}] =
        static_cast<int>(uniform(rng, 0, symbols - 1));
  }
  return Cylinder(std::move(m));
}

/// A random Counterexample cylinder with up to `max_c` constraints.
inline Cylinder random_counterexample_cylinder(std::mt19937_64& rng, int symbols, int max_c = 3,
                                               std::int64_t box = 3) {
  Cylinder::Map m;
  const auto n = uniform(rng, 0, max_c);
  for (std::int64_t i = 0; i < n; ++i) {
    m[CoordKey{uniform(rng, 0, 1), uniform(rng, -box, box)}] =
        static_cast<int>(uniform(rng, 0, symbols - 1));
  }
  return Cylinder(std::move(m));
}

/// Disjoint union of random cylinders: each new cylinder is kept only when it
/// conflicts with every one kept so far.
inline EventExpr random_event(std::mt19937_64& rng, bool counterexample, int symbols,
                              int max_atoms = 3) {
  std::vector<Cylinder> kept;
  const auto n = uniform(rng, 1, max_atoms);
  for (std::int64_t i = 0; i < n * 4 && static_cast<std::int64_t>(kept.size()) < n; ++i) {
    Cylinder c = counterexample ? random_counterexample_cylinder(rng, symbols)
                                : random_bernoulli_cylinder(rng, symbols);
    bool ok = true;
    for (const auto& k : kept) {
      bool conflict = false;
      for (const auto& [key, val] : c.constraints()) {
        auto it = k.constraints().find(key);
        if (it != k.constraints().end() && it->second != val) conflict = true;
      }
      if (!conflict) ok = false;
    }
    if (ok) kept.push_back(std::move(c));
  }
  return EventExpr::disjoint_union(std::move(kept));
}

/// Shifts every constraint key of a Counterexample cylinder: left by `l`,
/// right by `r`.
inline Cylinder shift_sides(const Cylinder& c, std::int64_t l, std::int64_t r) {
  Cylinder::Map m;
  for (const auto& [k, v] : c.constraints()) m[CoordKey{k[0], k[1] + (k[0] == 0 ? l : r)}] = v;
  return Cylinder(std::move(m));
}

inline Cylinder shift_bernoulli(const Cylinder& c, const LatticePoint& w) {
  Cylinder::Map m;
  for (const auto& [k, v] : c.constraints()) m[CoordKey{k[0] + w[0], k[1] + w[1]}] = v;
  return Cylinder(std::move(m));
}

// T^{-w} of an event, computed from the coordinate rules directly.
inline EventExpr translate(bool is_cex, const EventExpr& e, const LatticePoint& w) {
  std::vector<Cylinder> out;
  for (const auto& a : e.atoms()) {
    out.push_back(is_cex ? shift_sides(a, w[0] - w[1], w[0] + w[1]) : shift_bernoulli(a, w));
  }
  return EventExpr::from_disjoint_atoms(std::move(out));
}

inline Rational joint(bool is_cex, const std::vector<Rational>& wts, const EventExpr& b,
                      const LatticePoint& w, const EventExpr& c) {
  return enumerate_measure(intersect(translate(is_cex, b, w), c), wts);
}

// sum over the strip of |mu(T^{-w}B ∩ C) - mu(B)mu(C)| / #Λ_k, term by term.
inline Rational correlation(bool is_cex, const std::vector<Rational>& wts, const EventExpr& b,
                            const EventExpr& c, const StripSpec& strip, std::int64_t k) {
  const Rational prod = enumerate_measure(b, wts) * enumerate_measure(c, wts);
  Rational sum = 0;
  const auto pts = enumerate_strip(strip, k);
  for (const auto& w : pts) sum += abs(joint(is_cex, wts, b, w, c) - prod);
  return sum / static_cast<long>(pts.size());
}

// ∫ |(1/N) sum_i 1_{T^{-w_i}B} - mu(B)|^2 by enumerating every assignment of
// the coordinates the translated copies touch.
inline Rational mean_norm(bool is_cex, const std::vector<Rational>& wts, const EventExpr& b,
                          const std::vector<LatticePoint>& plan) {
  std::vector<EventExpr> copies;
  std::set<CoordKey> keys;
  for (const auto& w : plan) {
    copies.push_back(translate(is_cex, b, w));
    for (const auto& a : copies.back().atoms()) {
      for (const auto& [k, v] : a.constraints()) keys.insert(k);
    }
  }
  const std::vector<CoordKey> coords(keys.begin(), keys.end());
  const Rational mu = enumerate_measure(b, wts);
  const long n = static_cast<long>(plan.size());
  std::vector<std::size_t> assign(coords.size(), 0);
  Rational total = 0;
  while (true) {
    Rational prob = 1;
    for (std::size_t i = 0; i < coords.size(); ++i) prob *= wts[assign[i]];
    long hits = 0;
    for (const auto& e : copies) {
      for (const auto& a : e.atoms()) {
        bool ok = true;
        for (const auto& [k, v] : a.constraints()) {
          const auto idx = std::lower_bound(coords.begin(), coords.end(), k) - coords.begin();
          if (static_cast<int>(assign[static_cast<std::size_t>(idx)]) != std::get<int>(v)) ok = false;
        }
        if (ok) {
          ++hits;
          break;
        }
      }
    }
    const Rational dev = Rational(hits) / n - mu;
    total += prob * dev * dev;
    std::size_t i = 0;
    while (i < coords.size() && ++assign[i] == wts.size()) assign[i++] = 0;
    if (i == coords.size()) break;
  }
  return total;
}

inline EventExpr merge(const EventExpr& a, const EventExpr& b) {
  std::vector<Cylinder> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return EventExpr::from_disjoint_atoms(std::move(atoms));
}

// Random r-atom partition built from the 2^2 configurations of sites
// (0,0) and (0,1); each label receives at least one configuration.
inline std::vector<EventExpr> random_labelled_partition(std::mt19937_64& rng, const System& s, int r) {
  std::vector<int> label{0, 1, 2, 3};
  for (int i = r; i < 4; ++i) label[i] = static_cast<int>(uniform(rng, 0, r - 1));
  std::shuffle(label.begin(), label.end(), rng);
  std::vector<EventExpr> atoms(r);
  for (int cfg = 0; cfg < 4; ++cfg) {
    const EventExpr piece = s.parse_event({"(0,0)=" + std::to_string(cfg & 1),
                                            "(0,1)=" + std::to_string(cfg >> 1)});
    atoms[label[cfg]] = merge(atoms[label[cfg]], piece);
  }
  return atoms;
}

}  // namespace dirmix::oracle
