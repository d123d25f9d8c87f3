#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirmix/scalar.hpp"

namespace dirmix {

/// A point of Z^q.
struct LatticePoint {
  std::vector<std::int64_t> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  LatticePoint(std::initializer_list<std::int64_t> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  std::int64_t operator[](std::size_t i) const { return coords[i]; }
  std::int64_t& operator[](std::size_t i) { return coords[i]; }

  LatticePoint& operator+=(const LatticePoint& o);
  LatticePoint& operator-=(const LatticePoint& o);
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  LatticePoint operator-() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint& a, const LatticePoint& b) {
    return a.coords <=> b.coords;
  }

  std::string to_string() const;
  static LatticePoint zero(std::size_t q) { return LatticePoint(std::vector<std::int64_t>(q, 0)); }
};

/// v = (1, beta_2, ..., beta_q); the leading 1 is implicit.
class DirectionVector {
 public:
  explicit DirectionVector(std::vector<Scalar> betas);
  DirectionVector(std::initializer_list<Scalar> betas)
      : DirectionVector(std::vector<Scalar>(betas)) {}

  std::size_t q() const { return betas_.size() + 1; }
  const std::vector<Scalar>& betas() const { return betas_; }
  /// axis is the coordinate number, 2..q.
  const Scalar& beta(std::size_t axis) const { return betas_.at(axis - 2); }

  friend bool operator==(const DirectionVector&, const DirectionVector&) = default;
  std::string to_string() const;

 private:
  std::vector<Scalar> betas_;
};

/// The strip Λ^v(b): points w with beta_i w_1 - b_i/2 <= w_i <= beta_i w_1 + b_i/2
/// for every axis i >= 2 (bounds inclusive).
class StripSpec {
 public:
  StripSpec(DirectionVector direction, std::vector<Scalar> widths);

  const DirectionVector& direction() const { return direction_; }
  const std::vector<Scalar>& widths() const { return widths_; }
  const Scalar& width(std::size_t axis) const { return widths_.at(axis - 2); }
  std::size_t q() const { return direction_.q(); }
  std::string to_string() const;

 private:
  DirectionVector direction_;
  std::vector<Scalar> widths_;
};

/// Inclusive integer interval; empty when lo > hi.
struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return lo > hi; }
  std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
};

bool strip_contains(const StripSpec& spec, const LatticePoint& p);

/// Admissible coordinates on `axis` (1-based, >= 2) above first coordinate m1.
IntRange column_range(const StripSpec& spec, std::size_t axis, std::int64_t m1);

/// Strip points with first coordinate m1, lexicographically sorted.
std::vector<LatticePoint> strip_column(const StripSpec& spec, std::int64_t m1);

/// Λ_k^v(b): strip points with first coordinate in [0, k-1], sorted.
std::vector<LatticePoint> enumerate_strip(const StripSpec& spec, std::int64_t k);

/// Number of points in the column above m1, without materializing them.
Integer column_cardinality(const StripSpec& spec, std::int64_t m1);
Integer strip_cardinality(const StripSpec& spec, std::int64_t k);
Rational strip_density(const StripSpec& spec, std::int64_t k);

/// Fraction of Λ_k^v(b) covered by `points` (those with first coordinate in
/// [0, k-1]). Every point must lie in the strip.
Rational relative_density(std::span<const LatticePoint> points, const StripSpec& spec,
                          std::int64_t k);

struct SumsetResult {
  bool covers = false;
  /// Summand first coordinates were searched in [-search_bound, search_bound].
  std::int64_t search_bound = 0;
  /// First window point found not to be a sum, if any.
  std::optional<LatticePoint> uncovered;
};

/// Decides whether every point of [-window, window]^2 is p1 + p2 with p1 in
/// specV's strip and p2 in specW's strip. Planar strips only.
SumsetResult sumset_covers_window(const StripSpec& specV, const StripSpec& specW,
                                  std::int64_t window);

}  // namespace dirmix
