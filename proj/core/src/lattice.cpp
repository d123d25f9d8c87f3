#include "dirmix/lattice.hpp"

#include <algorithm>
#include <limits>

#include "dirmix/errors.hpp"

namespace dirmix {
namespace {

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw InvalidArgument("lattice coordinate overflows 64 bits");
  return z.get_si();
}

void check_dim(const StripSpec& spec, const LatticePoint& p) {
  if (p.dim() != spec.q()) {
    throw InvalidArgument("dimension mismatch: point " + p.to_string() + " in a strip of Z^" +
                          std::to_string(spec.q()));
  }
}

// Cartesian product of the per-axis ranges above m1, lexicographic.
void append_column(const StripSpec& spec, std::int64_t m1, std::vector<LatticePoint>& out) {
  const std::size_t q = spec.q();
  std::vector<IntRange> ranges;
  ranges.reserve(q - 1);
  for (std::size_t axis = 2; axis <= q; ++axis) {
    ranges.push_back(column_range(spec, axis, m1));
    if (ranges.back().empty()) return;
  }
  LatticePoint p = LatticePoint::zero(q);
  p[0] = m1;
  for (std::size_t i = 1; i < q; ++i) p[i] = ranges[i - 1].lo;
  while (true) {
    out.push_back(p);
    std::size_t i = q - 1;
    while (i >= 1 && p[i] == ranges[i - 1].hi) {
      p[i] = ranges[i - 1].lo;
      --i;
    }
    if (i == 0) return;
    ++p[i];
  }
}

}  // namespace

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  if (dim() != o.dim()) throw InvalidArgument("dimension mismatch in lattice addition");
  for (std::size_t i = 0; i < dim(); ++i) coords[i] += o.coords[i];
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& o) {
  if (dim() != o.dim()) throw InvalidArgument("dimension mismatch in lattice subtraction");
  for (std::size_t i = 0; i < dim(); ++i) coords[i] -= o.coords[i];
  return *this;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint out = *this;
  for (auto& c : out.coords) c = -c;
  return out;
}

std::string LatticePoint::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(coords[i]);
  }
  return out + ")";
}

DirectionVector::DirectionVector(std::vector<Scalar> betas) : betas_(std::move(betas)) {
  if (betas_.empty()) throw InvalidArgument("direction vector needs q >= 2");
}

std::string DirectionVector::to_string() const {
  std::string out = "(1";
  for (const auto& b : betas_) out += ", " + b.to_string();
  return out + ")";
}

StripSpec::StripSpec(DirectionVector direction, std::vector<Scalar> widths)
    : direction_(std::move(direction)), widths_(std::move(widths)) {
  if (widths_.size() != direction_.q() - 1) {
    throw InvalidArgument("strip needs " + std::to_string(direction_.q() - 1) +
                          " widths, got " + std::to_string(widths_.size()));
  }
  for (const auto& b : widths_) {
    if (b.sign() <= 0) throw InvalidArgument("strip width must be positive: " + b.to_string());
  }
}

std::string StripSpec::to_string() const {
  std::string out = "strip(v=" + direction_.to_string() + ", b=(";
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (i) out += ", ";
    out += widths_[i].to_string();
  }
  return out + "))";
}

IntRange column_range(const StripSpec& spec, std::size_t axis, std::int64_t m1) {
  const Scalar center = spec.direction().beta(axis) * Scalar(m1);
  const Scalar half = spec.width(axis) / Scalar(2);
  return IntRange{to_int64((center - half).ceil()), to_int64((center + half).floor())};
}

bool strip_contains(const StripSpec& spec, const LatticePoint& p) {
  check_dim(spec, p);
  for (std::size_t axis = 2; axis <= spec.q(); ++axis) {
    if (!column_range(spec, axis, p[0]).contains(p[axis - 1])) return false;
  }
  return true;
}

std::vector<LatticePoint> strip_column(const StripSpec& spec, std::int64_t m1) {
  std::vector<LatticePoint> out;
  append_column(spec, m1, out);
  return out;
}

std::vector<LatticePoint> enumerate_strip(const StripSpec& spec, std::int64_t k) {
  if (k < 1) throw InvalidArgument("enumerate_strip needs k >= 1");
  std::vector<LatticePoint> out;
  for (std::int64_t m = 0; m < k; ++m) append_column(spec, m, out);
  return out;
}

Integer column_cardinality(const StripSpec& spec, std::int64_t m1) {
  Integer count = 1;
  for (std::size_t axis = 2; axis <= spec.q(); ++axis) {
    count *= column_range(spec, axis, m1).size();
    if (count == 0) break;
  }
  return count;
}

Integer strip_cardinality(const StripSpec& spec, std::int64_t k) {
  if (k < 1) throw InvalidArgument("strip_cardinality needs k >= 1");
  Integer total = 0;
  for (std::int64_t m = 0; m < k; ++m) total += column_cardinality(spec, m);
  return total;
}

Rational strip_density(const StripSpec& spec, std::int64_t k) {
  Rational out(strip_cardinality(spec, k), Integer(k));
  out.canonicalize();
  return out;
}

Rational relative_density(std::span<const LatticePoint> points, const StripSpec& spec,
                          std::int64_t k) {
  const Integer total = strip_cardinality(spec, k);
  std::vector<LatticePoint> inside;
  for (const auto& p : points) {
    if (!strip_contains(spec, p)) {
      throw InvalidArgument("point " + p.to_string() + " lies outside " + spec.to_string());
    }
    if (p[0] >= 0 && p[0] < k) inside.push_back(p);
  }
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  Rational out(Integer(static_cast<long>(inside.size())), total);
  out.canonicalize();
  return out;
}

SumsetResult sumset_covers_window(const StripSpec& specV, const StripSpec& specW,
                                  std::int64_t window) {
  if (specV.q() != 2 || specW.q() != 2) throw InvalidArgument("sumset needs planar strips");
  if (window < 0) throw InvalidArgument("window must be non-negative");
  const Scalar& b1 = specV.direction().beta(2);
  const Scalar& b2 = specW.direction().beta(2);
  SumsetResult result;
  if (b1 == b2) return result;

  const Scalar ratio = Scalar(window) * (Scalar(2) + b1.abs() + b2.abs()) / (b1 - b2).abs();
  const std::int64_t bound = to_int64(ratio.ceil());
  result.search_bound = bound;

  // Column ranges for p1 = (m1, n1), m1 in [-bound, bound], and for
  // p2 = (x - m1, y - n1), whose first coordinate spans [-window-bound, window+bound].
  std::vector<IntRange> rangeV(2 * bound + 1);
  for (std::int64_t m = -bound; m <= bound; ++m) rangeV[m + bound] = column_range(specV, 2, m);
  const std::int64_t reachW = window + bound;
  std::vector<IntRange> rangeW(2 * reachW + 1);
  for (std::int64_t m = -reachW; m <= reachW; ++m) rangeW[m + reachW] = column_range(specW, 2, m);

  for (std::int64_t x = -window; x <= window; ++x) {
    for (std::int64_t y = -window; y <= window; ++y) {
      bool found = false;
      for (std::int64_t m1 = -bound; m1 <= bound && !found; ++m1) {
        const IntRange& v = rangeV[m1 + bound];
        const IntRange& w = rangeW[x - m1 + reachW];
        if (v.empty() || w.empty()) continue;
        // need n1 in v with y - n1 in w
        const std::int64_t lo = std::max(v.lo, y - w.hi);
        const std::int64_t hi = std::min(v.hi, y - w.lo);
        found = lo <= hi;
      }
      if (!found) {
        result.uncovered = LatticePoint{x, y};
        return result;
      }
    }
  }
  result.covers = true;
  return result;
}

}  // namespace dirmix
