#include "dirmix/suspension.hpp"

#include <algorithm>

#include "dirmix/errors.hpp"

namespace dirmix {
namespace {

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw InvalidArgument("suspension shift overflows 64 bits");
  return z.get_si();
}

// (arc shifted by `by`) ∩ [lo, hi), nullopt when empty.
std::optional<Arc> shifted_within(const Arc& arc, const Scalar& by, const Scalar& lo,
                                  const Scalar& hi) {
  Arc out{std::max(arc.lo + by, lo), std::min(arc.hi + by, hi)};
  if (out.lo >= out.hi) return std::nullopt;
  return out;
}

}  // namespace

SuspensionPoint suspension_flow(const SuspensionPoint& p, const Scalar& s, const Scalar& t) {
  if (p.shift.dim() != 2) throw InvalidArgument("suspension base must be a Z^2 system");
  const Scalar su = s + p.u;
  const Scalar tv = t + p.v;
  const Integer a = su.floor();
  const Integer b = tv.floor();
  SuspensionPoint out;
  out.shift = p.shift + LatticePoint{to_int64(a), to_int64(b)};
  out.u = su - Scalar(Rational(a));
  out.v = tv - Scalar(Rational(b));
  return out;
}

SuspensionPoint suspension_step(const SuspensionPoint& p, std::int64_t n, const Scalar& beta) {
  return suspension_flow(p, Scalar(n), Scalar(n) * beta);
}

Scalar rectangle_measure(const System& sys, const RectangleEvent& e) {
  return sys.measure(e.base) * e.u_arc.length() * e.v_arc.length();
}

Scalar arc_overlap(const Arc& a, const Arc& b) {
  const Scalar lo = std::max(a.lo, b.lo);
  const Scalar hi = std::min(a.hi, b.hi);
  return lo < hi ? hi - lo : Scalar(0);
}

std::vector<RectangleEvent> suspension_pullback(const System& sys, const RectangleEvent& e,
                                                std::int64_t n, const Scalar& beta) {
  sys.validate(e.base);
  const Scalar nb = Scalar(n) * beta;
  const std::int64_t whole = to_int64(nb.floor());
  const Scalar frac = nb - Scalar(whole);
  const Scalar cut = Scalar(1) - frac;

  // W^n moves u by the integer n (no split) and v by n beta: v + {n beta}
  // stays below 1 exactly when v < 1 - {n beta}.
  std::vector<RectangleEvent> out;
  if (auto low = shifted_within(e.v_arc, -frac, Scalar(0), cut)) {
    out.push_back({sys.translate(e.base, LatticePoint{n, whole}), e.u_arc, *low});
  }
  if (frac.sign() > 0) {
    if (auto high = shifted_within(e.v_arc, cut, cut, Scalar(1))) {
      out.push_back({sys.translate(e.base, LatticePoint{n, whole + 1}), e.u_arc, *high});
    }
  }
  return out;
}

Scalar suspension_correlation(const System& sys, const EventExpr& B, const EventExpr& C,
                              const Arc& D, const Scalar& beta, std::int64_t n) {
  sys.validate(C);
  Scalar total(0);
  const RectangleEvent e{B, Arc{Scalar(0), Scalar(1)}, Arc{Scalar(0), Scalar(1)}};
  for (const auto& piece : suspension_pullback(sys, e, n, beta)) {
    total += sys.measure(intersect(piece.base, C)) * piece.u_arc.length() *
             arc_overlap(piece.v_arc, D);
  }
  return total;
}

}  // namespace dirmix
