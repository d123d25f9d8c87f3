#pragma once

#include <cstdint>
#include <vector>

#include "dirmix/lattice.hpp"
#include "dirmix/scalar.hpp"
#include "dirmix/systems.hpp"

namespace dirmix {

/// A point (T^shift x0, u, v) of the suspension X x [0,1)^2, where x0 is a
/// fixed reference configuration of the base system.
struct SuspensionPoint {
  LatticePoint shift = LatticePoint::zero(2);
  Scalar u;
  Scalar v;

  friend bool operator==(const SuspensionPoint&, const SuspensionPoint&) = default;
};

/// phi_{s,t}(x, u, v) = (T^{([s+u], [t+v])} x, {s+u}, {t+v}), with [.] the floor.
SuspensionPoint suspension_flow(const SuspensionPoint& p, const Scalar& s, const Scalar& t);

/// W^n = phi_{n, n beta}.
SuspensionPoint suspension_step(const SuspensionPoint& p, std::int64_t n, const Scalar& beta);

/// base x uArc x vArc, measure mu(base) |uArc| |vArc|.
struct RectangleEvent {
  EventExpr base;
  Arc u_arc{Scalar(0), Scalar(1)};
  Arc v_arc{Scalar(0), Scalar(1)};
};

Scalar rectangle_measure(const System& sys, const RectangleEvent& e);

/// W^{-n} e as disjoint rectangles: for v < 1 - {n beta} the base moves by
/// (n, [n beta]), otherwise by (n, [n beta] + 1); pieces with empty arcs are
/// dropped.
std::vector<RectangleEvent> suspension_pullback(const System& sys, const RectangleEvent& e,
                                                std::int64_t n, const Scalar& beta);

/// <U_W^n (1_B x 1_{[0,1)^2}), 1_C x 1_{[0,1) x D}>, i.e.
/// mu(T^{-(n,[n beta])}B ∩ C) |[0, 1-{n beta}) ∩ D| + mu(T^{-(n,[n beta]+1)}B ∩ C) |[1-{n beta}, 1) ∩ D|.
Scalar suspension_correlation(const System& sys, const EventExpr& B, const EventExpr& C,
                              const Arc& D, const Scalar& beta, std::int64_t n);

/// Length of the intersection of two arcs of [0, 1).
Scalar arc_overlap(const Arc& a, const Arc& b);

}  // namespace dirmix
