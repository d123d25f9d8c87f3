#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dirmix/lattice.hpp"
#include "dirmix/scalar.hpp"

namespace dirmix {

/// Half-open arc [lo, hi) of [0, 1), lo < hi. Wrapping arcs are represented
/// as two atoms.
struct Arc {
  Scalar lo;
  Scalar hi;

  Scalar length() const { return hi - lo; }
  bool is_full() const { return lo.is_zero() && hi == Scalar(1); }
  friend bool operator==(const Arc&, const Arc&) = default;
  std::string to_string() const { return "[" + lo.to_string() + "," + hi.to_string() + ")"; }
};

/// Address of one coordinate of a model system. Its layout depends on the
/// system kind:
///   Bernoulli2D     (i, j)           site of the Z^2 configuration
///   Counterexample  (side, i)        side 0 = left factor, 1 = right factor
///   Rotation2D      (axis)           axis 0 = x, 1 = y
///   Product         (factor, ...)    factor 0/1 followed by the factor's key
using CoordKey = std::vector<std::int64_t>;

/// Either a required symbol (shift coordinates) or an arc (rotation axes).
using Constraint = std::variant<int, Arc>;

/// Finitely many coordinate constraints; no constraints means the whole space.
class Cylinder {
 public:
  using Map = std::map<CoordKey, Constraint>;

  Cylinder() = default;
  explicit Cylinder(Map constraints) : constraints_(std::move(constraints)) {}

  const Map& constraints() const { return constraints_; }
  bool is_whole() const { return constraints_.empty(); }

  /// Intersection; nullopt when some shared coordinate conflicts.
  static std::optional<Cylinder> intersect(const Cylinder& a, const Cylinder& b);
  static bool disjoint(const Cylinder& a, const Cylinder& b);

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
  static bool structural_less(const Cylinder& a, const Cylinder& b);

 private:
  Map constraints_;
};

/// A finite disjoint union of cylinders kept in normal form (atoms sorted
/// structurally, duplicates impossible by disjointness). No atoms is the
/// empty event.
class EventExpr {
 public:
  EventExpr() = default;
  explicit EventExpr(Cylinder c);

  static EventExpr whole() { return EventExpr(Cylinder()); }
  static EventExpr empty() { return EventExpr(); }
  /// Checks pairwise disjointness by constraint conflict; throws otherwise.
  static EventExpr disjoint_union(std::vector<Cylinder> atoms);
  /// Skips the disjointness check; for atoms produced by exact set algebra.
  static EventExpr from_disjoint_atoms(std::vector<Cylinder> atoms);

  const std::vector<Cylinder>& atoms() const { return atoms_; }
  bool is_empty() const { return atoms_.empty(); }

  friend EventExpr intersect(const EventExpr& a, const EventExpr& b);
  friend bool operator==(const EventExpr&, const EventExpr&) = default;
  static bool structural_less(const EventExpr& a, const EventExpr& b);

 private:
  std::vector<Cylinder> atoms_;
};

enum class SystemKind { kBernoulli2D, kCounterexample, kRotation2D, kProduct };

/// A model Z^2 measure-preserving system with an exact measure oracle on
/// cylinder events.
///
/// Shift convention: (T^w x)_u = x_{u+w}, hence T^{-w}[x_u = s] = [x_{u+w} = s].
/// The counterexample system is X x X with the (weights)-Bernoulli shift T on
/// each factor and T~^{(m,n)} = (Id x T)^{m+n} (T x Id)^{m-n}: the left factor
/// moves by m-n, the right by m+n. Rotation2D acts by
/// T^{(m,n)}(x, y) = (x + m a1, y + n a2) mod 1.
class System {
 public:
  static System bernoulli2d(std::vector<Rational> weights);
  static System counterexample(std::vector<Rational> weights);
  static System rotation2d(Scalar alpha1, Scalar alpha2);
  static System product(const System& left, const System& right);

  SystemKind kind() const;
  int q() const { return 2; }
  /// Symbol weights of a Bernoulli2D / Counterexample system.
  const std::vector<Rational>& weights() const;
  std::pair<Scalar, Scalar> angles() const;
  const System& left() const;
  const System& right() const;

  std::string to_string() const;

  /// Throws InvalidArgument when some constraint does not address a
  /// coordinate of this system or names an invalid symbol or arc.
  void validate(const EventExpr& e) const;

  Scalar measure(const EventExpr& e) const;
  Scalar measure(const Cylinder& c) const;
  /// T^{-w} e.
  EventExpr translate(const EventExpr& e, const LatticePoint& w) const;
  /// mu(T^{-w} e1 ∩ e2).
  Scalar joint_measure(const EventExpr& e1, const LatticePoint& w, const EventExpr& e2) const;
  EventExpr complement(const EventExpr& e) const;

  /// Parses constraints such as "(0,0)=1" (Bernoulli2D), "L3=0" / "R0=1"
  /// (Counterexample), "x=[0,1/2)" (Rotation2D) and "left.<c>" / "right.<c>"
  /// (Product). An empty list is the whole space; conflicting constraints
  /// give nullopt (the empty event).
  std::optional<Cylinder> parse_cylinder(const std::vector<std::string>& constraints) const;
  EventExpr parse_event(const std::vector<std::string>& constraints) const;
  std::string format_cylinder(const Cylinder& c) const;

  // Coordinate-level oracle, used by the set algebra above.
  void validate_constraint(const CoordKey& key, const Constraint& c) const;
  Scalar constraint_measure(const CoordKey& key, const Constraint& c) const;
  /// Disjoint alternatives whose union is T^{-w} of the single constraint.
  std::vector<std::pair<CoordKey, Constraint>> translate_constraint(
      const CoordKey& key, const Constraint& c, const LatticePoint& w) const;
  /// Disjoint constraints on the same coordinate covering its complement.
  std::vector<Constraint> complement_constraint(const CoordKey& key, const Constraint& c) const;

  struct Node;

 private:
  explicit System(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Rectangle events of a product system: `left` and `right` are events of
/// the factors; the result addresses factor coordinates with a 0/1 prefix.
EventExpr product_event(const EventExpr& left, const EventExpr& right);
/// Restriction of a cylinder to one factor's coordinates (prefix stripped).
Cylinder factor_cylinder(const Cylinder& c, std::int64_t factor);

}  // namespace dirmix
