#include "dirmix/systems.hpp"

#include <algorithm>
#include <cctype>

#include "dirmix/errors.hpp"

namespace dirmix {

// ---------------------------------------------------------------- set algebra

namespace {

bool constraint_less(const Constraint& a, const Constraint& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const int* s = std::get_if<int>(&a)) return *s < std::get<int>(b);
  const Arc& x = std::get<Arc>(a);
  const Arc& y = std::get<Arc>(b);
  if (!(x.lo == y.lo)) return Scalar::structural_less(x.lo, y.lo);
  return Scalar::structural_less(x.hi, y.hi);
}

// Intersection of two constraints on one coordinate; nullopt when empty.
std::optional<Constraint> meet(const Constraint& a, const Constraint& b) {
  if (a.index() != b.index()) throw InvalidArgument("symbol and arc constraint on one coordinate");
  if (const int* s = std::get_if<int>(&a)) {
    if (*s == std::get<int>(b)) return a;
    return std::nullopt;
  }
  const Arc& x = std::get<Arc>(a);
  const Arc& y = std::get<Arc>(b);
  Arc out{std::max(x.lo, y.lo), std::min(x.hi, y.hi)};
  if (out.lo >= out.hi) return std::nullopt;
  return out;
}

}  // namespace

std::optional<Cylinder> Cylinder::intersect(const Cylinder& a, const Cylinder& b) {
  Map out = a.constraints_;
  for (const auto& [key, c] : b.constraints_) {
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, c);
      continue;
    }
    auto m = meet(it->second, c);
    if (!m) return std::nullopt;
    it->second = std::move(*m);
  }
  return Cylinder(std::move(out));
}

bool Cylinder::disjoint(const Cylinder& a, const Cylinder& b) {
  const Map& small = a.constraints_.size() <= b.constraints_.size() ? a.constraints_ : b.constraints_;
  const Map& large = &small == &a.constraints_ ? b.constraints_ : a.constraints_;
  for (const auto& [key, c] : small) {
    auto it = large.find(key);
    if (it != large.end() && !meet(it->second, c)) return true;
  }
  return false;
}

bool Cylinder::structural_less(const Cylinder& a, const Cylinder& b) {
  return std::lexicographical_compare(
      a.constraints_.begin(), a.constraints_.end(), b.constraints_.begin(), b.constraints_.end(),
      [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return constraint_less(x.second, y.second);
      });
}

EventExpr::EventExpr(Cylinder c) { atoms_.push_back(std::move(c)); }

EventExpr EventExpr::from_disjoint_atoms(std::vector<Cylinder> atoms) {
  EventExpr e;
  e.atoms_ = std::move(atoms);
  std::sort(e.atoms_.begin(), e.atoms_.end(), Cylinder::structural_less);
  return e;
}

EventExpr EventExpr::disjoint_union(std::vector<Cylinder> atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (!Cylinder::disjoint(atoms[i], atoms[j])) {
        throw InvalidArgument("event atoms " + std::to_string(i) + " and " + std::to_string(j) +
                              " overlap");
      }
    }
  }
  return from_disjoint_atoms(std::move(atoms));
}

EventExpr intersect(const EventExpr& a, const EventExpr& b) {
  std::vector<Cylinder> out;
  for (const auto& x : a.atoms_) {
    for (const auto& y : b.atoms_) {
      if (auto c = Cylinder::intersect(x, y)) out.push_back(std::move(*c));
    }
  }
  return EventExpr::from_disjoint_atoms(std::move(out));
}

bool EventExpr::structural_less(const EventExpr& a, const EventExpr& b) {
  return std::lexicographical_compare(a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(),
                                      b.atoms_.end(), Cylinder::structural_less);
}

EventExpr product_event(const EventExpr& left, const EventExpr& right) {
  std::vector<Cylinder> out;
  for (const auto& l : left.atoms()) {
    for (const auto& r : right.atoms()) {
      Cylinder::Map m;
      for (const auto& [key, c] : l.constraints()) {
        CoordKey k{0};
        k.insert(k.end(), key.begin(), key.end());
        m.emplace(std::move(k), c);
      }
      for (const auto& [key, c] : r.constraints()) {
        CoordKey k{1};
        k.insert(k.end(), key.begin(), key.end());
        m.emplace(std::move(k), c);
      }
      out.emplace_back(std::move(m));
    }
  }
  return EventExpr::from_disjoint_atoms(std::move(out));
}

Cylinder factor_cylinder(const Cylinder& c, std::int64_t factor) {
  Cylinder::Map m;
  for (const auto& [key, con] : c.constraints()) {
    if (!key.empty() && key[0] == factor) m.emplace(CoordKey(key.begin() + 1, key.end()), con);
  }
  return Cylinder(std::move(m));
}

// ---------------------------------------------------------------- system nodes

namespace {

struct BernoulliNode {
  std::vector<Rational> weights;
};
struct CounterexampleNode {
  std::vector<Rational> weights;
};
struct RotationNode {
  Scalar alpha1;
  Scalar alpha2;
  std::int64_t radicand = 0;
};

}  // namespace

struct ProductNode {
  System left;
  System right;
};

struct System::Node {
  std::variant<BernoulliNode, CounterexampleNode, RotationNode, ProductNode> v;
};

namespace {

void check_weights(std::vector<Rational>& weights) {
  if (weights.empty()) throw InvalidArgument("alphabet must be non-empty");
  Rational total = 0;
  for (auto& w : weights) {
    w.canonicalize();
    if (w <= 0) throw InvalidArgument("weights must be positive, got " + w.get_str());
    total += w;
  }
  if (total != 1) throw InvalidArgument("weights must sum to 1, got " + total.get_str());
}

std::string weights_string(const std::vector<Rational>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += w[i].get_str();
  }
  return out;
}

[[noreturn]] void bad_key(const CoordKey& key, const std::string& system) {
  std::string k = "(";
  for (std::size_t i = 0; i < key.size(); ++i) k += (i ? "," : "") + std::to_string(key[i]);
  throw InvalidArgument("coordinate " + k + ") is not a coordinate of " + system);
}

int symbol_of(const Constraint& c, std::size_t alphabet, const std::string& system) {
  const int* s = std::get_if<int>(&c);
  if (!s) throw InvalidArgument("arc constraint on a symbolic coordinate of " + system);
  if (*s < 0 || static_cast<std::size_t>(*s) >= alphabet) {
    throw InvalidArgument("symbol " + std::to_string(*s) + " outside alphabet of " + system);
  }
  return *s;
}

std::vector<Constraint> other_symbols(int s, std::size_t alphabet) {
  std::vector<Constraint> out;
  for (std::size_t t = 0; t < alphabet; ++t) {
    if (static_cast<int>(t) != s) out.emplace_back(static_cast<int>(t));
  }
  return out;
}

// T^{-w}[x in arc] for a rotation by `shift`: the arc moved by -shift mod 1.
std::vector<Arc> shift_arc(const Arc& arc, const Scalar& shift) {
  const Scalar lo = (arc.lo - shift).frac();
  const Scalar hi = lo + arc.length();
  if (hi <= Scalar(1)) return {Arc{lo, hi}};
  return {Arc{lo, Scalar(1)}, Arc{Scalar(0), hi - Scalar(1)}};
}

CoordKey tail(const CoordKey& key) { return CoordKey(key.begin() + 1, key.end()); }
CoordKey prefixed(std::int64_t head, const CoordKey& key) {
  CoordKey out{head};
  out.insert(out.end(), key.begin(), key.end());
  return out;
}

}  // namespace

System System::bernoulli2d(std::vector<Rational> weights) {
  check_weights(weights);
  return System(std::make_shared<Node>(Node{BernoulliNode{std::move(weights)}}));
}

System System::counterexample(std::vector<Rational> weights) {
  check_weights(weights);
  return System(std::make_shared<Node>(Node{CounterexampleNode{std::move(weights)}}));
}

System System::rotation2d(Scalar alpha1, Scalar alpha2) {
  std::int64_t d = alpha1.radicand();
  if (d == 0) d = alpha2.radicand();
  if (alpha2.radicand() != 0 && alpha2.radicand() != d) {
    throw InvalidArgument("rotation angles must share one quadratic field");
  }
  return System(std::make_shared<Node>(
      Node{RotationNode{alpha1.frac(), alpha2.frac(), d}}));
}

System System::product(const System& left, const System& right) {
  if (left.q() != right.q()) throw InvalidArgument("product of systems with different q");
  return System(std::make_shared<Node>(Node{ProductNode{left, right}}));
}

SystemKind System::kind() const {
  return std::visit(
      [](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BernoulliNode>) return SystemKind::kBernoulli2D;
        else if constexpr (std::is_same_v<T, CounterexampleNode>) return SystemKind::kCounterexample;
        else if constexpr (std::is_same_v<T, RotationNode>) return SystemKind::kRotation2D;
        else return SystemKind::kProduct;
      },
      node_->v);
}

const std::vector<Rational>& System::weights() const {
  if (const auto* b = std::get_if<BernoulliNode>(&node_->v)) return b->weights;
  if (const auto* c = std::get_if<CounterexampleNode>(&node_->v)) return c->weights;
  throw InvalidArgument("system " + to_string() + " has no symbol weights");
}

std::pair<Scalar, Scalar> System::angles() const {
  if (const auto* r = std::get_if<RotationNode>(&node_->v)) return {r->alpha1, r->alpha2};
  throw InvalidArgument("system " + to_string() + " is not a rotation");
}

const System& System::left() const {
  if (const auto* p = std::get_if<ProductNode>(&node_->v)) return p->left;
  throw InvalidArgument("system " + to_string() + " is not a product");
}

const System& System::right() const {
  if (const auto* p = std::get_if<ProductNode>(&node_->v)) return p->right;
  throw InvalidArgument("system " + to_string() + " is not a product");
}

std::string System::to_string() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BernoulliNode>) {
          return "bernoulli2d(" + weights_string(n.weights) + ")";
        } else if constexpr (std::is_same_v<T, CounterexampleNode>) {
          return "counterexample(" + weights_string(n.weights) + ")";
        } else if constexpr (std::is_same_v<T, RotationNode>) {
          return "rotation2d(" + n.alpha1.to_string() + "; " + n.alpha2.to_string() + ")";
        } else {
          return "product(" + n.left.to_string() + ", " + n.right.to_string() + ")";
        }
      },
      node_->v);
}

void System::validate_constraint(const CoordKey& key, const Constraint& c) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BernoulliNode>) {
          if (key.size() != 2) bad_key(key, to_string());
          symbol_of(c, n.weights.size(), to_string());
        } else if constexpr (std::is_same_v<T, CounterexampleNode>) {
          if (key.size() != 2 || (key[0] != 0 && key[0] != 1)) bad_key(key, to_string());
          symbol_of(c, n.weights.size(), to_string());
        } else if constexpr (std::is_same_v<T, RotationNode>) {
          if (key.size() != 1 || (key[0] != 0 && key[0] != 1)) bad_key(key, to_string());
          const Arc* arc = std::get_if<Arc>(&c);
          if (!arc) throw InvalidArgument("symbol constraint on a rotation axis");
          for (const Scalar* e : {&arc->lo, &arc->hi}) {
            if (e->radicand() != 0 && e->radicand() != n.radicand) {
              throw InvalidArgument("arc endpoint " + e->to_string() +
                                    " outside the rotation's quadratic field");
            }
          }
          if (arc->lo.sign() < 0 || arc->hi > Scalar(1) || arc->lo >= arc->hi) {
            throw InvalidArgument("arc " + arc->to_string() + " is not a non-empty arc of [0,1)");
          }
        } else {
          if (key.size() < 2 || (key[0] != 0 && key[0] != 1)) bad_key(key, to_string());
          (key[0] == 0 ? n.left : n.right).validate_constraint(tail(key), c);
        }
      },
      node_->v);
}

void System::validate(const EventExpr& e) const {
  for (const auto& atom : e.atoms()) {
    for (const auto& [key, c] : atom.constraints()) validate_constraint(key, c);
  }
}

Scalar System::constraint_measure(const CoordKey& key, const Constraint& c) const {
  return std::visit(
      [&](const auto& n) -> Scalar {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BernoulliNode> || std::is_same_v<T, CounterexampleNode>) {
          return Scalar(n.weights.at(std::get<int>(c)));
        } else if constexpr (std::is_same_v<T, RotationNode>) {
          return std::get<Arc>(c).length();
        } else {
          return (key[0] == 0 ? n.left : n.right).constraint_measure(tail(key), c);
        }
      },
      node_->v);
}

Scalar System::measure(const Cylinder& c) const {
  Scalar m(1);
  for (const auto& [key, con] : c.constraints()) {
    m *= constraint_measure(key, con);
    if (m.is_zero()) break;
  }
  return m;
}

Scalar System::measure(const EventExpr& e) const {
  Scalar total(0);
  for (const auto& atom : e.atoms()) total += measure(atom);
  return total;
}

std::vector<std::pair<CoordKey, Constraint>> System::translate_constraint(
    const CoordKey& key, const Constraint& c, const LatticePoint& w) const {
  if (w.dim() != 2) throw InvalidArgument("translation vector must lie in Z^2");
  const std::int64_t m = w[0];
  const std::int64_t n = w[1];
  return std::visit(
      [&](const auto& node) -> std::vector<std::pair<CoordKey, Constraint>> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, BernoulliNode>) {
          return {{CoordKey{key[0] + m, key[1] + n}, c}};
        } else if constexpr (std::is_same_v<T, CounterexampleNode>) {
          const std::int64_t step = key[0] == 0 ? m - n : m + n;
          return {{CoordKey{key[0], key[1] + step}, c}};
        } else if constexpr (std::is_same_v<T, RotationNode>) {
          const Scalar shift = key[0] == 0 ? node.alpha1 * Scalar(m) : node.alpha2 * Scalar(n);
          std::vector<std::pair<CoordKey, Constraint>> out;
          for (auto& arc : shift_arc(std::get<Arc>(c), shift)) out.emplace_back(key, arc);
          return out;
        } else {
          const System& factor = key[0] == 0 ? node.left : node.right;
          auto inner = factor.translate_constraint(tail(key), c, w);
          for (auto& [k, con] : inner) k = prefixed(key[0], k);
          return inner;
        }
      },
      node_->v);
}

std::vector<Constraint> System::complement_constraint(const CoordKey& key,
                                                      const Constraint& c) const {
  return std::visit(
      [&](const auto& n) -> std::vector<Constraint> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BernoulliNode> || std::is_same_v<T, CounterexampleNode>) {
          return other_symbols(std::get<int>(c), n.weights.size());
        } else if constexpr (std::is_same_v<T, RotationNode>) {
          const Arc& a = std::get<Arc>(c);
          std::vector<Constraint> out;
          if (a.lo.sign() > 0) out.emplace_back(Arc{Scalar(0), a.lo});
          if (a.hi < Scalar(1)) out.emplace_back(Arc{a.hi, Scalar(1)});
          return out;
        } else {
          return (key[0] == 0 ? n.left : n.right).complement_constraint(tail(key), c);
        }
      },
      node_->v);
}

EventExpr System::translate(const EventExpr& e, const LatticePoint& w) const {
  if (w.dim() != 2) throw InvalidArgument("translation vector must lie in Z^2");
  std::vector<Cylinder> out;
  for (const auto& atom : e.atoms()) {
    std::vector<Cylinder::Map> partial(1);
    for (const auto& [key, c] : atom.constraints()) {
      auto alts = translate_constraint(key, c, w);
      if (alts.size() == 1) {
        for (auto& p : partial) p.emplace(alts[0].first, alts[0].second);
        continue;
      }
      std::vector<Cylinder::Map> next;
      for (const auto& p : partial) {
        for (const auto& [k, con] : alts) {
          next.push_back(p);
          next.back().emplace(k, con);
        }
      }
      partial = std::move(next);
    }
    for (auto& p : partial) out.emplace_back(std::move(p));
  }
  return EventExpr::from_disjoint_atoms(std::move(out));
}

Scalar System::joint_measure(const EventExpr& e1, const LatticePoint& w,
                             const EventExpr& e2) const {
  Scalar total(0);
  const EventExpr moved = translate(e1, w);
  for (const auto& a : moved.atoms()) {
    for (const auto& b : e2.atoms()) {
      if (auto c = Cylinder::intersect(a, b)) total += measure(*c);
    }
  }
  return total;
}

EventExpr System::complement(const EventExpr& e) const {
  EventExpr result = EventExpr::whole();
  for (const auto& atom : e.atoms()) {
    // X \ atom = disjoint union over i of {c_1..c_{i-1} hold, c_i fails}.
    std::vector<Cylinder> pieces;
    Cylinder::Map prefix;
    for (const auto& [key, c] : atom.constraints()) {
      for (auto& other : complement_constraint(key, c)) {
        Cylinder::Map m = prefix;
        m.emplace(key, std::move(other));
        pieces.emplace_back(std::move(m));
      }
      prefix.emplace(key, c);
    }
    result = intersect(result, EventExpr::from_disjoint_atoms(std::move(pieces)));
  }
  return result;
}

// ---------------------------------------------------------------- text form

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char ch) { return std::isspace(ch); };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::int64_t parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(trim(s), &used);
    if (used != trim(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad integer in constraint \"" + context + "\"");
  }
}

}  // namespace

std::optional<Cylinder> System::parse_cylinder(const std::vector<std::string>& constraints) const {
  Cylinder result;
  bool conflict = false;
  for (const auto& raw : constraints) {
    const std::string text = trim(raw);
    std::pair<CoordKey, Constraint> parsed;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          const auto eq = text.find('=');
          if (eq == std::string::npos) throw InvalidArgument("constraint \"" + text + "\" lacks '='");
          const std::string lhs = trim(text.substr(0, eq));
          const std::string rhs = trim(text.substr(eq + 1));
          if constexpr (std::is_same_v<T, BernoulliNode>) {
            if (lhs.size() < 5 || lhs.front() != '(' || lhs.back() != ')') {
              throw InvalidArgument("expected \"(i,j)=s\", got \"" + text + "\"");
            }
            const auto comma = lhs.find(',');
            if (comma == std::string::npos) throw InvalidArgument("expected \"(i,j)=s\", got \"" + text + "\"");
            parsed = {CoordKey{parse_int(lhs.substr(1, comma - 1), text),
                               parse_int(lhs.substr(comma + 1, lhs.size() - comma - 2), text)},
                      static_cast<int>(parse_int(rhs, text))};
          } else if constexpr (std::is_same_v<T, CounterexampleNode>) {
            if (lhs.empty() || (lhs[0] != 'L' && lhs[0] != 'R')) {
              throw InvalidArgument("expected \"L<i>=s\" or \"R<i>=s\", got \"" + text + "\"");
            }
            parsed = {CoordKey{lhs[0] == 'L' ? 0 : 1, parse_int(lhs.substr(1), text)},
                      static_cast<int>(parse_int(rhs, text))};
          } else if constexpr (std::is_same_v<T, RotationNode>) {
            if ((lhs != "x" && lhs != "y") || rhs.size() < 4 || rhs.front() != '[' ||
                rhs.back() != ')') {
              throw InvalidArgument("expected \"x=[a,b)\" or \"y=[a,b)\", got \"" + text + "\"");
            }
            const auto comma = rhs.find(',');
            if (comma == std::string::npos) throw InvalidArgument("arc lacks ',' in \"" + text + "\"");
            parsed = {CoordKey{lhs == "x" ? 0 : 1},
                      Arc{Scalar::parse(rhs.substr(1, comma - 1)),
                          Scalar::parse(rhs.substr(comma + 1, rhs.size() - comma - 2))}};
          } else {
            const bool is_left = text.rfind("left.", 0) == 0;
            const bool is_right = text.rfind("right.", 0) == 0;
            if (!is_left && !is_right) {
              throw InvalidArgument("product constraint must start with left. or right.: \"" + text + "\"");
            }
            const System& factor = is_left ? n.left : n.right;
            std::optional<Cylinder> inner = factor.parse_cylinder({text.substr(is_left ? 5 : 6)});
            const auto& [k, c] = *inner->constraints().begin();
            parsed = {prefixed(is_left ? 0 : 1, k), c};
          }
        },
        node_->v);
    validate_constraint(parsed.first, parsed.second);
    if (conflict) continue;
    auto merged = Cylinder::intersect(result, Cylinder(Cylinder::Map{{parsed.first, parsed.second}}));
    if (merged) {
      result = std::move(*merged);
    } else {
      conflict = true;
    }
  }
  if (conflict) return std::nullopt;
  return result;
}

EventExpr System::parse_event(const std::vector<std::string>& constraints) const {
  auto c = parse_cylinder(constraints);
  return c ? EventExpr(std::move(*c)) : EventExpr::empty();
}

std::string System::format_cylinder(const Cylinder& c) const {
  std::string out = "[";
  bool first = true;
  for (const auto& [key, con] : c.constraints()) {
    if (!first) out += " & ";
    first = false;
    std::string lhs;
    CoordKey k = key;
    const System* sys = this;
    while (sys->kind() == SystemKind::kProduct) {
      lhs += k[0] == 0 ? "left." : "right.";
      sys = k[0] == 0 ? &sys->left() : &sys->right();
      k = tail(k);
    }
    switch (sys->kind()) {
      case SystemKind::kBernoulli2D:
        lhs += "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")";
        break;
      case SystemKind::kCounterexample:
        lhs += (k[0] == 0 ? "L" : "R") + std::to_string(k[1]);
        break;
      case SystemKind::kRotation2D:
        lhs += k[0] == 0 ? "x" : "y";
        break;
      case SystemKind::kProduct:
        break;
    }
    if (const int* s = std::get_if<int>(&con)) {
      out += lhs + "=" + std::to_string(*s);
    } else {
      out += lhs + "=" + std::get<Arc>(con).to_string();
    }
  }
  return out + "]";
}

}  // namespace dirmix
