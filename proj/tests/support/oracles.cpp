#include "oracles.hpp"

#include <stdexcept>

namespace testsupport {

using namespace logicbench;

bool holds(const Formula& f, const std::map<std::string, bool>& v) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = v.find(f.name());
      return it != v.end() && it->second;
    }
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !holds(f.operand(), v);
    case Op::And: return holds(f.lhs(), v) && holds(f.rhs(), v);
    case Op::Or: return holds(f.lhs(), v) || holds(f.rhs(), v);
    case Op::Implies: return !holds(f.lhs(), v) || holds(f.rhs(), v);
    case Op::Iff: return holds(f.lhs(), v) == holds(f.rhs(), v);
    default: throw std::logic_error("modal operator in a propositional oracle");
  }
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_atoms(f.child(i), out);
}

template <class F>
bool any_valuation(const std::vector<std::string>& atoms, F&& pred) {
  for (unsigned long bits = 0; bits < (1ul << atoms.size()); ++bits) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = (bits >> i) & 1;
    if (pred(v)) return true;
  }
  return false;
}

}  // namespace

bool tt_satisfiable(const Formula& f) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  return any_valuation({atoms.begin(), atoms.end()}, [&](const auto& v) { return holds(f, v); });
}

bool tt_equivalent(const Formula& f, const Formula& g) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  collect_atoms(g, atoms);
  return !any_valuation({atoms.begin(), atoms.end()}, [&](const auto& v) { return holds(f, v) != holds(g, v); });
}

bool holds_at(const Formula& f, const KripkeStructure& k, const std::string& w) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = k.labels.find(w);
      return it != k.labels.end() && it->second.count(f.name());
    }
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !holds_at(f.operand(), k, w);
    case Op::And: return holds_at(f.lhs(), k, w) && holds_at(f.rhs(), k, w);
    case Op::Or: return holds_at(f.lhs(), k, w) || holds_at(f.rhs(), k, w);
    case Op::Implies: return !holds_at(f.lhs(), k, w) || holds_at(f.rhs(), k, w);
    case Op::Iff: return holds_at(f.lhs(), k, w) == holds_at(f.rhs(), k, w);
    case Op::Box:
      for (const auto& [a, b] : k.edges)
        if (a == w && !holds_at(f.operand(), k, b)) return false;
      return true;
    case Op::Diamond:
      for (const auto& [a, b] : k.edges)
        if (a == w && holds_at(f.operand(), k, b)) return true;
      return false;
  }
  return false;
}

SmallKripkeUniverse::SmallKripkeUniverse(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  atom_mask_.resize(atoms_.size());
  for (unsigned n = 1; n <= 3; ++n) {
    const std::uint8_t present = static_cast<std::uint8_t>((1u << n) - 1);
    const unsigned label_bits = n * static_cast<unsigned>(atoms_.size());
    for (unsigned rel = 0; rel < (1u << (n * n)); ++rel) {
      std::uint16_t edges = 0;  // bit i*3+j for i -> j
      for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
          if ((rel >> (i * n + j)) & 1) edges |= static_cast<std::uint16_t>(1u << (i * 3 + j));
      std::array<std::uint8_t, 8> box{}, dia{};
      for (unsigned t = 0; t < 8; ++t) {
        for (unsigned i = 0; i < n; ++i) {
          bool all = true, some = false;
          for (unsigned j = 0; j < n; ++j) {
            if (!((edges >> (i * 3 + j)) & 1)) continue;
            bool tj = (t >> j) & 1;
            all = all && tj;
            some = some || tj;
          }
          if (all) box[t] |= static_cast<std::uint8_t>(1u << i);
          if (some) dia[t] |= static_cast<std::uint8_t>(1u << i);
        }
      }
      for (unsigned labels = 0; labels < (1u << label_bits); ++labels) {
        present_.push_back(present);
        edges_.push_back(edges);
        box_.push_back(box);
        diamond_.push_back(dia);
        for (std::size_t a = 0; a < atoms_.size(); ++a) {
          std::uint8_t mask = 0;
          for (unsigned w = 0; w < n; ++w)
            if ((labels >> (w * atoms_.size() + a)) & 1) mask |= static_cast<std::uint8_t>(1u << w);
          atom_mask_[a].push_back(mask);
        }
        ++count_;
      }
    }
  }
}

std::vector<std::uint8_t> SmallKripkeUniverse::eval(const Formula& f) const {
  std::vector<std::uint8_t> out(count_, 0);
  switch (f.op()) {
    case Op::Atom:
      for (std::size_t a = 0; a < atoms_.size(); ++a)
        if (atoms_[a] == f.name()) return atom_mask_[a];
      return out;
    case Op::True: return present_;
    case Op::False: return out;
    default: break;
  }
  auto x = eval(f.child(0));
  if (f.arity() == 1) {
    for (std::size_t s = 0; s < count_; ++s) {
      switch (f.op()) {
        case Op::Not: out[s] = present_[s] ^ x[s]; break;
        case Op::Box: out[s] = box_[s][x[s]]; break;
        default: out[s] = diamond_[s][x[s]]; break;
      }
    }
    return out;
  }
  auto y = eval(f.child(1));
  for (std::size_t s = 0; s < count_; ++s) {
    switch (f.op()) {
      case Op::And: out[s] = x[s] & y[s]; break;
      case Op::Or: out[s] = x[s] | y[s]; break;
      case Op::Implies: out[s] = static_cast<std::uint8_t>((present_[s] ^ x[s]) | y[s]); break;
      default: out[s] = static_cast<std::uint8_t>(present_[s] ^ (x[s] ^ y[s])); break;
    }
  }
  return out;
}

std::optional<std::size_t> SmallKripkeUniverse::find_model(const Formula& f) const {
  auto truth = eval(f);
  for (std::size_t s = 0; s < count_; ++s)
    if (truth[s] & 1) return s;
  return std::nullopt;
}

KripkeStructure SmallKripkeUniverse::structure(std::size_t s) const {
  KripkeStructure k;
  for (unsigned w = 0; w < 3; ++w)
    if ((present_[s] >> w) & 1) k.worlds.push_back("w" + std::to_string(w));
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j)
      if ((edges_[s] >> (i * 3 + j)) & 1) k.edges.insert({"w" + std::to_string(i), "w" + std::to_string(j)});
  for (std::size_t a = 0; a < atoms_.size(); ++a)
    for (unsigned w = 0; w < 3; ++w)
      if ((atom_mask_[a][s] >> w) & 1) k.labels["w" + std::to_string(w)].insert(atoms_[a]);
  k.designated = "w0";
  return k;
}

namespace {

std::set<std::string> label_of(const KripkeStructure& k, const std::string& w) {
  auto it = k.labels.find(w);
  return it == k.labels.end() ? std::set<std::string>{} : it->second;
}

std::vector<std::string> succ(const KripkeStructure& k, const std::string& w) {
  std::vector<std::string> out;
  for (const auto& [a, b] : k.edges)
    if (a == w) out.push_back(b);
  return out;
}

}  // namespace

bool is_bisimulation(const KripkeStructure& left, const KripkeStructure& right, const BisimRelation& r) {
  for (const auto& [a, b] : r) {
    if (label_of(left, a) != label_of(right, b)) return false;
    for (const auto& a2 : succ(left, a)) {
      bool matched = false;
      for (const auto& b2 : succ(right, b)) matched = matched || r.count({a2, b2});
      if (!matched) return false;
    }
    for (const auto& b2 : succ(right, b)) {
      bool matched = false;
      for (const auto& a2 : succ(left, a)) matched = matched || r.count({a2, b2});
      if (!matched) return false;
    }
  }
  return true;
}

BisimRelation brute_max_bisimulation(const KripkeStructure& left, const KripkeStructure& right) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : left.worlds)
    for (const auto& b : right.worlds) pairs.push_back({a, b});
  BisimRelation best;
  for (unsigned long mask = 0; mask < (1ul << pairs.size()); ++mask) {
    BisimRelation r;
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if ((mask >> i) & 1) r.insert(pairs[i]);
    if (is_bisimulation(left, right, r)) best.insert(r.begin(), r.end());
  }
  return best;
}

bool fo_holds(const FoFormula& f, const ColoredGraph& g, std::map<std::string, int> assignment) {
  auto value = [&](const Term& t) {
    if (!t.is_variable()) throw std::logic_error("constants are not part of the graph signature");
    return assignment.at(t.name);
  };
  switch (f.op()) {
    case FoOp::Pred: {
      if (f.name() == "E") return g.edges.count({value(f.terms()[0]), value(f.terms()[1])}) > 0;
      auto it = g.colors.find(value(f.terms()[0]));
      return it != g.colors.end() && it->second.count(f.name()) > 0;
    }
    case FoOp::Equals: return value(f.terms()[0]) == value(f.terms()[1]);
    case FoOp::True: return true;
    case FoOp::False: return false;
    case FoOp::Not: return !fo_holds(f.child(0), g, assignment);
    case FoOp::And: return fo_holds(f.child(0), g, assignment) && fo_holds(f.child(1), g, assignment);
    case FoOp::Or: return fo_holds(f.child(0), g, assignment) || fo_holds(f.child(1), g, assignment);
    case FoOp::Implies: return !fo_holds(f.child(0), g, assignment) || fo_holds(f.child(1), g, assignment);
    case FoOp::Iff: return fo_holds(f.child(0), g, assignment) == fo_holds(f.child(1), g, assignment);
    case FoOp::Exists:
    case FoOp::Forall: {
      bool exists = f.op() == FoOp::Exists;
      for (int n : g.nodes) {
        assignment[f.name()] = n;
        bool h = fo_holds(f.body(), g, assignment);
        if (exists && h) return true;
        if (!exists && !h) return false;
      }
      return !exists;
    }
  }
  return false;
}

Term substitute(const Term& t, const Substitution& s) {
  if (t.is_variable()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term out = t;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

Literal substitute(const Literal& l, const Substitution& s) {
  Literal out = l;
  for (auto& a : out.args) a = substitute(a, s);
  return out;
}

bool match(const Term& pattern, const Term& target, Substitution& binding) {
  if (pattern.is_variable()) {
    auto [it, inserted] = binding.emplace(pattern.name, target);
    return inserted || it->second == target;
  }
  if (target.is_variable() || pattern.name != target.name || pattern.args.size() != target.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match(pattern.args[i], target.args[i], binding)) return false;
  return true;
}

bool pl_entails(const std::vector<Clause>& premises, const Clause& conclusion) {
  std::set<std::string> names;
  for (const auto& c : premises)
    for (const auto& l : c) names.insert(l.predicate);
  for (const auto& l : conclusion) names.insert(l.predicate);
  auto sat = [](const Clause& c, const std::map<std::string, bool>& v) {
    for (const auto& l : c)
      if (v.at(l.predicate) == l.positive) return true;
    return false;
  };
  return !any_valuation({names.begin(), names.end()}, [&](const auto& v) {
    for (const auto& c : premises)
      if (!sat(c, v)) return false;
    return !sat(conclusion, v);
  });
}

}  // namespace testsupport
