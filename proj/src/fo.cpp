#include "logicbench/fo.hpp"

#include <algorithm>

#include "logicbench/error.hpp"

namespace logicbench {

struct FoFormula::Node {
  FoOp op;
  std::string name;
  std::vector<Term> terms;
  std::vector<FoFormula> children;
};

bool Term::contains_variable(const std::string& var) const {
  if (is_variable()) return name == var;
  return std::any_of(args.begin(), args.end(), [&](const Term& a) { return a.contains_variable(var); });
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
  // positive before negative
  return b.positive <=> a.positive;
}

FoFormula FoFormula::predicate(std::string name, std::vector<Term> args) {
  if (name.empty()) throw Error("invalid_predicate", "empty predicate name");
  return FoFormula(std::make_shared<Node>(Node{FoOp::Pred, std::move(name), std::move(args), {}}));
}

FoFormula FoFormula::equals(Term lhs, Term rhs) {
  return FoFormula(std::make_shared<Node>(Node{FoOp::Equals, "", {std::move(lhs), std::move(rhs)}, {}}));
}

FoFormula FoFormula::top() { return FoFormula(std::make_shared<Node>(Node{FoOp::True, "", {}, {}})); }
FoFormula FoFormula::bottom() { return FoFormula(std::make_shared<Node>(Node{FoOp::False, "", {}, {}})); }

FoFormula FoFormula::negation(FoFormula f) {
  return FoFormula(std::make_shared<Node>(Node{FoOp::Not, "", {}, {std::move(f)}}));
}

FoFormula FoFormula::binary(FoOp op, FoFormula lhs, FoFormula rhs) {
  if (op != FoOp::And && op != FoOp::Or && op != FoOp::Implies && op != FoOp::Iff)
    throw Error("arity_mismatch", "not a binary connective");
  return FoFormula(std::make_shared<Node>(Node{op, "", {}, {std::move(lhs), std::move(rhs)}}));
}

FoFormula FoFormula::quantifier(FoOp op, std::string variable, FoFormula body) {
  if (op != FoOp::Exists && op != FoOp::Forall) throw Error("arity_mismatch", "not a quantifier");
  if (variable.empty()) throw Error("invalid_variable", "empty bound variable");
  return FoFormula(std::make_shared<Node>(Node{op, std::move(variable), {}, {std::move(body)}}));
}

FoOp FoFormula::op() const noexcept { return node_->op; }
const std::string& FoFormula::name() const noexcept { return node_->name; }
const std::vector<Term>& FoFormula::terms() const noexcept { return node_->terms; }
std::size_t FoFormula::arity() const noexcept { return node_->children.size(); }

const FoFormula& FoFormula::child(std::size_t i) const {
  if (i >= node_->children.size()) throw Error("bad_position", "no such child");
  return node_->children[i];
}

bool operator==(const FoFormula& a, const FoFormula& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const FoFormula& a, const FoFormula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.terms().size() <=> b.terms().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.terms().size(); ++i)
    if (auto c = a.terms()[i] <=> b.terms()[i]; c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.child(i) <=> b.child(i); c != 0) return c;
  return std::strong_ordering::equal;
}

namespace {

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_variables(a, out);
}

void collect_free(const FoFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case FoOp::Pred:
    case FoOp::Equals:
      for (const auto& t : f.terms()) {
        std::set<std::string> vs;
        collect_variables(t, vs);
        for (const auto& v : vs)
          if (!bound.count(v)) out.insert(v);
      }
      return;
    case FoOp::Exists:
    case FoOp::Forall: {
      bool fresh = bound.insert(f.name()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (std::size_t i = 0; i < f.arity(); ++i) collect_free(f.child(i), bound, out);
  }
}

void collect_signature(const FoFormula& f, std::map<std::string, std::size_t>& out, bool& consistent) {
  if (f.op() == FoOp::Pred) {
    auto [it, inserted] = out.emplace(f.name(), f.terms().size());
    if (!inserted && it->second != f.terms().size()) consistent = false;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collect_signature(f.child(i), out, consistent);
}

bool terms_are_variables(const FoFormula& f) {
  for (const auto& t : f.terms())
    if (!t.is_variable()) return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!terms_are_variables(f.child(i))) return false;
  return true;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace

std::set<std::string> variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return out;
}

std::set<std::string> variables(const Literal& l) {
  std::set<std::string> out;
  for (const auto& a : l.args) collect_variables(a, out);
  return out;
}

std::set<std::string> variables(const Clause& c) {
  std::set<std::string> out;
  for (const auto& l : c)
    for (const auto& a : l.args) collect_variables(a, out);
  return out;
}

std::set<std::string> free_variables(const FoFormula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::map<std::string, std::size_t> predicate_signature(const FoFormula& f) {
  std::map<std::string, std::size_t> out;
  bool consistent = true;
  collect_signature(f, out, consistent);
  if (!consistent) throw Error("arity_mismatch", "predicate used with different arities");
  return out;
}

bool uses_graph_signature(const FoFormula& f, const std::set<std::string>& colors) {
  if (!terms_are_variables(f)) return false;
  std::map<std::string, std::size_t> sig;
  try {
    sig = predicate_signature(f);
  } catch (const Error&) {
    return false;
  }
  for (const auto& [name, arity] : sig) {
    if (name == "E") {
      if (arity != 2) return false;
    } else if (arity != 1 || (!colors.empty() && !colors.count(name))) {
      return false;
    }
  }
  return true;
}

Term apply_substitution(const Term& t, const Substitution& s) {
  if (t.is_variable()) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Term out{Term::Kind::Function, t.name, {}};
  out.args.reserve(t.args.size());
  for (const auto& a : t.args) out.args.push_back(apply_substitution(a, s));
  return out;
}

Literal apply_substitution(const Literal& l, const Substitution& s) {
  Literal out{l.positive, l.predicate, {}};
  out.args.reserve(l.args.size());
  for (const auto& a : l.args) out.args.push_back(apply_substitution(a, s));
  return out;
}

Clause apply_substitution(const Clause& c, const Substitution& s) {
  Clause out;
  for (const auto& l : c) out.insert(apply_substitution(l, s));
  return out;
}

FoFormula apply_substitution(const FoFormula& f, const Substitution& s) {
  switch (f.op()) {
    case FoOp::Pred: {
      std::vector<Term> ts;
      for (const auto& t : f.terms()) ts.push_back(apply_substitution(t, s));
      return FoFormula::predicate(f.name(), std::move(ts));
    }
    case FoOp::Equals:
      return FoFormula::equals(apply_substitution(f.terms()[0], s), apply_substitution(f.terms()[1], s));
    case FoOp::True:
    case FoOp::False:
      return f;
    case FoOp::Not:
      return FoFormula::negation(apply_substitution(f.body(), s));
    case FoOp::Exists:
    case FoOp::Forall: {
      Substitution inner = s;
      inner.erase(f.name());
      // Terms entering the body that mention the bound variable would be captured.
      std::set<std::string> incoming;
      auto body_free = free_variables(f.body());
      for (const auto& [var, term] : inner)
        if (body_free.count(var)) {
          auto vs = variables(term);
          incoming.insert(vs.begin(), vs.end());
        }
      if (!incoming.count(f.name())) return FoFormula::quantifier(f.op(), f.name(), apply_substitution(f.body(), inner));
      std::set<std::string> avoid = incoming;
      avoid.insert(body_free.begin(), body_free.end());
      std::string renamed = fresh_name(f.name(), avoid);
      inner[f.name()] = Term::variable(renamed);
      return FoFormula::quantifier(f.op(), renamed, apply_substitution(f.body(), inner));
    }
    default:
      return FoFormula::binary(f.op(), apply_substitution(f.child(0), s), apply_substitution(f.child(1), s));
  }
}

Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [var, term] : first) out[var] = apply_substitution(term, second);
  for (const auto& [var, term] : second)
    if (!out.count(var)) out[var] = term;
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_variable() && it->second.name == it->first)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

}  // namespace logicbench
