#include "logicbench/formula.hpp"

#include <algorithm>
#include <map>

#include "logicbench/error.hpp"

namespace logicbench {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> children;
  std::size_t size;
  std::size_t depth;
  std::size_t modal_depth;
};

std::string_view to_string(Logic logic) {
  switch (logic) {
    case Logic::PL: return "PL";
    case Logic::ML: return "ML";
    case Logic::FO: return "FO";
  }
  return "PL";
}

Logic logic_from_string(std::string_view text) {
  if (text == "PL" || text == "pl") return Logic::PL;
  if (text == "ML" || text == "ml") return Logic::ML;
  if (text == "FO" || text == "fo") return Logic::FO;
  throw Error("unknown_logic", "unknown logic '" + std::string(text) + "'");
}

bool is_unary(Op op) noexcept { return op == Op::Not || op == Op::Box || op == Op::Diamond; }

bool is_binary(Op op) noexcept {
  return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

namespace {

bool valid_atom_name(const std::string& name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

}  // namespace

Formula Formula::make(Op op, std::vector<Formula> children) {
  std::size_t expected = is_unary(op) ? 1 : is_binary(op) ? 2 : 0;
  if (children.size() != expected)
    throw Error("arity_mismatch", "operator arity does not match its children");
  auto node = std::make_shared<Node>();
  node->op = op;
  node->size = 1;
  node->depth = 0;
  node->modal_depth = 0;
  for (const auto& c : children) {
    node->size += c.size();
    node->depth = std::max(node->depth, c.depth() + 1);
    node->modal_depth = std::max(node->modal_depth, c.modal_depth());
  }
  if (op == Op::Box || op == Op::Diamond) node->modal_depth += 1;
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
  if (!valid_atom_name(name)) throw Error("invalid_atom", "invalid atom name '" + name + "'");
  auto node = std::make_shared<Node>(Node{Op::Atom, std::move(name), {}, 1, 0, 0});
  return Formula(std::move(node));
}

Formula Formula::top() { return make(Op::True, {}); }
Formula Formula::bottom() { return make(Op::False, {}); }
Formula Formula::negation(Formula f) { return make(Op::Not, {std::move(f)}); }
Formula Formula::box(Formula f) { return make(Op::Box, {std::move(f)}); }
Formula Formula::diamond(Formula f) { return make(Op::Diamond, {std::move(f)}); }
Formula Formula::conjunction(Formula a, Formula b) { return make(Op::And, {std::move(a), std::move(b)}); }
Formula Formula::disjunction(Formula a, Formula b) { return make(Op::Or, {std::move(a), std::move(b)}); }
Formula Formula::implication(Formula a, Formula b) {
  return make(Op::Implies, {std::move(a), std::move(b)});
}
Formula Formula::biimplication(Formula a, Formula b) {
  return make(Op::Iff, {std::move(a), std::move(b)});
}

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }
std::size_t Formula::arity() const noexcept { return node_->children.size(); }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }
std::size_t Formula::modal_depth() const noexcept { return node_->modal_depth; }

const Formula& Formula::child(std::size_t i) const {
  if (i >= node_->children.size()) throw Error("bad_position", "no such child");
  return node_->children[i];
}

bool Formula::is_literal() const noexcept {
  return op() == Op::Atom || (op() == Op::Not && child(0).op() == Op::Atom);
}

bool Formula::is_modal() const noexcept {
  if (op() == Op::Box || op() == Op::Diamond) return true;
  return std::any_of(node_->children.begin(), node_->children.end(),
                     [](const Formula& c) { return c.is_modal(); });
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.size() != b.size() || a.name() != b.name()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.child(i) <=> b.child(i); c != 0) return c;
  return std::strong_ordering::equal;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (g->is_atom()) out.insert(g->name());
    for (std::size_t i = 0; i < g->arity(); ++i) stack.push_back(&g->child(i));
  }
  return out;
}

namespace {

void collect_post_order(const Formula& f, std::set<Formula>& seen, std::vector<Formula>& out) {
  if (seen.count(f)) return;
  for (std::size_t i = 0; i < f.arity(); ++i) collect_post_order(f.child(i), seen, out);
  if (seen.insert(f).second) out.push_back(f);
}

void collect_positions(const Formula& f, Path& current, std::vector<Path>& out) {
  out.push_back(current);
  for (std::size_t i = 0; i < f.arity(); ++i) {
    current.push_back(i);
    collect_positions(f.child(i), current, out);
    current.pop_back();
  }
}

Formula replace_rec(const Formula& f, const Path& path, std::size_t at, Formula replacement) {
  if (at == path.size()) return replacement;
  std::vector<Formula> children;
  for (std::size_t i = 0; i < f.arity(); ++i) children.push_back(f.child(i));
  if (path[at] >= children.size()) throw Error("bad_position", "path leaves the formula");
  children[path[at]] = replace_rec(children[path[at]], path, at + 1, std::move(replacement));
  return Formula::make(f.op(), std::move(children));
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula> seen;
  std::vector<Formula> out;
  collect_post_order(f, seen, out);
  return out;
}

const Formula& subformula_at(const Formula& f, const Path& path) {
  const Formula* g = &f;
  for (auto i : path) g = &g->child(i);
  return *g;
}

Formula replace_at(const Formula& f, const Path& path, Formula replacement) {
  return replace_rec(f, path, 0, std::move(replacement));
}

std::vector<Path> positions(const Formula& f) {
  std::vector<Path> out;
  Path current;
  collect_positions(f, current, out);
  return out;
}

std::vector<Formula> flatten(const Formula& f, Op op) {
  if (f.op() != op) return {f};
  auto out = flatten(f.lhs(), op);
  auto rest = flatten(f.rhs(), op);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

Formula conjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::top();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::conjunction(out, parts[i]);
  return out;
}

Formula disjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return Formula::bottom();
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = Formula::disjunction(out, parts[i]);
  return out;
}

}  // namespace logicbench
