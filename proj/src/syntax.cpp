#include "logicbench/syntax.hpp"

#include <map>
#include <optional>
#include <set>

#include "logicbench/error.hpp"

namespace logicbench {
namespace {

enum class Tok {
  Ident, True, False, Not, And, Or, Implies, Iff, Box, Diamond,
  LParen, RParen, LBrace, RBrace, Comma, Semicolon, Equals, Exists, Forall, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // code points
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) {
    std::size_t i = 0, cp = 0;
    static const std::vector<std::pair<std::string_view, Tok>> symbols = {
        {"<->", Tok::Iff}, {"->", Tok::Implies}, {"<>", Tok::Diamond}, {"[]", Tok::Box},
        {"~", Tok::Not},   {"!", Tok::Not},      {"&", Tok::And},     {"|", Tok::Or},
        {"(", Tok::LParen}, {")", Tok::RParen},  {"{", Tok::LBrace},  {"}", Tok::RBrace},
        {",", Tok::Comma}, {";", Tok::Semicolon}, {"=", Tok::Equals},
        {"¬", Tok::Not},   {"∧", Tok::And},      {"∨", Tok::Or},      {"→", Tok::Implies},
        {"↔", Tok::Iff},   {"□", Tok::Box},      {"◇", Tok::Diamond}, {"◊", Tok::Diamond},
        {"⊤", Tok::True},  {"⊥", Tok::False},    {"∃", Tok::Exists},  {"∀", Tok::Forall},
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        ++cp;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < text.size() && ident_char(text[j])) ++j;
        std::string word(text.substr(i, j - i));
        Tok kind = Tok::Ident;
        if (word == "true") kind = Tok::True;
        else if (word == "false") kind = Tok::False;
        else if (word == "exists") kind = Tok::Exists;
        else if (word == "forall") kind = Tok::Forall;
        tokens_.push_back({kind, word, cp});
        cp += j - i;
        i = j;
        continue;
      }
      if (c == '0' || c == '1') {
        if (i + 1 < text.size() && ident_char(text[i + 1]))
          throw ParseError("unexpected character", cp, {});
        tokens_.push_back({c == '1' ? Tok::True : Tok::False, std::string(1, c), cp});
        ++i;
        ++cp;
        continue;
      }
      bool matched = false;
      for (const auto& [sym, kind] : symbols) {
        if (text.substr(i, sym.size()) == sym) {
          tokens_.push_back({kind, std::string(sym), cp});
          i += sym.size();
          cp += code_points(sym);
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError("unexpected character", cp, {});
    }
    tokens_.push_back({Tok::End, "", cp});
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[std::min(index_++, tokens_.size() - 1)]; }

  static std::size_t code_points(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
      if ((c & 0xC0) != 0x80) ++n;
    return n;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

const std::set<std::string>& binary_followers() {
  static const std::set<std::string> s{"&", "|", "->", "<->", "end of input"};
  return s;
}

std::set<std::string> operand_starters(Logic logic) {
  std::set<std::string> s{"atom", "~", "(", "true", "false"};
  if (logic == Logic::ML) {
    s.insert("[]");
    s.insert("<>");
  }
  if (logic == Logic::FO) {
    s.erase("atom");
    s.insert("predicate");
    s.insert("term");
    s.insert("exists");
    s.insert("forall");
  }
  return s;
}

[[noreturn]] void fail(const Token& t, std::set<std::string> expected) {
  std::string what = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
  throw ParseError("unexpected " + what + " at position " + std::to_string(t.pos), t.pos, std::move(expected));
}

// Precedence-climbing parser shared by the propositional/modal and
// first-order grammars. `Node` is Formula or FoFormula.
template <typename Node>
class Parser {
 public:
  Parser(std::string_view text, Logic logic) : lex_(text), logic_(logic) {}

  Node parse_all() {
    Node f = parse_iff();
    if (lex_.peek().kind != Tok::End) {
      auto expected = binary_followers();
      fail(lex_.peek(), expected);
    }
    return f;
  }

 private:
  Node parse_iff() {
    Node lhs = parse_implies();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.next();
      lhs = make_binary(Op::Iff, lhs, parse_implies());
    }
    return lhs;
  }

  Node parse_implies() {
    Node lhs = parse_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.next();
      return make_binary(Op::Implies, lhs, parse_implies());
    }
    return lhs;
  }

  Node parse_or() {
    Node lhs = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.next();
      lhs = make_binary(Op::Or, lhs, parse_and());
    }
    return lhs;
  }

  Node parse_and() {
    Node lhs = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.next();
      lhs = make_binary(Op::And, lhs, parse_unary());
    }
    return lhs;
  }

  Node parse_unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Not:
        lex_.next();
        return make_not(parse_unary());
      case Tok::Box:
      case Tok::Diamond: {
        if (logic_ != Logic::ML)
          throw ParseError("modal operator not allowed in " + std::string(to_string(logic_)) + " formulas",
                           t.pos, operand_starters(logic_), "wrong_logic");
        Op op = t.kind == Tok::Box ? Op::Box : Op::Diamond;
        lex_.next();
        return make_modal(op, parse_unary());
      }
      case Tok::Exists:
      case Tok::Forall: {
        if (logic_ != Logic::FO)
          throw ParseError("quantifier not allowed in " + std::string(to_string(logic_)) + " formulas", t.pos,
                           operand_starters(logic_), "wrong_logic");
        bool exists = t.kind == Tok::Exists;
        lex_.next();
        const Token& var = lex_.peek();
        if (var.kind != Tok::Ident) fail(var, {"variable"});
        std::string name = lex_.next().text;
        return make_quantifier(exists, name, parse_unary());
      }
      default:
        return parse_primary();
    }
  }

  Node parse_primary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lex_.next();
        Node inner = parse_iff();
        if (lex_.peek().kind != Tok::RParen) {
          auto expected = binary_followers();
          expected.erase("end of input");
          expected.insert(")");
          fail(lex_.peek(), expected);
        }
        lex_.next();
        return inner;
      }
      case Tok::True:
        lex_.next();
        return make_constant(true);
      case Tok::False:
        lex_.next();
        return make_constant(false);
      case Tok::Ident:
        return parse_atomic();
      default:
        fail(t, operand_starters(logic_));
    }
  }

  Node parse_atomic();
  Node make_binary(Op op, Node lhs, Node rhs);
  Node make_not(Node f);
  Node make_modal(Op op, Node f);
  Node make_quantifier(bool exists, const std::string& var, Node body);
  Node make_constant(bool value);

 public:
  // Terms are shared with the clause-level parser.
  Term parse_term(bool clause_level) {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident) fail(t, {"term"});
    std::string name = lex_.next().text;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      std::vector<Term> args;
      args.push_back(parse_term(clause_level));
      while (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        args.push_back(parse_term(clause_level));
      }
      if (lex_.peek().kind != Tok::RParen) fail(lex_.peek(), {",", ")"});
      lex_.next();
      return Term::function(name, std::move(args));
    }
    if (!clause_level || is_variable_name(name)) return Term::variable(name);
    return Term::constant(name);
  }

  std::vector<Term> parse_arguments(bool clause_level) {
    std::vector<Term> args;
    if (lex_.peek().kind != Tok::LParen) return args;
    lex_.next();
    args.push_back(parse_term(clause_level));
    while (lex_.peek().kind == Tok::Comma) {
      lex_.next();
      args.push_back(parse_term(clause_level));
    }
    if (lex_.peek().kind != Tok::RParen) fail(lex_.peek(), {",", ")"});
    lex_.next();
    return args;
  }

  Literal parse_literal() {
    bool positive = true;
    while (lex_.peek().kind == Tok::Not) {
      lex_.next();
      positive = !positive;
    }
    const Token& t = lex_.peek();
    if (t.kind != Tok::Ident) fail(t, {"~", "predicate"});
    std::string name = lex_.next().text;
    return Literal{positive, name, parse_arguments(true)};
  }

  Clause parse_clause() {
    Clause c;
    if (lex_.peek().kind == Tok::LBrace) {
      lex_.next();
      if (lex_.peek().kind == Tok::RBrace) {
        lex_.next();
        return c;
      }
      c.insert(parse_literal());
      while (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        c.insert(parse_literal());
      }
      if (lex_.peek().kind != Tok::RBrace) fail(lex_.peek(), {",", "}"});
      lex_.next();
      return c;
    }
    c.insert(parse_literal());
    while (lex_.peek().kind == Tok::Or) {
      lex_.next();
      c.insert(parse_literal());
    }
    return c;
  }

  Lexer& lexer() { return lex_; }

 private:
  Lexer lex_;
  Logic logic_;
};

template <>
Formula Parser<Formula>::parse_atomic() {
  std::string name = lex_.next().text;
  return Formula::atom(name);
}

template <>
Formula Parser<Formula>::make_binary(Op op, Formula lhs, Formula rhs) {
  return Formula::make(op, {std::move(lhs), std::move(rhs)});
}
template <>
Formula Parser<Formula>::make_not(Formula f) { return Formula::negation(std::move(f)); }
template <>
Formula Parser<Formula>::make_modal(Op op, Formula f) { return Formula::make(op, {std::move(f)}); }
template <>
Formula Parser<Formula>::make_quantifier(bool, const std::string&, Formula) {
  throw Error("wrong_logic", "quantifier in propositional formula");
}
template <>
Formula Parser<Formula>::make_constant(bool value) { return value ? Formula::top() : Formula::bottom(); }

FoOp fo_op(Op op) {
  switch (op) {
    case Op::And: return FoOp::And;
    case Op::Or: return FoOp::Or;
    case Op::Implies: return FoOp::Implies;
    default: return FoOp::Iff;
  }
}

template <>
FoFormula Parser<FoFormula>::parse_atomic() {
  const Token& t = lex_.peek();
  if (lex_.peek(1).kind == Tok::LParen) {
    std::string name = lex_.next().text;
    return FoFormula::predicate(name, parse_arguments(false));
  }
  if (lex_.peek(1).kind == Tok::Equals) {
    Term lhs = parse_term(false);
    lex_.next();
    Term rhs = parse_term(false);
    return FoFormula::equals(std::move(lhs), std::move(rhs));
  }
  Token after = lex_.peek(1);
  lex_.next();
  (void)t;
  fail(after, {"(", "="});
}

template <>
FoFormula Parser<FoFormula>::make_binary(Op op, FoFormula lhs, FoFormula rhs) {
  return FoFormula::binary(fo_op(op), std::move(lhs), std::move(rhs));
}
template <>
FoFormula Parser<FoFormula>::make_not(FoFormula f) { return FoFormula::negation(std::move(f)); }
template <>
FoFormula Parser<FoFormula>::make_modal(Op, FoFormula) {
  throw Error("wrong_logic", "modal operator in first-order formula");
}
template <>
FoFormula Parser<FoFormula>::make_quantifier(bool exists, const std::string& var, FoFormula body) {
  return FoFormula::quantifier(exists ? FoOp::Exists : FoOp::Forall, var, std::move(body));
}
template <>
FoFormula Parser<FoFormula>::make_constant(bool value) {
  return value ? FoFormula::top() : FoFormula::bottom();
}

void require_nonempty(std::string_view text) {
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return;
  throw ParseError("empty input", 0, {"formula"});
}

template <typename T>
void expect_end(Lexer& lex) {
  if (lex.peek().kind != Tok::End) fail(lex.peek(), {"end of input"});
}

// ---------------------------------------------------------------- rendering

int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not:
    case Op::Box:
    case Op::Diamond: return 5;
    default: return 6;
  }
}

int precedence(FoOp op) {
  switch (op) {
    case FoOp::Iff: return 1;
    case FoOp::Implies: return 2;
    case FoOp::Or: return 3;
    case FoOp::And: return 4;
    case FoOp::Not:
    case FoOp::Exists:
    case FoOp::Forall: return 5;
    default: return 6;
  }
}

std::string_view symbol(Op op, Notation n) {
  bool u = n == Notation::Unicode;
  switch (op) {
    case Op::True: return u ? "⊤" : "1";
    case Op::False: return u ? "⊥" : "0";
    case Op::Not: return u ? "¬" : "~";
    case Op::Box: return u ? "□" : "[]";
    case Op::Diamond: return u ? "◇" : "<>";
    case Op::And: return u ? " ∧ " : " & ";
    case Op::Or: return u ? " ∨ " : " | ";
    case Op::Implies: return u ? " → " : " -> ";
    case Op::Iff: return u ? " ↔ " : " <-> ";
    default: return "";
  }
}

class Renderer {
 public:
  Renderer(Notation n, const Path* target) : notation_(n), target_(target) {}

  void formula(const Formula& f, Path& path) {
    bool hit = target_ && *target_ == path;
    if (hit) span_.first = cp_;
    switch (f.op()) {
      case Op::Atom:
        emit(f.name());
        break;
      case Op::True:
      case Op::False:
        emit(symbol(f.op(), notation_));
        break;
      case Op::Not:
      case Op::Box:
      case Op::Diamond:
        emit(symbol(f.op(), notation_));
        child(f, 0, path, precedence(f.operand().op()) < precedence(f.op()));
        break;
      default: {
        int p = precedence(f.op());
        bool right_assoc = f.op() == Op::Implies;
        int pl = precedence(f.lhs().op());
        int pr = precedence(f.rhs().op());
        child(f, 0, path, pl < p || (pl == p && right_assoc));
        emit(symbol(f.op(), notation_));
        child(f, 1, path, pr < p || (pr == p && !right_assoc));
      }
    }
    if (hit) span_.second = cp_;
  }

  void emit(std::string_view s) {
    out_ += s;
    cp_ += Lexer::code_points(s);
  }

  std::string out_;
  std::pair<std::size_t, std::size_t> span_{0, 0};

 private:
  void child(const Formula& f, std::size_t i, Path& path, bool parens) {
    if (parens) emit("(");
    path.push_back(i);
    formula(f.child(i), path);
    path.pop_back();
    if (parens) emit(")");
  }

  Notation notation_;
  const Path* target_;
  std::size_t cp_ = 0;
};

void render_fo(const FoFormula& f, Notation n, std::string& out) {
  bool u = n == Notation::Unicode;
  auto wrap = [&](const FoFormula& c, bool parens) {
    if (parens) out += "(";
    render_fo(c, n, out);
    if (parens) out += ")";
  };
  switch (f.op()) {
    case FoOp::Pred:
      out += f.name();
      if (!f.terms().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ", ";
          out += render(f.terms()[i]);
        }
        out += ")";
      }
      return;
    case FoOp::Equals:
      out += render(f.terms()[0]) + " = " + render(f.terms()[1]);
      return;
    case FoOp::True: out += u ? "⊤" : "true"; return;
    case FoOp::False: out += u ? "⊥" : "false"; return;
    case FoOp::Not:
      out += u ? "¬" : "~";
      wrap(f.body(), precedence(f.body().op()) < 5);
      return;
    case FoOp::Exists:
    case FoOp::Forall:
      if (u) out += (f.op() == FoOp::Exists ? "∃" : "∀") + f.name() + " ";
      else out += (f.op() == FoOp::Exists ? "exists " : "forall ") + f.name() + " ";
      wrap(f.body(), precedence(f.body().op()) < 5);
      return;
    default: {
      Op op = f.op() == FoOp::And ? Op::And : f.op() == FoOp::Or ? Op::Or : f.op() == FoOp::Implies ? Op::Implies : Op::Iff;
      int p = precedence(f.op());
      bool right_assoc = op == Op::Implies;
      int pl = precedence(f.child(0).op());
      int pr = precedence(f.child(1).op());
      wrap(f.child(0), pl < p || (pl == p && right_assoc));
      out += symbol(op, n);
      wrap(f.child(1), pr < p || (pr == p && !right_assoc));
    }
  }
}

}  // namespace

bool is_variable_name(std::string_view name) {
  if (name.empty() || name[0] < 'u' || name[0] > 'z') return false;
  for (std::size_t i = 1; i < name.size(); ++i)
    if (!((name[i] >= '0' && name[i] <= '9') || name[i] == '_')) return false;
  return true;
}

Formula parse_formula(std::string_view text, Logic logic) {
  if (logic == Logic::FO) throw Error("wrong_logic", "use parse_fo_formula for first-order text");
  require_nonempty(text);
  return Parser<Formula>(text, logic).parse_all();
}

FoFormula parse_fo_formula(std::string_view text) {
  require_nonempty(text);
  return Parser<FoFormula>(text, Logic::FO).parse_all();
}

Term parse_term(std::string_view text) {
  require_nonempty(text);
  Parser<Formula> p(text, Logic::FO);
  Term t = p.parse_term(true);
  expect_end<Term>(p.lexer());
  return t;
}

Literal parse_literal(std::string_view text) {
  require_nonempty(text);
  Parser<Formula> p(text, Logic::FO);
  Literal l = p.parse_literal();
  expect_end<Literal>(p.lexer());
  return l;
}

Clause parse_clause(std::string_view text) {
  require_nonempty(text);
  Parser<Formula> p(text, Logic::FO);
  Clause c = p.parse_clause();
  expect_end<Clause>(p.lexer());
  return c;
}

ClauseSet parse_clause_set(std::string_view text) {
  Parser<Formula> p(text, Logic::FO);
  ClauseSet out;
  auto& lex = p.lexer();
  while (lex.peek().kind != Tok::End) {
    out.insert(p.parse_clause());
    if (lex.peek().kind == Tok::Semicolon) lex.next();
  }
  return out;
}

Substitution parse_substitution(std::string_view text) {
  Parser<Formula> p(text, Logic::FO);
  auto& lex = p.lexer();
  Substitution out;
  if (lex.peek().kind != Tok::LBrace) fail(lex.peek(), {"{"});
  lex.next();
  while (lex.peek().kind != Tok::RBrace) {
    const Token& v = lex.peek();
    if (v.kind != Tok::Ident) fail(v, {"variable", "}"});
    std::string var = lex.next().text;
    if (lex.peek().kind != Tok::Implies) fail(lex.peek(), {"->"});
    lex.next();
    out[var] = p.parse_term(true);
    if (lex.peek().kind == Tok::Comma) lex.next();
    else if (lex.peek().kind != Tok::RBrace) fail(lex.peek(), {",", "}"});
  }
  lex.next();
  expect_end<Substitution>(lex);
  return out;
}

std::string render(const Formula& f, Notation notation) {
  Renderer r(notation, nullptr);
  Path path;
  r.formula(f, path);
  return r.out_;
}

std::pair<std::size_t, std::size_t> locate(const Formula& f, const Path& path, Notation notation) {
  subformula_at(f, path);  // validates the path
  Renderer r(notation, &path);
  Path current;
  r.formula(f, current);
  return r.span_;
}

std::string render(const FoFormula& f, Notation notation) {
  std::string out;
  render_fo(f, notation, out);
  return out;
}

std::string render(const Term& t) {
  if (t.args.empty()) return t.name;
  std::string out = t.name + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += render(t.args[i]);
  }
  return out + ")";
}

std::string render(const Literal& l) {
  std::string out = l.positive ? "" : "~";
  out += l.predicate;
  if (!l.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      if (i) out += ", ";
      out += render(l.args[i]);
    }
    out += ")";
  }
  return out;
}

std::string render(const Clause& c) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : c) {
    if (!first) out += ", ";
    first = false;
    out += render(l);
  }
  return out + "}";
}

std::string render(const ClauseSet& s) {
  std::string out;
  for (const auto& c : s) {
    if (!out.empty()) out += " ";
    out += render(c);
  }
  return out;
}

std::string render(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, term] : s) {
    if (!first) out += ", ";
    first = false;
    out += var + " -> " + render(term);
  }
  return out + "}";
}

}  // namespace logicbench
