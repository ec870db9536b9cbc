#pragma once

// Formulas of the propositional modal language: atoms, falsum, the three
// binary connectives and one box/diamond pair. Negation is not a node;
// ~A is stored as A -> _|_.

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hok/error.hpp"

namespace hok {

enum class Connective { kAtom, kBottom, kAnd, kOr, kImplies, kBox, kDiamond };

class Formula {
 public:
  static Formula atom(std::string name) {
    return Formula(std::make_shared<Node>(Node{Connective::kAtom, std::move(name), {}, {}}));
  }
  static Formula bottom() {
    static const Formula kBottom(std::make_shared<Node>(Node{Connective::kBottom, {}, {}, {}}));
    return kBottom;
  }
  static Formula conj(Formula l, Formula r) { return binary(Connective::kAnd, std::move(l), std::move(r)); }
  static Formula disj(Formula l, Formula r) { return binary(Connective::kOr, std::move(l), std::move(r)); }
  static Formula implies(Formula l, Formula r) {
    return binary(Connective::kImplies, std::move(l), std::move(r));
  }
  static Formula box(Formula f) { return unary(Connective::kBox, std::move(f)); }
  static Formula diamond(Formula f) { return unary(Connective::kDiamond, std::move(f)); }
  static Formula negation(Formula f) { return implies(std::move(f), bottom()); }
  static Formula top() { return implies(bottom(), bottom()); }

  Connective kind() const { return node_->kind; }
  bool is_atom() const { return kind() == Connective::kAtom; }
  bool is_binary() const {
    return kind() == Connective::kAnd || kind() == Connective::kOr || kind() == Connective::kImplies;
  }
  bool is_modal() const { return kind() == Connective::kBox || kind() == Connective::kDiamond; }
  // A -> _|_, printed as ~A.
  bool is_negation() const {
    return kind() == Connective::kImplies && right().kind() == Connective::kBottom;
  }

  const std::string& name() const { return node_->name; }
  const Formula& left() const { return *node_->left; }
  const Formula& right() const { return *node_->right; }
  // Operand of a box or diamond.
  const Formula& inner() const { return *node_->left; }

  const void* identity() const { return node_.get(); }

  friend int compare(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::shared_ptr<const Formula> left;
    std::shared_ptr<const Formula> right;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Formula binary(Connective c, Formula l, Formula r) {
    return Formula(std::make_shared<Node>(Node{c, {}, std::make_shared<const Formula>(std::move(l)),
                                               std::make_shared<const Formula>(std::move(r))}));
  }
  static Formula unary(Connective c, Formula f) {
    return Formula(
        std::make_shared<Node>(Node{c, {}, std::make_shared<const Formula>(std::move(f)), {}}));
  }

  std::shared_ptr<const Node> node_;
};

inline int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Connective::kAtom:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Connective::kBottom:
      return 0;
    case Connective::kBox:
    case Connective::kDiamond:
      return compare(a.inner(), b.inner());
    default:
      if (int c = compare(a.left(), b.left()); c != 0) return c;
      return compare(a.right(), b.right());
  }
}

inline bool is_atom_name(std::string_view s) {
  if (s.empty() || s.front() < 'a' || s.front() > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

namespace detail {

enum class Tok { kImplies, kOr, kAnd, kNot, kBox, kDiamond, kBottom, kTop, kLParen, kRParen, kAtom, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return text.substr(i, lit.size()) == lit; };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t pos = i + 1;
    if (starts("->")) {
      out.push_back({Tok::kImplies, "->", pos});
      i += 2;
    } else if (starts("_|_")) {
      out.push_back({Tok::kBottom, "_|_", pos});
      i += 3;
    } else if (starts("[]")) {
      out.push_back({Tok::kBox, "[]", pos});
      i += 2;
    } else if (starts("<>")) {
      out.push_back({Tok::kDiamond, "<>", pos});
      i += 2;
    } else if (c == '|') {
      out.push_back({Tok::kOr, "|", pos});
      ++i;
    } else if (c == '&') {
      out.push_back({Tok::kAnd, "&", pos});
      ++i;
    } else if (c == '~') {
      out.push_back({Tok::kNot, "~", pos});
      ++i;
    } else if (c == 'T') {
      out.push_back({Tok::kTop, "T", pos});
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::kLParen, "(", pos});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::kRParen, ")", pos});
      ++i;
    } else if (c >= 'a' && c <= 'z') {
      std::size_t j = i;
      while (j < text.size() && ((text[j] >= 'a' && text[j] <= 'z') || (text[j] >= 'A' && text[j] <= 'Z') ||
                                 (text[j] >= '0' && text[j] <= '9') || text[j] == '_'))
        ++j;
      out.push_back({Tok::kAtom, std::string(text.substr(i, j - i)), pos});
      i = j;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Tok::kEnd, "", text.size() + 1});
  return out;
}

// Recursive descent over:
//   impl := disj ("->" impl)?   disj := conj ("|" conj)*   conj := unary ("&" unary)*
//   unary := "~" unary | "[]" unary | "<>" unary | primary
//   primary := atom | "_|_" | "T" | "(" impl ")"
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    if (peek().kind == Tok::kEnd) throw SyntaxError("empty formula", peek().pos);
    Formula f = implication();
    if (peek().kind == Tok::kRParen) throw SyntaxError("unbalanced parenthesis ')'", peek().pos);
    if (peek().kind != Tok::kEnd) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::kImplies) {
      next();
      return Formula::implies(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (peek().kind == Tok::kOr) {
      next();
      lhs = Formula::disj(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (peek().kind == Tok::kAnd) {
      next();
      lhs = Formula::conj(std::move(lhs), unary());
    }
    return lhs;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::kNot:
        next();
        return Formula::negation(unary());
      case Tok::kBox:
        next();
        return Formula::box(unary());
      case Tok::kDiamond:
        next();
        return Formula::diamond(unary());
      default:
        return primary();
    }
  }

  Formula primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::kAtom:
        return Formula::atom(t.text);
      case Tok::kBottom:
        return Formula::bottom();
      case Tok::kTop:
        return Formula::top();
      case Tok::kLParen: {
        Formula inner = implication();
        if (peek().kind != Tok::kRParen) {
          if (peek().kind == Tok::kEnd) throw SyntaxError("unbalanced parenthesis '('", t.pos);
          throw SyntaxError("expected ')' but found '" + peek().text + "'", peek().pos);
        }
        next();
        return inner;
      }
      case Tok::kEnd:
        throw SyntaxError("unexpected end of formula", t.pos);
      case Tok::kRParen:
        throw SyntaxError("unbalanced parenthesis ')'", t.pos);
      default:
        throw SyntaxError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
};

inline int precedence(const Formula& f) {
  if (f.is_negation()) return 4;
  switch (f.kind()) {
    case Connective::kImplies:
      return 1;
    case Connective::kOr:
      return 2;
    case Connective::kAnd:
      return 3;
    case Connective::kBox:
    case Connective::kDiamond:
      return 4;
    default:
      return 5;
  }
}

inline void render_into(const Formula& f, std::string& out) {
  auto child = [&out](const Formula& c, bool parens) {
    if (parens) out += '(';
    render_into(c, out);
    if (parens) out += ')';
  };
  if (f.is_negation()) {
    out += '~';
    child(f.left(), precedence(f.left()) < 4);
    return;
  }
  switch (f.kind()) {
    case Connective::kAtom:
      out += f.name();
      return;
    case Connective::kBottom:
      out += "_|_";
      return;
    case Connective::kBox:
    case Connective::kDiamond:
      out += f.kind() == Connective::kBox ? "[]" : "<>";
      child(f.inner(), precedence(f.inner()) < 4);
      return;
    case Connective::kImplies:
      child(f.left(), precedence(f.left()) <= 1);
      out += " -> ";
      child(f.right(), false);
      return;
    case Connective::kOr:
      child(f.left(), precedence(f.left()) < 2);
      out += " | ";
      child(f.right(), precedence(f.right()) <= 2);
      return;
    case Connective::kAnd:
      child(f.left(), precedence(f.left()) < 3);
      out += " & ";
      child(f.right(), precedence(f.right()) <= 3);
      return;
  }
}

inline void subformulas_into(const Formula& f, std::set<Formula>& seen, std::vector<Formula>& out) {
  if (seen.contains(f)) return;
  if (f.is_binary()) {
    subformulas_into(f.left(), seen, out);
    subformulas_into(f.right(), seen, out);
  } else if (f.is_modal()) {
    subformulas_into(f.inner(), seen, out);
  }
  if (seen.insert(f).second) out.push_back(f);
}

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(detail::tokenize(text)).run(); }

// One formula per non-blank line; `#` comments are stripped.
inline std::vector<Formula> parse_formula_list(std::string_view text) {
  std::vector<Formula> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    auto toks = detail::tokenize(line);
    if (toks.size() > 1) {
      try {
        out.push_back(detail::Parser(std::move(toks)).run());
      } catch (const SyntaxError& e) {
        throw SyntaxError(e.what(), e.position(), line_no);
      }
    }
    start = end + 1;
  }
  return out;
}

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_into(f, out);
  return out;
}

// Logical symbols in f: every connective and every occurrence of _|_ count
// one; atoms count zero.
inline std::size_t complexity(const Formula& f) {
  switch (f.kind()) {
    case Connective::kAtom:
      return 0;
    case Connective::kBottom:
      return 1;
    case Connective::kBox:
    case Connective::kDiamond:
      return 1 + complexity(f.inner());
    default:
      return 1 + complexity(f.left()) + complexity(f.right());
  }
}

// Connective nesting depth; atoms and _|_ have depth 0.
inline std::size_t depth(const Formula& f) {
  if (f.is_binary()) return 1 + std::max(depth(f.left()), depth(f.right()));
  if (f.is_modal()) return 1 + depth(f.inner());
  return 0;
}

// Distinct subformulas in post-order; f itself comes last.
inline std::vector<Formula> subformulas(const Formula& f) {
  std::set<Formula> seen;
  std::vector<Formula> out;
  detail::subformulas_into(f, seen, out);
  return out;
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  for (const Formula& s : subformulas(f))
    if (s.is_atom()) out.insert(s.name());
  return out;
}

inline bool is_modal_free(const Formula& f) {
  for (const Formula& s : subformulas(f))
    if (s.is_modal()) return false;
  return true;
}

}  // namespace hok
