#include "tnsharp/cnf.hpp"

#include <cctype>

namespace tnsharp {

std::uint32_t BoolExpr::add_var(Var v) {
  if (v == 0) throw InvalidArgument("variables are numbered from 1");
  nodes_.push_back(Node{ExprKind::Var, v, {}});
  finished_ = false;
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t BoolExpr::add_not(std::uint32_t child) { return add_gate(ExprKind::Not, {child}); }

std::uint32_t BoolExpr::add_gate(ExprKind kind, std::vector<std::uint32_t> children) {
  if (kind == ExprKind::Var) throw InvalidArgument("use add_var for leaves");
  if (kind == ExprKind::Not && children.size() != 1) throw InvalidArgument("NOT takes exactly one operand");
  if (kind != ExprKind::Not && children.size() < 2) throw InvalidArgument("AND/OR need at least two operands");
  for (auto c : children) {
    if (c >= nodes_.size()) throw InvalidArgument("child index out of range");
  }
  nodes_.push_back(Node{kind, 0, std::move(children)});
  finished_ = false;
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void BoolExpr::finish(std::uint32_t root, Var num_vars) {
  if (root >= nodes_.size()) throw InvalidArgument("root index out of range");
  std::vector<std::uint32_t> parents(nodes_.size(), 0);
  Var max_var = 0;
  std::vector<std::uint32_t> stack{root};
  std::size_t reached = 0;
  parents[root] = 1;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    ++reached;
    const auto& n = nodes_[id];
    if (n.kind == ExprKind::Var) max_var = std::max(max_var, n.var);
    for (auto c : n.children) {
      if (++parents[c] > 1) throw InvalidArgument("expression is not a tree (shared subexpression)");
      stack.push_back(c);
    }
  }
  if (reached != nodes_.size()) throw InvalidArgument("expression has nodes unreachable from the root");
  if (num_vars != 0 && num_vars < max_var) throw InvalidArgument("num_vars smaller than largest variable index");
  root_ = root;
  num_vars_ = std::max(num_vars, max_var);
  finished_ = true;
}

std::size_t BoolExpr::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.kind == ExprKind::Var;
  return n;
}

std::size_t BoolExpr::gate_count() const { return nodes_.size() - leaf_count(); }

VarProfile BoolExpr::profile() const {
  VarProfile p;
  p.occurrences.assign(std::size_t{num_vars_} + 1, 0);
  for (const auto& node : nodes_) {
    if (node.kind == ExprKind::Var) ++p.occurrences[node.var];
  }
  return p;
}

bool BoolExpr::is_read_once() const {
  auto p = profile();
  for (std::size_t v = 1; v < p.occurrences.size(); ++v) {
    if (p.occurrences[v] > 1) return false;
  }
  return true;
}

bool expr_to_cnf_readonce_check(const BoolExpr& e) { return e.is_read_once(); }

bool BoolExpr::evaluate(std::uint64_t assignment) const {
  // Iterative post-order so deep trees cannot overflow the stack.
  std::vector<std::uint8_t> value(nodes_.size(), 0);
  std::vector<std::pair<std::uint32_t, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [id, expanded] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[id];
    if (n.kind == ExprKind::Var) {
      value[id] = static_cast<std::uint8_t>((assignment >> (n.var - 1)) & 1U);
      continue;
    }
    if (!expanded) {
      stack.emplace_back(id, true);
      for (auto c : n.children) stack.emplace_back(c, false);
      continue;
    }
    switch (n.kind) {
      case ExprKind::Not:
        value[id] = !value[n.children[0]];
        break;
      case ExprKind::And: {
        std::uint8_t v = 1;
        for (auto c : n.children) v &= value[c];
        value[id] = v;
        break;
      }
      case ExprKind::Or: {
        std::uint8_t v = 0;
        for (auto c : n.children) v |= value[c];
        value[id] = v;
        break;
      }
      case ExprKind::Var:
        break;
    }
  }
  return value[root_] != 0;
}

namespace {

void print(const BoolExpr& e, std::uint32_t id, std::string& out) {
  const auto& n = e.node(id);
  switch (n.kind) {
    case ExprKind::Var:
      out += 'x';
      out += std::to_string(n.var);
      return;
    case ExprKind::Not: {
      const auto& child = e.node(n.children[0]);
      out += '!';
      const bool wrap = child.kind == ExprKind::And || child.kind == ExprKind::Or;
      if (wrap) out += '(';
      print(e, n.children[0], out);
      if (wrap) out += ')';
      return;
    }
    case ExprKind::And:
    case ExprKind::Or: {
      const char* op = n.kind == ExprKind::And ? " & " : " | ";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out += op;
        const auto& child = e.node(n.children[i]);
        // Parenthesize anything that would otherwise re-associate on parse.
        const bool wrap = child.kind == ExprKind::Or || (n.kind == ExprKind::And && child.kind == ExprKind::And);
        if (wrap) out += '(';
        print(e, n.children[i], out);
        if (wrap) out += ')';
      }
      return;
    }
  }
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  BoolExpr run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", 0);
    auto root = parse_or();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    expr_.finish(root);
    return std::move(expr_);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::uint32_t parse_or() {
    std::vector<std::uint32_t> operands{parse_and()};
    while (accept('|')) operands.push_back(parse_and());
    return operands.size() == 1 ? operands[0] : expr_.add_gate(ExprKind::Or, std::move(operands));
  }

  std::uint32_t parse_and() {
    std::vector<std::uint32_t> operands{parse_unary()};
    while (accept('&')) operands.push_back(parse_unary());
    return operands.size() == 1 ? operands[0] : expr_.add_gate(ExprKind::And, std::move(operands));
  }

  std::uint32_t parse_unary() {
    if (accept('!')) return expr_.add_not(parse_unary());
    return parse_primary();
  }

  std::uint32_t parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
    if (accept('(')) {
      auto inner = parse_or();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (text_[pos_] != 'x') throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    const std::size_t start = pos_++;
    std::uint64_t index = 0;
    std::size_t digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      index = index * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (index > UINT32_MAX) throw ParseError("variable index too large", start);
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ParseError("expected digits after 'x'", pos_);
    if (index == 0) throw ParseError("variables are numbered from 1", start);
    return expr_.add_var(static_cast<Var>(index));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  BoolExpr expr_;
};

}  // namespace

std::string BoolExpr::to_string() const {
  std::string out;
  if (!nodes_.empty()) print(*this, root_, out);
  return out;
}

BoolExpr parse_expression(std::string_view text) { return ExprParser(text).run(); }

BoolExpr formula_to_expression(const Formula& f) {
  if (f.num_clauses() == 0) throw InvalidArgument("cannot express an empty conjunction without constants");
  BoolExpr e;
  std::vector<std::uint32_t> conjuncts;
  for (const auto& clause : f.clauses()) {
    if (clause.empty()) throw InvalidArgument("cannot express an empty clause without constants");
    std::vector<std::uint32_t> lits;
    for (const auto& lit : clause) {
      auto leaf = e.add_var(lit.var);
      lits.push_back(lit.positive ? leaf : e.add_not(leaf));
    }
    conjuncts.push_back(lits.size() == 1 ? lits[0] : e.add_gate(ExprKind::Or, std::move(lits)));
  }
  auto root = conjuncts.size() == 1 ? conjuncts[0] : e.add_gate(ExprKind::And, std::move(conjuncts));
  e.finish(root, f.num_vars());
  return e;
}

}  // namespace tnsharp
