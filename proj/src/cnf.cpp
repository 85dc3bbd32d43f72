#include "tnsharp/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace tnsharp {

Literal Literal::from_dimacs(std::int64_t value) {
  if (value == 0) throw InvalidArgument("literal 0 is the clause terminator, not a variable");
  const auto magnitude = static_cast<std::uint64_t>(value < 0 ? -value : value);
  if (magnitude > UINT32_MAX) throw InvalidArgument("variable index " + std::to_string(magnitude) + " too large");
  return Literal{static_cast<Var>(magnitude), value > 0};
}

namespace {

// Sorts and deduplicates in place. Returns false for a tautology.
bool normalize_clause(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    if (clause[i].var == clause[i - 1].var) return false;
  }
  return true;
}

}  // namespace

Formula::Formula(Var num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
  clauses_.reserve(clauses.size());
  for (auto& clause : clauses) {
    for (const auto& lit : clause) {
      if (lit.var == 0 || lit.var > num_vars_) {
        throw InvalidArgument("variable index " + std::to_string(lit.var) + " out of range [1, " +
                              std::to_string(num_vars_) + "]");
      }
    }
    if (normalize_clause(clause)) {
      clauses_.push_back(std::move(clause));
    } else {
      ++dropped_tautologies_;
    }
  }
}

Formula Formula::from_dimacs_clauses(Var num_vars, const std::vector<std::vector<std::int64_t>>& clauses) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const auto& raw : clauses) {
    Clause clause;
    clause.reserve(raw.size());
    for (auto v : raw) clause.push_back(Literal::from_dimacs(v));
    out.push_back(std::move(clause));
  }
  return Formula(num_vars, std::move(out));
}

Formula Formula::with_clause(Clause clause) const {
  auto clauses = clauses_;
  clauses.push_back(std::move(clause));
  Formula out(num_vars_, std::move(clauses));
  out.dropped_tautologies_ += dropped_tautologies_;
  return out;
}

std::size_t VarProfile::total() const {
  std::size_t sum = 0;
  for (auto k : occurrences) sum += k;
  return sum;
}

std::size_t VarProfile::unused_variables() const {
  if (occurrences.empty()) return 0;
  return static_cast<std::size_t>(std::count(occurrences.begin() + 1, occurrences.end(), std::size_t{0}));
}

VarProfile var_profile(const Formula& f) {
  VarProfile p;
  p.occurrences.assign(std::size_t{f.num_vars()} + 1, 0);
  for (const auto& clause : f.clauses()) {
    for (const auto& lit : clause) ++p.occurrences[lit.var];
  }
  return p;
}

// --- DIMACS ----------------------------------------------------------------

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::int64_t parse_int(std::string_view token, std::size_t offset) {
  std::int64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("expected an integer, found '" + std::string(token) + "'", offset);
  }
  return value;
}

// Splits `line` into whitespace-separated tokens with their byte offsets.
std::vector<std::pair<std::string_view, std::size_t>> tokenize(std::string_view line, std::size_t base) {
  std::vector<std::pair<std::string_view, std::size_t>> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start), base + start);
  }
  return tokens;
}

}  // namespace

DimacsDocument parse_dimacs(std::string_view text) {
  bool have_header = false;
  std::int64_t declared_vars = 0;
  std::int64_t declared_clauses = 0;
  std::vector<std::vector<std::int64_t>> raw;
  std::vector<std::int64_t> pending;
  std::vector<std::string> warnings;

  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_start = offset;
    offset = end + 1;

    auto tokens = tokenize(line, line_start);
    if (tokens.empty()) continue;
    const auto& first = tokens.front().first;
    if (first.front() == 'c') continue;
    if (first == "%") break;  // SATLIB trailer

    if (first == "p") {
      if (have_header) throw ParseError("duplicate 'p cnf' header", tokens.front().second);
      if (tokens.size() != 4 || tokens[1].first != "cnf") {
        throw ParseError("malformed header, expected 'p cnf <vars> <clauses>'", tokens.front().second);
      }
      declared_vars = parse_int(tokens[2].first, tokens[2].second);
      declared_clauses = parse_int(tokens[3].first, tokens[3].second);
      if (declared_vars < 0 || declared_clauses < 0 || declared_vars > UINT32_MAX) {
        throw ParseError("header counts out of range", tokens.front().second);
      }
      have_header = true;
      continue;
    }

    if (!have_header) throw ParseError("clause data before 'p cnf' header", tokens.front().second);
    for (const auto& [token, pos] : tokens) {
      const std::int64_t value = parse_int(token, pos);
      if (value == 0) {
        raw.push_back(std::move(pending));
        pending.clear();
        continue;
      }
      const std::int64_t magnitude = value < 0 ? -value : value;
      if (magnitude > declared_vars) {
        throw ParseError("variable index " + std::to_string(magnitude) + " out of range (header declares " +
                             std::to_string(declared_vars) + " variables)",
                         pos);
      }
      pending.push_back(value);
    }
  }

  if (!have_header) throw ParseError("missing 'p cnf' header");
  if (!pending.empty()) {
    warnings.push_back("last clause is not terminated by 0; accepted");
    raw.push_back(std::move(pending));
  }
  if (static_cast<std::int64_t>(raw.size()) != declared_clauses) {
    warnings.push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                       std::to_string(raw.size()));
  }

  auto formula = Formula::from_dimacs_clauses(static_cast<Var>(declared_vars), raw);
  if (formula.dropped_tautologies() > 0) {
    warnings.push_back("dropped " + std::to_string(formula.dropped_tautologies()) + " tautological clause(s)");
  }
  return DimacsDocument{std::move(formula), std::move(warnings)};
}

std::string to_dimacs(const Formula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const auto& clause : f.clauses()) {
    for (const auto& lit : clause) out << lit.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace tnsharp
