#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgecolor {

using Real = long double;

enum class Sense { le, ge, eq };

struct LpTerm {
  std::size_t var;
  Real coef;
};

struct LpConstraint {
  std::string name;
  std::vector<LpTerm> terms;
  Sense sense = Sense::ge;
  Real rhs = 0;
};

/// min c.x subject to the constraints and x >= 0.
struct LpProblem {
  std::vector<std::string> var_names;
  std::vector<Real> objective;
  std::vector<LpConstraint> constraints;

  std::size_t add_var(std::string name, Real cost = 0) {
    var_names.push_back(std::move(name));
    objective.push_back(cost);
    return var_names.size() - 1;
  }
  void add_constraint(std::string name, std::vector<LpTerm> terms, Sense sense, Real rhs) {
    constraints.push_back({std::move(name), std::move(terms), sense, rhs});
  }
  std::size_t var_count() const { return var_names.size(); }
  std::size_t find_var(const std::string& name) const {
    const auto it = std::find(var_names.begin(), var_names.end(), name);
    if (it == var_names.end()) throw std::out_of_range("no LP variable named " + name);
    return static_cast<std::size_t>(it - var_names.begin());
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Real value = 0;
  std::vector<Real> x;
  std::uint64_t pivots = 0;
};

struct SimplexOptions {
  Real tolerance = 1e-9L;
  std::uint64_t max_pivots = 50'000'000;
};

namespace detail {

/// Dense tableau; column `cols` holds the right-hand side, row `rows` the
/// reduced costs (its rhs entry is minus the objective value).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0), basis_(rows) {}

  Real& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  Real at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  Real& rhs(std::size_t r) { return at(r, cols_); }
  Real& cost(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Real inv = 1 / at(pr, pc);
    Real* prow = &a_[pr * (cols_ + 1)];
    for (std::size_t c = 0; c <= cols_; ++c) prow[c] *= inv;
    prow[pc] = 1;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      Real* row = &a_[r * (cols_ + 1)];
      const Real f = row[pc];
      if (f == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0;
    }
    basis_[pr] = pc;
  }

  /// Bland's rule over columns < `allowed`. Returns optimal, unbounded or
  /// iteration_limit.
  LpStatus optimize(std::size_t allowed, const SimplexOptions& opt, std::uint64_t& pivots,
                    const std::vector<char>& live) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c)
        if (cost(c) < -opt.tolerance) {
          enter = c;
          break;
        }
      if (enter == allowed) return LpStatus::optimal;
      std::size_t leave = rows_;
      Real best = 0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (!live[r]) continue;
        const Real a = at(r, enter);
        if (a <= opt.tolerance) continue;
        const Real ratio = rhs(r) / a;
        if (leave == rows_ || ratio < best - opt.tolerance ||
            (ratio <= best + opt.tolerance && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return LpStatus::unbounded;
      if (++pivots > opt.max_pivots) return LpStatus::iteration_limit;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Real> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Two-phase primal simplex on a dense tableau with Bland's rule.
inline LpSolution solve_lp(const LpProblem& lp, const SimplexOptions& opt = {}) {
  const std::size_t n = lp.var_count();
  const std::size_t m = lp.constraints.size();
  if (lp.objective.size() != n) throw std::invalid_argument("objective size does not match variable count");

  // Normalize to rhs >= 0, then count slack/surplus and artificial columns.
  struct Row {
    std::vector<LpTerm> terms;
    Sense sense;
    Real rhs;
  };
  std::vector<Row> rows;
  rows.reserve(m);
  std::size_t slacks = 0, artificials = 0;
  for (const auto& c : lp.constraints) {
    Row r{c.terms, c.sense, c.rhs};
    for (const auto& t : r.terms)
      if (t.var >= n) throw std::invalid_argument("constraint " + c.name + " references an unknown variable");
    if (r.rhs < 0) {
      for (auto& t : r.terms) t.coef = -t.coef;
      r.rhs = -r.rhs;
      if (r.sense != Sense::eq) r.sense = r.sense == Sense::le ? Sense::ge : Sense::le;
    }
    if (r.sense != Sense::eq) ++slacks;
    if (r.sense != Sense::le) ++artificials;
    rows.push_back(std::move(r));
  }

  const std::size_t art0 = n + slacks;
  detail::Tableau tab(m, art0 + artificials);
  std::size_t next_slack = n, next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = rows[i];
    for (const auto& t : r.terms) tab.at(i, t.var) += t.coef;
    tab.rhs(i) = r.rhs;
    if (r.sense == Sense::le) {
      tab.at(i, next_slack) = 1;
      tab.basis()[i] = next_slack++;
    } else {
      if (r.sense == Sense::ge) tab.at(i, next_slack++) = -1;
      tab.at(i, next_art) = 1;
      tab.basis()[i] = next_art++;
    }
  }

  LpSolution sol;
  std::vector<char> live(m, 1);

  // Phase 1: minimize the sum of artificials.
  if (artificials > 0) {
    for (std::size_t i = 0; i < m; ++i)
      if (tab.basis()[i] >= art0)
        for (std::size_t c = 0; c <= tab.cols(); ++c)
          if (c < art0 || c == tab.cols()) tab.cost(c) -= tab.at(i, c);
    const auto st = tab.optimize(tab.cols(), opt, sol.pivots, live);
    if (st == LpStatus::iteration_limit) {
      sol.status = st;
      return sol;
    }
    if (-tab.cost(tab.cols()) > std::max<Real>(opt.tolerance, 1e-7L)) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis; rows where that fails
    // are redundant.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art0) continue;
      std::size_t pc = art0;
      for (std::size_t c = 0; c < art0; ++c)
        if (std::fabs(tab.at(i, c)) > opt.tolerance) {
          pc = c;
          break;
        }
      if (pc == art0)
        live[i] = 0;
      else
        tab.pivot(i, pc);
    }
  }

  // Phase 2 reduced costs from the original objective.
  for (std::size_t c = 0; c <= tab.cols(); ++c) tab.cost(c) = c < n ? lp.objective[c] : 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!live[i]) continue;
    const std::size_t b = tab.basis()[i];
    const Real cb = b < n ? lp.objective[b] : 0;
    if (cb == 0) continue;
    for (std::size_t c = 0; c <= tab.cols(); ++c) tab.cost(c) -= cb * tab.at(i, c);
  }
  sol.status = tab.optimize(art0, opt, sol.pivots, live);
  if (sol.status != LpStatus::optimal) return sol;

  sol.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (live[i] && tab.basis()[i] < n) sol.x[tab.basis()[i]] = tab.rhs(i);
  sol.value = 0;
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
  return sol;
}

/// Largest violation of any constraint or bound by x (0 if feasible).
inline Real max_violation(const LpProblem& lp, const std::vector<Real>& x) {
  Real worst = 0;
  for (Real v : x) worst = std::max(worst, -v);
  for (const auto& c : lp.constraints) {
    Real lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    const Real d = lhs - c.rhs;
    worst = std::max(worst, c.sense == Sense::le ? d : c.sense == Sense::ge ? -d : std::fabs(d));
  }
  return worst;
}

namespace detail {

inline std::string format_number(Real v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<Real>::max_digits10);
  os << v;
  return os.str();
}

inline void write_linear(std::ostream& os, const LpProblem& lp, const std::vector<LpTerm>& terms) {
  std::size_t on_line = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
    Real coef = t.coef;
    if (!first || coef < 0) os << (coef < 0 ? " - " : " + ");
    else os << ' ';
    coef = std::fabs(coef);
    if (coef != 1) os << format_number(coef) << ' ';
    os << lp.var_names[t.var];
    first = false;
    ++on_line;
  }
  if (terms.empty()) os << " 0 " << lp.var_names.front();
}

}  // namespace detail

/// Writes the problem in CPLEX LP text format.
inline void export_lp(const LpProblem& lp, std::ostream& os, const std::string& comment = {}) {
  if (lp.var_count() == 0) throw std::invalid_argument("cannot export an LP without variables");
  if (!comment.empty()) os << "\\ " << comment << '\n';
  os << "Minimize\n obj:";
  std::vector<LpTerm> obj;
  for (std::size_t j = 0; j < lp.var_count(); ++j)
    if (lp.objective[j] != 0) obj.push_back({j, lp.objective[j]});
  detail::write_linear(os, lp, obj);
  os << "\nSubject To\n";
  for (const auto& c : lp.constraints) {
    os << ' ' << c.name << ':';
    detail::write_linear(os, lp, c.terms);
    os << (c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ") << detail::format_number(c.rhs)
       << '\n';
  }
  os << "Bounds\n";
  for (const auto& name : lp.var_names) os << ' ' << name << " >= 0\n";
  os << "End\n";
}

inline std::string to_lp_text(const LpProblem& lp, const std::string& comment = {}) {
  std::ostringstream os;
  export_lp(lp, os, comment);
  return os.str();
}

struct LpParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads the subset of CPLEX LP format that export_lp writes: a Minimize
/// section, a Subject To section of named linear constraints, a Bounds
/// section of `name >= 0` lines, and End.
inline LpProblem read_lp(std::istream& is) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto p = line.find('\\'); p != std::string::npos) line.erase(p);
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) tokens.push_back(cur);
      cur.clear();
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        flush();
      } else if (ch == '+' || ch == '-') {
        // A sign inside a number exponent stays with the number.
        if (!cur.empty() && (cur.back() == 'e' || cur.back() == 'E') &&
            std::isdigit(static_cast<unsigned char>(cur.front()))) {
          cur += ch;
        } else {
          flush();
          tokens.emplace_back(1, ch);
        }
      } else if (ch == '<' || ch == '>' || ch == '=') {
        flush();
        std::string op(1, ch);
        if (ch != '=' && i + 1 < line.size() && line[i + 1] == '=') op += line[++i];
        if (op == "<") op = "<=";
        if (op == ">") op = ">=";
        tokens.push_back(op);
      } else if (ch == ':') {
        cur += ch;
        flush();
      } else {
        cur += ch;
      }
    }
    flush();
  }

  auto lower = [](std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  auto is_number = [](const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtold(s.c_str(), &end);
    return end == s.c_str() + s.size();
  };

  LpProblem lp;
  std::map<std::string, std::size_t> index;
  auto var = [&](const std::string& name) {
    if (is_number(name) || name.back() == ':') throw LpParseError("expected a variable name, got '" + name + "'");
    auto [it, fresh] = index.emplace(name, lp.var_count());
    if (fresh) lp.add_var(name);
    return it->second;
  };

  std::size_t pos = 0;
  auto expect = [&](const std::string& word) {
    if (pos >= tokens.size() || lower(tokens[pos]) != word) throw LpParseError("expected '" + word + "'");
    ++pos;
  };
  // Parses `[+|-] [coef] name ...` until a relational operator or a section keyword.
  auto linear = [&](std::vector<LpTerm>& out) {
    while (pos < tokens.size()) {
      const std::string t = lower(tokens[pos]);
      if (t == "<=" || t == ">=" || t == "=" || t == "subject" || t == "bounds" || t == "end") return;
      Real sign = 1;
      if (t == "+" || t == "-") {
        sign = t == "-" ? -1 : 1;
        ++pos;
      }
      if (pos >= tokens.size()) throw LpParseError("dangling sign");
      Real coef = 1;
      if (is_number(tokens[pos])) {
        coef = std::strtold(tokens[pos].c_str(), nullptr);
        ++pos;
      }
      if (pos >= tokens.size()) throw LpParseError("dangling coefficient");
      out.push_back({var(tokens[pos]), sign * coef});
      ++pos;
    }
  };

  expect("minimize");
  if (pos < tokens.size() && tokens[pos].back() == ':') ++pos;
  std::vector<LpTerm> obj;
  linear(obj);
  expect("subject");
  expect("to");
  while (pos < tokens.size() && lower(tokens[pos]) != "bounds" && lower(tokens[pos]) != "end") {
    std::string name = "c" + std::to_string(lp.constraints.size() + 1);
    if (tokens[pos].back() == ':') {
      name = tokens[pos].substr(0, tokens[pos].size() - 1);
      ++pos;
    }
    std::vector<LpTerm> terms;
    linear(terms);
    if (pos + 1 >= tokens.size()) throw LpParseError("constraint " + name + " has no right-hand side");
    const std::string op = tokens[pos++];
    Sense sense = op == "<=" ? Sense::le : op == ">=" ? Sense::ge : op == "=" ? Sense::eq : throw LpParseError("bad operator");
    Real sign = 1;
    if (tokens[pos] == "-" || tokens[pos] == "+") sign = tokens[pos++] == "-" ? -1 : 1;
    if (pos >= tokens.size() || !is_number(tokens[pos]))
      throw LpParseError("constraint " + name + " has a non-numeric right-hand side");
    const Real rhs = sign * std::strtold(tokens[pos++].c_str(), nullptr);
    // Merge repeated variables, keeping first-appearance order.
    std::map<std::size_t, std::size_t> slot;
    std::vector<LpTerm> clean;
    for (const auto& t : terms) {
      auto [it, fresh] = slot.emplace(t.var, clean.size());
      if (fresh) clean.push_back(t);
      else clean[it->second].coef += t.coef;
    }
    lp.add_constraint(name, std::move(clean), sense, rhs);
  }
  if (pos < tokens.size() && lower(tokens[pos]) == "bounds") {
    ++pos;
    while (pos < tokens.size() && lower(tokens[pos]) != "end") {
      if (pos + 2 >= tokens.size()) throw LpParseError("truncated bound");
      const std::size_t v = var(tokens[pos]);
      if (tokens[pos + 1] != ">=" || tokens[pos + 2] != "0")
        throw LpParseError("only 'name >= 0' bounds are supported (variable " + lp.var_names[v] + ")");
      pos += 3;
    }
  }
  expect("end");
  if (pos != tokens.size()) throw LpParseError("text after End");
  for (const auto& t : obj) lp.objective[t.var] += t.coef;
  return lp;
}

inline LpProblem from_lp_text(const std::string& text) {
  std::istringstream is(text);
  return read_lp(is);
}

}  // namespace edgecolor
