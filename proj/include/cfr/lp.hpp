#pragma once

// Dense two-phase simplex for small linear programs.
//
//   minimize c.x  subject to  a_k.x (<=, >=, =) b_k,  x >= 0
//
// Bland's rule is used for both the entering and the leaving variable, so
// the method terminates on degenerate problems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cfr/error.hpp"

namespace cfr::lp {

inline constexpr double kTolerance = 1e-9;

enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "?";
}

struct Constraint {
  std::vector<double> coeffs;
  Relation rel = Relation::kLessEqual;
  double rhs = 0.0;
};

struct Problem {
  std::size_t num_vars = 0;
  std::vector<double> cost;  // minimized
  std::vector<Constraint> constraints;

  explicit Problem(std::size_t n = 0) : num_vars(n), cost(n, 0.0) {}

  void add(std::vector<double> coeffs, Relation rel, double rhs) {
    require(coeffs.size() == num_vars, ErrorCode::kInvalidInput, "constraint has wrong width");
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& obj(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

// Minimizes cost over the current tableau. `allowed[c]` marks columns that may
// enter the basis. Returns false when unbounded.
inline bool run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<double>& cost,
                const std::vector<char>& allowed, double tol) {
  const std::size_t m = t.rows(), n = t.cols();
  // reduced costs: c_j - c_B B^-1 A_j; objective cell holds -c_B B^-1 b
  for (std::size_t c = 0; c < n; ++c) t.obj(c) = cost[c];
  t.obj(n) = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double cb = cost[basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= n; ++c) t.obj(c) -= cb * t.at(r, c);
  }
  const std::size_t max_pivots = 200 * (m + n) + 1000;
  for (std::size_t it = 0; it < max_pivots; ++it) {
    std::size_t enter = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (allowed[c] && t.obj(c) < -tol) {
        enter = c;
        break;
      }
    }
    if (enter == n) return true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r)
      if (t.at(r, enter) > tol) best = std::min(best, t.rhs(r) / t.at(r, enter));
    std::size_t leave = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (t.at(r, enter) <= tol || t.rhs(r) / t.at(r, enter) > best + tol) continue;
      if (leave == m || basis[r] < basis[leave]) leave = r;
    }
    if (leave == m) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  fail(ErrorCode::kInternal, "simplex did not terminate");
}

}  // namespace detail

inline Solution solve(const Problem& p, double tol = kTolerance) {
  const std::size_t nv = p.num_vars;
  require(p.cost.size() == nv, ErrorCode::kInvalidInput, "cost vector has wrong width");
  const std::size_t m = p.constraints.size();

  // Column layout: original vars, one slack/surplus per inequality, then one
  // artificial per >= or = row.
  std::size_t num_slack = 0, num_art = 0;
  std::vector<Relation> rel(m);
  std::vector<double> sign(m, 1.0);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = p.constraints[r];
    require(c.coeffs.size() == nv, ErrorCode::kInvalidInput, "constraint has wrong width");
    rel[r] = c.rel;
    if (c.rhs < 0) {
      sign[r] = -1.0;
      if (c.rel == Relation::kLessEqual) rel[r] = Relation::kGreaterEqual;
      else if (c.rel == Relation::kGreaterEqual) rel[r] = Relation::kLessEqual;
    }
    if (rel[r] != Relation::kEqual) ++num_slack;
    if (rel[r] != Relation::kLessEqual) ++num_art;
  }
  const std::size_t n = nv + num_slack + num_art;
  detail::Tableau t(m, n);
  std::vector<std::size_t> basis(m);
  std::size_t slack = nv, art = nv + num_slack;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = p.constraints[r];
    for (std::size_t j = 0; j < nv; ++j) t.at(r, j) = sign[r] * c.coeffs[j];
    t.rhs(r) = sign[r] * c.rhs;
    if (rel[r] == Relation::kLessEqual) {
      t.at(r, slack) = 1.0;
      basis[r] = slack++;
    } else {
      if (rel[r] == Relation::kGreaterEqual) t.at(r, slack++) = -1.0;
      t.at(r, art) = 1.0;
      basis[r] = art++;
    }
  }

  std::vector<char> allowed(n, 1);
  if (num_art > 0) {
    std::vector<double> phase1(n, 0.0);
    for (std::size_t j = nv + num_slack; j < n; ++j) phase1[j] = 1.0;
    detail::run(t, basis, phase1, allowed, tol);
    if (-t.obj(n) > tol * std::max<double>(1.0, static_cast<double>(m))) return {Status::kInfeasible, 0.0, {}};
    // Drive remaining artificials out of the basis.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < nv + num_slack) continue;
      for (std::size_t j = 0; j < nv + num_slack; ++j) {
        if (std::abs(t.at(r, j)) > tol) {
          t.pivot(r, j);
          basis[r] = j;
          break;
        }
      }
      // A row with no usable column is redundant; its artificial stays basic at 0.
    }
    for (std::size_t j = nv + num_slack; j < n; ++j) allowed[j] = 0;
  }

  std::vector<double> cost(n, 0.0);
  for (std::size_t j = 0; j < nv; ++j) cost[j] = p.cost[j];
  if (!detail::run(t, basis, cost, allowed, tol)) return {Status::kUnbounded, 0.0, {}};

  Solution s;
  s.status = Status::kOptimal;
  s.x.assign(nv, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < nv) s.x[basis[r]] = std::max(0.0, t.rhs(r));
  s.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) s.objective += p.cost[j] * s.x[j];
  return s;
}

}  // namespace cfr::lp
