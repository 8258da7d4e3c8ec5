#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cfr/lp.hpp"

namespace cfr::lp {
namespace {

TEST(Simplex, TextbookMaximization) {
  // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  Problem p(2);
  p.cost = {-3, -5};
  p.add({1, 0}, Relation::kLessEqual, 4);
  p.add({0, 2}, Relation::kLessEqual, 12);
  p.add({3, 2}, Relation::kLessEqual, 18);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, -36.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
  EXPECT_NEAR(s.x[1], 6.0, 1e-9);
}

TEST(Simplex, GreaterEqualAndEquality) {
  // min x + y st x + 2y >= 4, x - y = 1  ->  x = 2, y = 1
  Problem p(2);
  p.cost = {1, 1};
  p.add({1, 2}, Relation::kGreaterEqual, 4);
  p.add({1, -1}, Relation::kEqual, 1);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
}

TEST(Simplex, NegativeRhs) {
  // min x st -x <= -3
  Problem p(1);
  p.cost = {1};
  p.add({-1}, Relation::kLessEqual, -3);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  Problem inf(1);
  inf.add({1}, Relation::kLessEqual, 1);
  inf.add({1}, Relation::kGreaterEqual, 2);
  EXPECT_EQ(solve(inf).status, Status::kInfeasible);
  Problem unb(2);
  unb.cost = {-1, 0};
  unb.add({1, -1}, Relation::kLessEqual, 1);
  EXPECT_EQ(solve(unb).status, Status::kUnbounded);
}

TEST(Simplex, DegenerateCycleExample) {
  // Beale's classic cycling instance; optimum -0.05.
  Problem p(4);
  p.cost = {-0.75, 150, -0.02, 6};
  p.add({0.25, -60, -0.04, 9}, Relation::kLessEqual, 0);
  p.add({0.5, -90, -0.02, 3}, Relation::kLessEqual, 0);
  p.add({0, 0, 1, 0}, Relation::kLessEqual, 1);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, -0.05, 1e-9);
}

TEST(Simplex, RedundantEqualities) {
  Problem p(2);
  p.cost = {1, 2};
  p.add({1, 1}, Relation::kEqual, 1);
  p.add({2, 2}, Relation::kEqual, 2);
  const auto s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
}

// Oracle: enumerate every vertex of a 3-variable polytope given by <= rows
// and nonnegativity, keeping the best feasible one.
double vertex_oracle(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs,
                     const std::vector<double>& cost) {
  std::vector<std::vector<double>> all = rows;
  std::vector<double> b = rhs;
  for (int j = 0; j < 3; ++j) {
    std::vector<double> e(3, 0.0);
    e[static_cast<std::size_t>(j)] = -1.0;
    all.push_back(e);
    b.push_back(0.0);
  }
  double best = std::numeric_limits<double>::infinity();
  const std::size_t k = all.size();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t l = j + 1; l < k; ++l) {
        double m[3][4];
        const std::size_t idx[3] = {i, j, l};
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) m[r][c] = all[idx[r]][static_cast<std::size_t>(c)];
          m[r][3] = b[idx[r]];
        }
        bool singular = false;
        for (int c = 0; c < 3 && !singular; ++c) {
          int piv = c;
          for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
          if (std::abs(m[piv][c]) < 1e-10) {
            singular = true;
            break;
          }
          for (int cc = 0; cc < 4; ++cc) std::swap(m[c][cc], m[piv][cc]);
          for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int cc = 0; cc < 4; ++cc) m[r][cc] -= f * m[c][cc];
          }
        }
        if (singular) continue;
        const double x[3] = {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
        bool ok = true;
        for (std::size_t r = 0; r < k && ok; ++r) {
          double lhs = 0.0;
          for (int c = 0; c < 3; ++c) lhs += all[r][static_cast<std::size_t>(c)] * x[c];
          ok = lhs <= b[r] + 1e-8;
        }
        if (ok) best = std::min(best, cost[0] * x[0] + cost[1] * x[1] + cost[2] * x[2]);
      }
  return best;
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coef(-1.0, 3.0);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int rep = 0; rep < 200; ++rep) {
    Problem p(3);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int j = 0; j < 3; ++j) p.cost[static_cast<std::size_t>(j)] = rep % 2 ? coef(rng) - 1.0 : small(rng);
    // a box keeps the problem bounded
    for (int j = 0; j < 3; ++j) {
      std::vector<double> e(3, 0.0);
      e[static_cast<std::size_t>(j)] = 1.0;
      rows.push_back(e);
      rhs.push_back(5.0);
    }
    for (int r = 0; r < 4; ++r) {
      std::vector<double> row(3);
      for (auto& v : row) v = rep % 2 ? coef(rng) : small(rng);
      rows.push_back(row);
      rhs.push_back(rep % 2 ? coef(rng) + 1.0 : small(rng) + 2);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) p.add(rows[r], Relation::kLessEqual, rhs[r]);
    const double want = vertex_oracle(rows, rhs, p.cost);
    const auto s = solve(p);
    if (std::isinf(want)) {
      EXPECT_EQ(s.status, Status::kInfeasible) << rep;
    } else {
      ASSERT_EQ(s.status, Status::kOptimal) << rep;
      EXPECT_NEAR(s.objective, want, 1e-7) << rep;
    }
  }
}

}  // namespace
}  // namespace cfr::lp
