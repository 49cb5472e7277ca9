#include <gtest/gtest.h>

#include "corrlab/simplex.hpp"

using namespace corrlab::lp;

TEST(SimplexTest, SmallOptimum) {
  // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6.  Optimum at (8/5, 6/5).
  Problem p;
  p.A.resize(2, 4);
  p.A << 1, 2, 1, 0, 3, 1, 0, 1;
  p.b.resize(2);
  p.b << 4, 6;
  p.c.resize(4);
  p.c << -1, -1, 0, 0;
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x(0), 1.6, 1e-12);
  EXPECT_NEAR(r.x(1), 1.2, 1e-12);
  EXPECT_NEAR(r.objective, -2.8, 1e-12);
}

TEST(SimplexTest, DetectsInfeasibility) {
  // x + y = 1 and x + y = 2.
  Problem p;
  p.A.resize(2, 2);
  p.A << 1, 1, 1, 1;
  p.b.resize(2);
  p.b << 1, 2;
  p.c = Eigen::VectorXd::Zero(2);
  const auto r = solve(p);
  EXPECT_EQ(r.status, Status::Infeasible);
  EXPECT_NEAR(r.infeasibility, 1.0, 1e-12);
}

TEST(SimplexTest, DetectsUnboundedness) {
  // min -x s.t. x - y = 0.
  Problem p;
  p.A.resize(1, 2);
  p.A << 1, -1;
  p.b = Eigen::VectorXd::Zero(1);
  p.c.resize(2);
  p.c << -1, 0;
  EXPECT_EQ(solve(p).status, Status::Unbounded);
}

TEST(SimplexTest, HandlesRedundantRowsAndNegativeRhs) {
  Problem p;
  p.A.resize(3, 3);
  p.A << 1, 1, 1, 2, 2, 2, -1, 0, 0;
  p.b.resize(3);
  p.b << 1, 2, -0.25;
  p.c.resize(3);
  p.c << 0, 1, 2;
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x(0), 0.25, 1e-12);
  EXPECT_NEAR(r.x(1), 0.75, 1e-12);
  EXPECT_NEAR(r.objective, 0.75, 1e-12);
}

TEST(SimplexTest, RejectsBadInput) {
  Problem p;
  p.A = Eigen::MatrixXd::Ones(2, 2);
  p.b = Eigen::VectorXd::Ones(3);
  p.c = Eigen::VectorXd::Ones(2);
  EXPECT_THROW(solve(p), LpError);
  p.b = Eigen::VectorXd::Ones(2);
  p.A(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve(p), LpError);
}

TEST(SimplexTest, DegenerateProblemTerminates) {
  // Classic cycling example (Beale) in equality form with slacks.
  Problem p;
  p.A.resize(3, 7);
  p.A << 0.25, -8, -1, 9, 1, 0, 0,
         0.5, -12, -0.5, 3, 0, 1, 0,
         0, 0, 1, 0, 0, 0, 1;
  p.b.resize(3);
  p.b << 0, 0, 1;
  p.c.resize(7);
  p.c << -0.75, 20, -0.5, 6, 0, 0, 0;
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-12);
}
