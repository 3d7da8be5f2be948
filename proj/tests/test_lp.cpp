#include "cusmuda/lp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace cusmuda;
using cusmuda::reference::check_lp;

namespace {

LPProblem make(Vector c) {
  LPProblem lp;
  lp.objective = std::move(c);
  lp.eq_matrix.resize(0, lp.objective.size());
  lp.le_matrix.resize(0, lp.objective.size());
  return lp;
}

void add_le(LPProblem& lp, std::initializer_list<double> row, double rhs) {
  const Eigen::Index r = lp.le_matrix.rows();
  lp.le_matrix.conservativeResize(r + 1, lp.objective.size());
  lp.le_rhs.conservativeResize(r + 1);
  Eigen::Index j = 0;
  for (double v : row) lp.le_matrix(r, j++) = v;
  lp.le_rhs[r] = rhs;
}

void add_eq(LPProblem& lp, std::initializer_list<double> row, double rhs) {
  const Eigen::Index r = lp.eq_matrix.rows();
  lp.eq_matrix.conservativeResize(r + 1, lp.objective.size());
  lp.eq_rhs.conservativeResize(r + 1);
  Eigen::Index j = 0;
  for (double v : row) lp.eq_matrix(r, j++) = v;
  lp.eq_rhs[r] = rhs;
}

}  // namespace

TEST(SolveLp, OneVariableVertex) {
  LPProblem lp = make(Vector::Constant(1, -1.0));
  add_le(lp, {1.0}, 1.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
  EXPECT_NEAR(s.duals_le.dot(lp.le_rhs), s.objective_value, 1e-12);
}

TEST(SolveLp, ContradictoryEqualityIsInfeasible) {
  LPProblem lp = make(Vector::Zero(1));
  add_eq(lp, {1.0}, -1.0);
  const LPSolution s = solve_lp(lp);
  EXPECT_EQ(s.status, LPStatus::infeasible);
}

TEST(SolveLp, SimplexReturnsAVertexOfTheOptimalFace) {
  LPProblem lp = make(Vector::Constant(2, -1.0));
  add_le(lp, {1.0, 1.0}, 1.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
  const bool v1 = std::fabs(s.primal[0] - 1.0) < 1e-12 && std::fabs(s.primal[1]) < 1e-12;
  const bool v2 = std::fabs(s.primal[1] - 1.0) < 1e-12 && std::fabs(s.primal[0]) < 1e-12;
  EXPECT_TRUE(v1 || v2) << s.primal.transpose();
}

TEST(SolveLp, UnboundedWithDirection) {
  LPProblem lp = make(Vector::Constant(2, -1.0));
  add_le(lp, {1.0, -1.0}, 1.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::unbounded);
  ASSERT_EQ(s.certificate.size(), 2);
  EXPECT_LT(lp.objective.dot(s.certificate), 0.0);
  EXPECT_LE(lp.le_matrix.row(0).dot(s.certificate), 1e-12);
  EXPECT_GE(s.certificate.minCoeff(), -1e-12);
}

TEST(SolveLp, InfeasibleInequalitiesCarryFarkasMultipliers) {
  LPProblem lp = make(Vector::Zero(2));
  add_le(lp, {1.0, 1.0}, 1.0);
  add_le(lp, {-1.0, -1.0}, -3.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::infeasible);
  ASSERT_EQ(s.certificate.size(), 2);
}

TEST(SolveLp, FreeVariablesAndLowerBounds) {
  // min x + y, x free, y >= 2, x + y >= -1, x >= -5.
  LPProblem lp = make(Vector::Ones(2));
  lp.lower = Vector(2);
  lp.lower << -kInf, 2.0;
  add_le(lp, {-1.0, -1.0}, 1.0);
  add_le(lp, {-1.0, 0.0}, 5.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
  // The optimal face is the segment between (-3, 2) and (-5, 4).
  const bool v1 = std::fabs(s.primal[0] + 3.0) < 1e-12 && std::fabs(s.primal[1] - 2.0) < 1e-12;
  const bool v2 = std::fabs(s.primal[0] + 5.0) < 1e-12 && std::fabs(s.primal[1] - 4.0) < 1e-12;
  EXPECT_TRUE(v1 || v2) << s.primal.transpose();
}

TEST(SolveLp, UpperBoundsHaveDuals) {
  LPProblem lp = make(Vector::Constant(2, -1.0));
  lp.upper = Vector::Constant(2, 2.0);
  add_le(lp, {1.0, 2.0}, 3.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -2.5, 1e-12);
  const auto chk = check_lp(lp, s);
  EXPECT_LE(chk.gap, 1e-10);
  EXPECT_LE(chk.dual_residual, 1e-10);
}

TEST(SolveLp, InvertedBoundsAreInfeasible) {
  LPProblem lp = make(Vector::Ones(1));
  lp.lower = Vector::Constant(1, 2.0);
  lp.upper = Vector::Constant(1, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LPStatus::infeasible);
}

TEST(SolveLp, RejectsInconsistentDimensions) {
  LPProblem lp = make(Vector::Ones(2));
  lp.le_matrix = Matrix::Ones(1, 3);
  lp.le_rhs = Vector::Ones(1);
  EXPECT_THROW(solve_lp(lp), std::invalid_argument);
  LPProblem nan = make(Vector::Constant(1, std::nan("")));
  EXPECT_THROW(solve_lp(nan), std::invalid_argument);
}

TEST(SolveLp, BealeCyclingInstanceTerminates) {
  // Beale's example cycles under the textbook largest-coefficient rule.
  LPProblem lp = make((Vector(4) << -0.75, 20.0, -0.5, 6.0).finished());
  add_le(lp, {0.25, -8.0, -1.0, 9.0}, 0.0);
  add_le(lp, {0.5, -12.0, -0.5, 3.0}, 0.0);
  add_le(lp, {0.0, 0.0, 1.0, 0.0}, 1.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -1.25, 1e-12);
  const auto chk = check_lp(lp, s);
  EXPECT_EQ(chk.rank, 4);
}

TEST(SolveLp, BealeWithImmediateBlandStillOptimal) {
  LPProblem lp = make((Vector(4) << -0.75, 20.0, -0.5, 6.0).finished());
  add_le(lp, {0.25, -8.0, -1.0, 9.0}, 0.0);
  add_le(lp, {0.5, -12.0, -0.5, 3.0}, 0.0);
  add_le(lp, {0.0, 0.0, 1.0, 0.0}, 1.0);
  SimplexOptions opt;
  opt.stall_limit = 1;
  const LPSolution s = solve_lp(lp, opt);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, -1.25, 1e-12);
}

TEST(SolveLp, RedundantEqualitiesKeepDualsConsistent) {
  LPProblem lp = make((Vector(3) << 1.0, 2.0, 3.0).finished());
  add_eq(lp, {1.0, 1.0, 1.0}, 3.0);
  add_eq(lp, {2.0, 2.0, 2.0}, 6.0);
  add_eq(lp, {0.0, 0.0, 0.0}, 0.0);
  const LPSolution s = solve_lp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective_value, 3.0, 1e-12);
  const auto chk = check_lp(lp, s);
  EXPECT_LE(chk.gap, 1e-10);
  EXPECT_LE(chk.dual_residual, 1e-10);
}

TEST(SolveLp, InconsistentDependentEqualities) {
  LPProblem lp = make((Vector(3) << 1.0, 1.0, 1.0).finished());
  add_eq(lp, {1.0, 1.0, 0.0}, 1.0);
  add_eq(lp, {0.0, 1.0, 1.0}, 1.0);
  add_eq(lp, {1.0, 2.0, 1.0}, 3.0);  // sum of the first two rows has rhs 2
  const LPSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LPStatus::infeasible);
  ASSERT_EQ(s.certificate.size(), 3);
  EXPECT_LE((lp.eq_matrix.transpose() * s.certificate).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_GT(std::fabs(lp.eq_rhs.dot(s.certificate)), 0.5);
}

TEST(SolveLp, IsDeterministic) {
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const LPProblem lp = cusmuda::reference::random_lp(rng, 15, k % 2 == 0);
    const LPSolution a = solve_lp(lp), b = solve_lp(lp);
    ASSERT_EQ(a.status, b.status);
    if (a.optimal()) {
      EXPECT_EQ(a.primal, b.primal);
      EXPECT_EQ(a.duals_le, b.duals_le);
    }
  }
}

TEST(SolveLp, RandomSuiteCertificates) {
  Rng rng(2024);
  for (int k = 0; k < 200; ++k) {
    const LPProblem lp = cusmuda::reference::random_lp(rng, 30, k % 3 == 0);
    const LPSolution s = solve_lp(lp);
    ASSERT_TRUE(s.optimal()) << "instance " << k << ": " << to_string(s.status);
    const auto chk = check_lp(lp, s);
    const double scale = std::max(1.0, std::fabs(s.objective_value));
    EXPECT_LE(chk.primal_residual, 1e-8 * scale) << k;
    EXPECT_LE(chk.dual_residual, 1e-8 * scale) << k;
    EXPECT_LE(chk.gap, 1e-7 * scale) << k;
    EXPECT_EQ(chk.rank, chk.n) << k;
  }
}

TEST(DumpLp, ListsRowsAndBounds) {
  LPProblem lp = make(Vector::Ones(2));
  add_le(lp, {1.0, 0.0}, 4.0);
  add_eq(lp, {1.0, 1.0}, 2.0);
  const std::string text = dump_lp(lp);
  EXPECT_NE(text.find("e0:"), std::string::npos);
  EXPECT_NE(text.find("l0:"), std::string::npos);
  EXPECT_NE(text.find("<= 4"), std::string::npos);
}
