#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oswr/tridiagonal.hpp"

using namespace oswr;

TEST(Thomas, IdentityReturnsRhs) {
  TridiagonalSystem sys{{0, 0, 0}, {1, 1, 1, 1}, {0, 0, 0}, {3, -1, 2.5, 7}};
  EXPECT_EQ(thomas_solve(sys), sys.rhs);
}

TEST(Thomas, HandSolvedThreeByThree) {
  TridiagonalSystem sys{{-1, -1}, {2, 2, 2}, {-1, -1}, {1, 0, 1}};
  const auto x = thomas_solve(sys);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Thomas, SingleEquation) {
  TridiagonalSystem sys{{}, {4}, {}, {2}};
  EXPECT_EQ(thomas_solve(sys), std::vector<double>{0.5});
}

TEST(Thomas, ZeroPivotRaises) {
  TridiagonalSystem first{{1}, {0, 1}, {1}, {1, 1}};
  EXPECT_THROW(thomas_solve(first), SingularityError);
  // Second pivot 1 - 1*1/1 vanishes.
  TridiagonalSystem later{{1}, {1, 1}, {1}, {1, 1}};
  EXPECT_THROW(thomas_solve(later), SingularityError);
}

TEST(Thomas, InconsistentLengthsRejected) {
  TridiagonalSystem sys{{1}, {1, 1, 1}, {1, 1}, {1, 1, 1}};
  EXPECT_THROW(thomas_solve(sys), ValidationError);
}

TEST(Thomas, ResidualOnRandomSystems) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial * 10;
    TridiagonalSystem sys;
    sys.lower.resize(n - 1);
    sys.upper.resize(n - 1);
    sys.diag.resize(n);
    sys.rhs.resize(n);
    for (auto& v : sys.lower) v = u(rng);
    for (auto& v : sys.upper) v = u(rng);
    for (auto& v : sys.diag) v = 2.5 + u(rng);
    for (auto& v : sys.rhs) v = 10 * u(rng);
    const auto x = thomas_solve(sys);
    const auto ax = sys.apply(x);
    double res = 0, norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      res = std::max(res, std::abs(ax[i] - sys.rhs[i]));
      norm = std::max(norm, std::abs(sys.rhs[i]));
    }
    EXPECT_LT(res, 1e-10 * (1 + norm));
  }
}

TEST(Thomas, KernelAllowsAliasedRhs) {
  std::vector<double> lower{-1, -1}, diag{2, 2, 2}, upper{-1, -1}, buf{1, 0, 1}, scratch(3);
  detail::thomas_kernel(lower, diag, upper, buf, buf, scratch);
  for (double v : buf) EXPECT_NEAR(v, 1.0, 1e-15);
}
