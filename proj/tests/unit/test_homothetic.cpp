#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "abrade/homothetic.hpp"
#include "abrade/geometry.hpp"

using namespace abrade;

namespace {

// Bisection on branch existence, an implementation-independent check of the
// fold location.
double fold_by_bisection(int n) {
  double lo = 1e-9, hi = 1.0;
  REQUIRE_FALSE(solve_alpha(n, hi).size() > 0);
  REQUIRE(solve_alpha(n, lo).size() > 0);
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (solve_alpha(n, mid).empty() ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("homothetic residual roots for the diluted triangle") {
  CHECK(std::abs(homothetic_residual(3, 0.094325023463309121, 0.1)) < 1e-6);
  CHECK(std::abs(homothetic_residual(3, 0.4383743108499597, 0.1)) < 1e-6);
  CHECK_THROWS_AS(homothetic_residual(3, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("branch roots and their stability") {
  SECTION("two roots below the fold") {
    const auto roots = solve_alpha(3, 0.1);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first == Catch::Approx(0.094325023463309121).epsilon(1e-10));
    CHECK(roots[0].second == Stability::Stable);
    CHECK(roots[1].first == Catch::Approx(0.4383743108499597).epsilon(1e-10));
    CHECK(roots[1].second == Stability::Unstable);
    // linearized ray-flow slopes behind the classification
    CHECK(homothetic_residual_slope(3, roots[0].first, 0.1) == Catch::Approx(3.647).margin(0.01));
    CHECK(homothetic_residual_slope(3, roots[1].first, 0.1) == Catch::Approx(-0.785).margin(0.01));
  }
  SECTION("no roots above the fold") {
    CHECK(solve_alpha(3, 0.5).empty());
  }
  SECTION("pure self-dual evolution is never homothetic for low fold counts") {
    CHECK(solve_alpha(3, 1.0).empty());
    CHECK(solve_alpha(4, 1.0).empty());
  }
  SECTION("heavy dilution drives the stable ray to the sharp polygon") {
    const double p = 1e-6;
    const auto roots = solve_alpha(3, p);
    REQUIRE(roots.size() == 2);
    const auto pc = polygon_constants(3);
    CHECK(roots[0].first == Catch::Approx(p * pc.k / (2.0 * -pc.c)).epsilon(1e-3));
    CHECK(roots[0].first < 1e-5);
  }
  SECTION("every returned root satisfies the residual bound") {
    for (int n : {3, 4, 5, 8})
      for (double p : {0.2, 0.5, 0.9}) {
        const double frac_p = p * fold_point(n);
        for (const auto& [alpha, st] : solve_alpha(n, frac_p))
          CHECK(std::abs(homothetic_residual(n, alpha, frac_p)) <= 1e-12);
      }
  }
  SECTION("rejects dilution outside (0, 1]") {
    CHECK_THROWS_AS(solve_alpha(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_alpha(3, 1.2), std::invalid_argument);
  }
}

TEST_CASE("fold points") {
  SECTION("triangle fold, three routes") {
    const double fold = fold_point(3);
    CHECK(fold == Catch::Approx(0.19134599614108547).epsilon(1e-12));  // pinned
    CHECK(fold == Catch::Approx(0.19135).margin(1e-4));
    CHECK(fold == Catch::Approx(fold_by_bisection(3)).margin(1e-9));
    const auto pc = polygon_constants(3);
    CHECK(fold == Catch::Approx(-pc.c / std::pow(1.0 + std::sqrt(pc.k), 2)).epsilon(1e-13));
  }
  SECTION("strictly decreasing in the fold count") {
    double prev = fold_point(3);
    for (int n = 4; n <= 10; ++n) {
      const double cur = fold_point(n);
      CHECK(cur < prev);
      prev = cur;
    }
    CHECK(fold_point(10) == Catch::Approx(0.012649830104804504).epsilon(1e-12));  // pinned
    CHECK(fold_point(10) < fold_point(5));
  }
  SECTION("existence flips exactly at the fold") {
    for (int n : {3, 5, 8}) {
      const double fold = fold_point(n);
      CHECK(solve_alpha(n, fold - 1e-6).size() == 2);
      CHECK(solve_alpha(n, fold + 1e-6).empty());
    }
  }
}

TEST_CASE("branch diagram emission") {
  SECTION("both branches below the fold") {
    const auto points = branch_diagram({3}, {0.05, 0.1, 0.15});
    REQUIRE(points.size() == 6);
    int stable = 0;
    for (const auto& bp : points) {
      if (bp.stability == Stability::Stable) ++stable;
      CHECK(std::abs(homothetic_residual(bp.n, bp.alpha, bp.p)) <= 1e-12);
      CHECK(bp.alpha > 0.0);
      CHECK(bp.alpha <= 0.5 + 1e-12);
    }
    CHECK(stable == 3);
  }
  SECTION("empty above the fold") {
    CHECK(branch_diagram({3}, {0.25}).empty());
  }
  SECTION("the stable branch rises with dilution probability") {
    const std::vector<double> grid{0.02, 0.05, 0.08, 0.11, 0.14, 0.17};
    const auto points = branch_diagram({3}, grid);
    double prev = -1.0;
    for (const auto& bp : points)
      if (bp.stability == Stability::Stable) {
        CHECK(bp.alpha > prev);
        prev = bp.alpha;
      }
  }
  SECTION("rejects a non-ascending grid") {
    CHECK_THROWS_AS(branch_diagram({3}, {0.1, 0.05}), std::invalid_argument);
    CHECK_THROWS_AS(branch_diagram({3}, {0.0, 0.1}), std::invalid_argument);
  }
}
