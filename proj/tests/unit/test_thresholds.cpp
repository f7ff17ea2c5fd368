#include "matdyn/thresholds.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace matdyn;
using namespace matdyn::testing;

namespace {
const ModelParameters P1 = ModelParameters::reference();
}

TEST_SUITE("threshold_solver")
{

TEST_CASE("critical lure values")
{
    const double v0 = yp_star(P1, 0.0);
    const double v1 = yp_star(P1, 0.1);
    CHECK(close_rel(v0, frozen::kYpStar0, 1e-12));
    CHECK(close_rel(v1, frozen::kYpStar01, 1e-12));
    CHECK(std::abs(v0 - 5673.0) <= 1.0);
    CHECK(std::abs(v1 - 588.0) <= 1.0);
}

TEST_CASE("critical lure is homogeneous in the carrying capacity")
{
    ModelParameters doubled = P1;
    doubled.K *= 2.0;
    CHECK(close_rel(yp_star(doubled, 0.0), 2.0 * yp_star(P1, 0.0), 1e-12));
    CHECK(close_rel(yp_star(doubled, 0.1), 2.0 * yp_star(P1, 0.1), 1e-12));
}

TEST_CASE("critical lure needs a viable, male-rich population")
{
    ModelParameters sparse = P1;
    sparse.b = 0.05;
    CHECK_THROWS_AS(yp_star(sparse, 0.0), NoThresholdError);

    ModelParameters few_males = P1;
    few_males.r = 0.999;
    CHECK_THROWS_AS(yp_star(few_males, 0.0), NoThresholdError);
}

TEST_CASE("fold lure for the equilibrium cubic")
{
    const TangencySolve s0 = yp_double_star(P1, 0.0, TangencyCurve::Psi);
    CHECK(close_rel(s0.value, frozen::kYpDoubleStar0, 1e-9));
    CHECK(close_rel(s0.tangency_I, frozen::kTangencyI0, 1e-6));
    CHECK(std::abs(s0.value - 987735.0) <= 0.001 * 987735.0);

    const TangencySolve s1 = yp_double_star(P1, 0.1, TangencyCurve::Psi);
    CHECK(close_rel(s1.value, frozen::kYpDoubleStar01, 1e-9));
    CHECK(std::abs(s1.value - 102462.0) <= 0.001 * 102462.0);
}

TEST_CASE("fold lure for the auxiliary cubic sits above, by a small margin")
{
    const TangencySolve t0 = yp_double_star(P1, 0.0, TangencyCurve::PsiTilde);
    CHECK(close_rel(t0.value, frozen::kYpDoubleStarTilde0, 1e-9));
    CHECK(close_rel(t0.tangency_I, frozen::kTangencyITilde0, 1e-6));

    const double gap = t0.value - frozen::kYpDoubleStar0;
    CHECK(gap > 0.0);
    // The margin is orders of magnitude below the folds themselves.
    CHECK(gap >= 1e4);
    CHECK(gap <= 2e5);
    CHECK(gap < 0.15 * t0.value);
}

TEST_CASE("Newton confirmation agrees with the ratio maximisation")
{
    for (double alpha : {0.0, 0.05, 0.1}) {
        for (TangencyCurve which :
             {TangencyCurve::Psi, TangencyCurve::PsiTilde}) {
            CAPTURE(alpha);
            const TangencySolve s = yp_double_star(P1, alpha, which);
            CHECK(close_rel(s.value, s.newton_value, 1e-8));
            CHECK(close_rel(s.tangency_I, s.newton_tangency_I, 1e-8));
        }
    }
}

TEST_CASE("fold bracketing: two roots just below, none just above")
{
    for (double alpha : {0.0, 0.1}) {
        CAPTURE(alpha);
        const double fold = yp_double_star(P1, alpha, TangencyCurve::Psi).value;
        CHECK(md_equilibria(P1, ControlSettings{fold * (1.0 - 1e-4), alpha})
                  .size() == 2);
        CHECK(md_equilibria(P1, ControlSettings{fold * (1.0 + 1e-4), alpha})
                  .empty());

        const double fold_t =
            yp_double_star(P1, alpha, TangencyCurve::PsiTilde).value;
        CHECK(tilde_equilibria(P1,
                               ControlSettings{fold_t * (1.0 - 1e-4), alpha})
                  .size() == 2);
        CHECK(tilde_equilibria(P1,
                               ControlSettings{fold_t * (1.0 + 1e-4), alpha})
                  .empty());
    }
}

TEST_CASE("sweep over the trapping rate")
{
    const std::vector<double> grid{0.0, 0.025, 0.05, 0.075, 0.1, 0.125,
                                   0.15, 0.175, 0.2};
    const auto rows = threshold_sweep(P1, grid);
    REQUIRE(rows.size() == grid.size());
    for (const ThresholdRow& row : rows) {
        CAPTURE(row.alpha);
        CHECK(row.ok);
        CHECK(row.yp_star < row.yp_dstar);
        CHECK(row.yp_dstar < row.yp_dstar_tilde);
        // Eq-structure: the critical lure scales exactly with 1/(mu_M+a).
        CHECK(close_rel(row.yp_star * (P1.mu_M + row.alpha),
                        rows[0].yp_star * P1.mu_M, 1e-10));
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].yp_star < rows[i - 1].yp_star);
        CHECK(rows[i].yp_dstar < rows[i - 1].yp_dstar);
        CHECK(rows[i].yp_dstar_tilde < rows[i - 1].yp_dstar_tilde);
    }

    // Adding a 0.1/day trap kill cuts both lure thresholds by about 90%.
    const ThresholdRow& a0 = rows[0];
    const ThresholdRow& a01 = rows[4];
    CHECK(close_rel(a01.yp_star / a0.yp_star, frozen::kTrapLeverage, 1e-6));
    CHECK(close_rel(a01.yp_dstar / a0.yp_dstar, frozen::kTrapLeverage, 1e-6));
}

TEST_CASE("degenerate geometry is reported, sweep keeps going")
{
    ModelParameters bad = P1;
    bad.gamma = 0.01;
    bad.r = 0.99;
    CHECK_THROWS_AS(yp_double_star(bad, 0.0, TangencyCurve::Psi),
                    NoThresholdError);

    const std::vector<double> grid{0.0, 0.1};
    const auto rows = threshold_sweep(bad, grid);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].ok);
    CHECK_FALSE(rows[1].ok);
    CHECK_FALSE(rows[0].message.empty());
}

}
