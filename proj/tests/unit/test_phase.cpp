#include "matdyn/phase.hpp"

#include "matdyn/thresholds.hpp"

#include "test_support.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace matdyn;
using namespace matdyn::testing;

namespace {

const ModelParameters P1 = ModelParameters::reference();

SolverOptions long_opts(double t_end)
{
    SolverOptions opts;
    opts.t_end = t_end;
    return opts;
}

} // namespace

TEST_SUITE("phase_analysis")
{

TEST_CASE("attractor classification without control")
{
    const CatalogReport cat = equilibrium_catalog(P1, ControlSettings{});
    const AttractorResult res =
        classify_attractor(P1, {}, cat.equilibria,
                           PopulationState{100.0, 100.0, 100.0, 100.0},
                           long_opts(2000.0));
    REQUIRE(res.label.has_value());
    CHECK(*res.label == EquilibriumLabel::EE_star);
}

TEST_CASE("starting on a catalog point reports that point")
{
    const ControlSettings c{3000.0, 0.0};
    const CatalogReport cat = equilibrium_catalog(P1, c);
    for (const EquilibriumPoint& eq : cat.equilibria) {
        const AttractorResult res = classify_attractor(
            P1, c, cat.equilibria, eq.state, long_opts(500.0));
        REQUIRE(res.label.has_value());
        CHECK(*res.label == eq.label);
        CHECK(res.reached_at == 0.0);
    }
}

TEST_CASE("small populations die out under a modest lure")
{
    const ControlSettings c{5500.0, 0.0};
    const CatalogReport cat = equilibrium_catalog(P1, c);
    // Inside the order interval guaranteed by the auxiliary system.
    const AttractorResult res =
        classify_attractor(P1, c, cat.equilibria,
                           PopulationState{0.5, 1.0, 0.005, 1.0},
                           long_opts(3000.0));
    REQUIRE(res.label.has_value());
    CHECK(*res.label == EquilibriumLabel::TE);

    // A well-established population shrugs the same lure off.
    const AttractorResult big =
        classify_attractor(P1, c, cat.equilibria,
                           PopulationState{500.0, 200.0, 700.0, 800.0},
                           long_opts(3000.0));
    REQUIRE(big.label.has_value());
    CHECK(*big.label == EquilibriumLabel::EE_sharp);
}

TEST_CASE("basin cell fill rule maps the endemic point to itself")
{
    const EquilibriumPoint star = endemic_equilibrium(P1);
    const BasinGridSpec spec = BasinGridSpec::males_vs_females(
        2000.0, 2000.0, 10, 10);
    const PopulationState s = basin_cell_state(
        spec, P1, star.state.M, star.state.Y + star.state.F);
    CHECK(close_rel(s.I, star.state.I, 1e-12));
    CHECK(close_rel(s.Y, star.state.Y, 1e-12));
    CHECK(close_rel(s.F, star.state.F, 1e-12));
    CHECK(close_rel(s.M, star.state.M, 1e-12));
}

TEST_CASE("small basin grid splits between extinction and persistence")
{
    const ControlSettings c{5500.0, 0.1};
    const BasinGridSpec spec =
        BasinGridSpec::males_vs_females(30.0, 30.0, 8, 8);
    const BasinGrid grid = basin_grid(P1, c, spec, long_opts(2500.0), 2);
    REQUIRE(grid.labels.size() == 64);
    CHECK(grid.nonconvergent_fraction <= 0.05);
    const std::size_t te = grid.count(EquilibriumLabel::TE);
    const std::size_t persist = grid.count(EquilibriumLabel::EE_MD2);
    CHECK(te >= 5);
    CHECK(persist >= 5);
    CHECK(te + persist >= 60);
}

TEST_CASE("raw-coordinate grids are supported")
{
    BasinGridSpec spec;
    spec.mode = BasinGridSpec::Mode::RawPair;
    spec.coord1 = 0; // immatures
    spec.coord2 = 3; // males
    spec.min1 = 0.0;
    spec.max1 = 800.0;
    spec.min2 = 0.0;
    spec.max2 = 1500.0;
    spec.n1 = 3;
    spec.n2 = 3;
    spec.base = PopulationState{0.0, 50.0, 50.0, 0.0};

    const ControlSettings c{1.5 * frozen::kYpDoubleStar0, 0.0};
    const BasinGrid grid = basin_grid(P1, c, spec, long_opts(4000.0), 2);
    CHECK(grid.count(EquilibriumLabel::TE) == 9);
}

TEST_CASE("labels are stable under grid refinement away from the boundary")
{
    const ControlSettings c{5500.0, 0.1};
    const BasinGridSpec coarse =
        BasinGridSpec::males_vs_females(30.0, 30.0, 7, 7);
    const BasinGridSpec fine =
        BasinGridSpec::males_vs_females(30.0, 30.0, 13, 13);
    const SolverOptions opts = long_opts(2500.0);
    const BasinGrid cg = basin_grid(P1, c, coarse, opts, 2);
    const BasinGrid fg = basin_grid(P1, c, fine, opts, 2);

    for (int i = 1; i < 6; ++i) {
        for (int j = 1; j < 6; ++j) {
            const auto& centre = cg.labels[i * 7 + j];
            bool interior = centre.has_value();
            for (int di = -1; di <= 1 && interior; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (cg.labels[(i + di) * 7 + (j + dj)] != centre) {
                        interior = false;
                        break;
                    }
                }
            }
            if (interior) {
                // Fine grid point 2i,2j coincides with coarse point i,j.
                CHECK(fg.labels[(2 * i) * 13 + 2 * j] == centre);
            }
        }
    }
}

TEST_CASE("bifurcation rows mirror the catalog")
{
    const std::vector<double> grid{1000.0, 1e5, 1.2e6};
    const BifurcationCurve curve = bifurcation_curve(P1, 0.0, grid);

    std::size_t expected_rows = 0;
    for (double yp : grid) {
        const CatalogReport cat =
            equilibrium_catalog(P1, ControlSettings{yp, 0.0});
        expected_rows += cat.equilibria.size();
        for (const EquilibriumPoint& eq : cat.equilibria) {
            bool found = false;
            for (const BifurcationRow& row : curve.rows) {
                if (row.yp == yp && row.label == eq.label &&
                    row.stability == eq.stability &&
                    row.yf_value == eq.state.Y + eq.state.F) {
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }
    CHECK(curve.rows.size() == expected_rows);
}

TEST_CASE("bifurcation structure across the fold")
{
    SUBCASE("constant persistent branch below the critical lure")
    {
        const std::vector<double> grid{500.0, 2000.0, 5000.0};
        const BifurcationCurve curve = bifurcation_curve(P1, 0.0, grid);
        for (const BifurcationRow& row : curve.rows) {
            if (row.label == EquilibriumLabel::EE_sharp) {
                CHECK(close_rel(row.yf_value, frozen::kYFStar, 1e-10));
                CHECK(std::round(row.yf_value) == 1726.0);
                CHECK(row.stability == StabilityLabel::AsymptoticallyStable);
            }
        }
    }
    SUBCASE("the stable branch near the fold carries half the females")
    {
        const std::vector<double> grid{0.9999 * frozen::kYpDoubleStar0};
        const BifurcationCurve curve = bifurcation_curve(P1, 0.0, grid);
        bool found = false;
        for (const BifurcationRow& row : curve.rows) {
            if (row.label == EquilibriumLabel::EE_MD2) {
                found = true;
                const double reduction = 1.0 - row.yf_value / frozen::kYFStar;
                CHECK(close_rel(reduction, frozen::kFemaleReduction, 1e-4));
            }
        }
        CHECK(found);
    }
    SUBCASE("no positive rows beyond the fold")
    {
        const std::vector<double> grid{1.0001 * frozen::kYpDoubleStar0, 2e6};
        const BifurcationCurve curve = bifurcation_curve(P1, 0.0, grid);
        for (const BifurcationRow& row : curve.rows) {
            CHECK(row.label == EquilibriumLabel::TE);
            CHECK(row.yf_value == 0.0);
        }
    }
}

TEST_CASE("auxiliary system dominates the full system")
{
    SUBCASE("same start, bound holds over a long window")
    {
        const BoundReport rep = verify_comparison_bound(
            P1, ControlSettings{1e5, 0.0},
            PopulationState{500.0, 200.0, 700.0, 800.0}, 2000.0);
        CHECK(rep.holds);
        CHECK(rep.max_excess == 0.0);
    }
    SUBCASE("random starts and controls")
    {
        std::mt19937 rng(1001);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int setting = 0; setting < 3; ++setting) {
            const ControlSettings c{1e3 + unit(rng) * 1e6,
                                    unit(rng) * 0.2};
            for (int trial = 0; trial < 4; ++trial) {
                const PopulationState s0 = random_state(rng, 1500.0);
                const BoundReport rep =
                    verify_comparison_bound(P1, c, s0, 500.0, 128);
                CAPTURE(c.yp);
                CAPTURE(c.alpha);
                CHECK(rep.holds);
            }
        }
    }
    SUBCASE("above the auxiliary fold both systems collapse")
    {
        const ControlSettings c{1.5e6, 0.0};
        CHECK(c.yp > frozen::kYpDoubleStarTilde0);
        SolverOptions opts = long_opts(4000.0);
        const std::vector<double> grid{4000.0};
        const Trajectory aux =
            integrate(SystemVariant::AuxiliaryMonotone, P1, c,
                      PopulationState{500.0, 200.0, 700.0, 800.0}, opts,
                      grid);
        const Trajectory full =
            integrate(SystemVariant::FullControl, P1, c,
                      PopulationState{500.0, 200.0, 700.0, 800.0}, opts,
                      grid);
        REQUIRE(aux.status == SolveStatus::Ok);
        REQUIRE(full.status == SolveStatus::Ok);
        CHECK(aux.back().vec().cwiseAbs().maxCoeff() < 1e-2);
        CHECK(full.back().vec().cwiseAbs().maxCoeff() < 1e-2);
    }
}

}
