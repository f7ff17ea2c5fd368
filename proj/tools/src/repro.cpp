#include "experiments.hpp"

#include "csv.hpp"
#include "svg.hpp"

#include "matdyn/reproduction.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace matdyn::cli {

namespace fs = std::filesystem;

namespace {

const ModelParameters kP = ModelParameters::reference();

struct Verdict {
    bool pass = true;
    std::ostringstream text;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        text << "  [" << (ok ? "ok" : "FAIL") << "] " << what << "\n";
    }
    void note(const std::string& what) { text << "  " << what << "\n"; }
};

std::string join_dir(const std::string& dir, const std::string& name)
{
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(lo + (hi - lo) * i / (n - 1.0));
    }
    return v;
}

std::string fmt(double v, int prec = 6)
{
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

// --- individual reproductions -------------------------------------------

Verdict repro_n0(const std::string&, bool, unsigned, std::ostream&)
{
    Verdict v;
    const ReproductionReport rep = reproduction_report(kP);
    v.note("offspring number = " + fmt(rep.N0, 10) + " (reported as " +
           fmt(std::trunc(rep.N0), 3) + ")");
    v.check(std::trunc(rep.N0) == 122.0, "headline value 122");
    v.check(std::abs(rep.N0 - rep.N0_ngm) <= 1e-10 * rep.N0,
            "closed form and next-generation route agree to 1e-10");
    return v;
}

Verdict repro_ee_star(const std::string&, bool, unsigned, std::ostream&)
{
    Verdict v;
    const EquilibriumPoint star = endemic_equilibrium(kP);
    v.note("endemic equilibrium = (" + fmt(star.state.I, 10) + ", " +
           fmt(star.state.Y, 10) + ", " + fmt(star.state.F, 10) + ", " +
           fmt(star.state.M, 10) + ")");
    v.check(std::round(star.state.I) == 992.0 &&
                std::round(star.state.Y) == 319.0 &&
                std::round(star.state.F) == 1407.0 &&
                std::round(star.state.M) == 1498.0,
            "rounds to (992, 319, 1407, 1498)");
    v.check(star.residual <= 1e-9 * kP.K, "residual below 1e-9 * K");
    return v;
}

Verdict trajectories_to(const ControlSettings& c, double t_end,
                        EquilibriumLabel expected, const std::string& dir,
                        bool svg, const std::string& stem)
{
    Verdict v;
    const CatalogReport cat = equilibrium_catalog(kP, c);
    SolverOptions opts;
    opts.t_end = t_end;
    opts.h_max = 250.0;
    AttractorOptions aopts;
    aopts.sample_spacing = std::max(5.0, t_end / 4000.0);

    SvgPlot plot("Trajectories", "M", "Y + F");
    CsvWriter csv(join_dir(dir, stem + ".csv"),
                  {"start_index", "t", "I", "Y", "F", "M", "regime"});

    int reached = 0;
    const auto starts = repro_initial_conditions(kP);
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const AttractorResult res =
            classify_attractor(kP, c, cat.equilibria, starts[k], opts, aopts);
        const bool ok = res.label.has_value() && *res.label == expected;
        reached += ok ? 1 : 0;
        if (!ok) {
            v.note("start " + std::to_string(k) + " -> " +
                   (res.label ? to_string(*res.label)
                              : ("nonconvergent: " + res.diagnostic)));
        }

        const auto grid = linspace(0.0, t_end, 160);
        const Trajectory traj = integrate(SystemVariant::FullControl, kP, c,
                                          starts[k], opts, grid);
        SvgPlot::Points pts;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            const PopulationState& s = traj.states[i];
            csv.row({std::to_string(k), format_full(traj.times[i]),
                     format_full(s.I), format_full(s.Y), format_full(s.F),
                     format_full(s.M), to_string(classify_regime(kP, c, s))});
            pts.emplace_back(s.M, s.Y + s.F);
        }
        plot.line(pts, ok ? "#1f77b4" : "#d62728", false,
                  k == 0 ? "trajectory" : "");
        plot.scatter({{starts[k].M, starts[k].Y + starts[k].F}}, "#222222",
                     3.0, k == 0 ? "start" : "");
    }
    for (const EquilibriumPoint& eq : cat.equilibria) {
        if (eq.stability == StabilityLabel::AsymptoticallyStable) {
            plot.scatter({{eq.state.M, eq.state.Y + eq.state.F}}, "#2ca02c",
                         5.0, to_string(eq.label));
        }
    }
    if (svg) {
        plot.write(join_dir(dir, stem + ".svg"));
    }

    v.check(reached == static_cast<int>(starts.size()),
            "all " + std::to_string(starts.size()) + " starts reach " +
                to_string(expected));
    return v;
}

Verdict repro_fig3(const std::string& dir, bool svg, unsigned, std::ostream&)
{
    return trajectories_to(ControlSettings{0.0, 0.0}, 2500.0,
                           EquilibriumLabel::EE_star, dir, svg,
                           "fig3_trajectories");
}

Verdict repro_fig6(const std::string& dir, bool svg, unsigned, std::ostream&)
{
    Verdict v;
    ExperimentConfig config;
    config.experiment = ExperimentKind::Bifurcation;
    config.output.dir = dir;
    config.output.svg = svg;
    config.bifurcation.alpha = 0.0;
    config.bifurcation.yp_count = 70;
    run(config);

    const double critical = yp_star(kP, 0.0);
    const double fold = yp_double_star(kP, 0.0, TangencyCurve::Psi).value;
    v.note("critical lure " + fmt(critical, 8) + ", fold lure " +
           fmt(fold, 8));

    // Branch structure along the curve.
    const EquilibriumPoint star = endemic_equilibrium(kP);
    const double natural = star.state.Y + star.state.F;
    bool flat_branch_ok = true;
    for (double yp : {0.2 * critical, 0.6 * critical, 0.95 * critical}) {
        const CatalogReport cat =
            equilibrium_catalog(kP, ControlSettings{yp, 0.0});
        bool found = false;
        for (const EquilibriumPoint& eq : cat.equilibria) {
            if (eq.label == EquilibriumLabel::EE_sharp) {
                found = true;
                flat_branch_ok =
                    flat_branch_ok &&
                    std::abs(eq.state.Y + eq.state.F - natural) <
                        1e-9 * natural &&
                    eq.stability == StabilityLabel::AsymptoticallyStable;
            }
        }
        flat_branch_ok = flat_branch_ok && found;
    }
    v.check(flat_branch_ok,
            "constant stable branch at the natural female level below the "
            "critical lure");

    bool two_branch_ok = true;
    for (double yp : {2.0 * critical, 0.5 * fold, 0.99 * fold}) {
        const CatalogReport cat =
            equilibrium_catalog(kP, ControlSettings{yp, 0.0});
        bool upper = false, lower = false;
        for (const EquilibriumPoint& eq : cat.equilibria) {
            if (eq.label == EquilibriumLabel::EE_MD2) {
                upper = eq.stability == StabilityLabel::AsymptoticallyStable;
            }
            if (eq.label == EquilibriumLabel::EE_MD1) {
                lower = eq.stability == StabilityLabel::Unstable;
            }
        }
        two_branch_ok = two_branch_ok && upper && lower;
    }
    v.check(two_branch_ok,
            "stable upper / unstable lower pair between the thresholds");

    const CatalogReport beyond =
        equilibrium_catalog(kP, ControlSettings{1.02 * fold, 0.0});
    v.check(beyond.equilibria.size() == 1 &&
                beyond.equilibria[0].label == EquilibriumLabel::TE,
            "only extinction beyond the fold");
    return v;
}

Verdict repro_fig7(const std::string& dir, bool svg, unsigned, std::ostream&)
{
    Verdict v;
    ExperimentConfig config;
    config.experiment = ExperimentKind::Thresholds;
    config.output.dir = dir;
    config.output.svg = svg;
    config.thresholds.alpha_grid = linspace(0.0, 0.2, 21);
    run(config);

    const auto rows = threshold_sweep(kP, config.thresholds.alpha_grid);
    v.note("critical lure: " + fmt(rows[0].yp_star, 8) + " (alpha=0), " +
           fmt(rows[10].yp_star, 8) + " (alpha=0.1)");
    v.note("fold lure: " + fmt(rows[0].yp_dstar, 8) + " (alpha=0), " +
           fmt(rows[10].yp_dstar, 8) + " (alpha=0.1)");
    v.check(std::abs(rows[0].yp_star - 5673.0) <= 1.0,
            "critical lure 5673 +- 1 at alpha=0");
    v.check(std::abs(rows[10].yp_star - 588.0) <= 1.0,
            "critical lure 588 +- 1 at alpha=0.1");
    v.check(std::abs(rows[0].yp_dstar - 987735.0) <= 0.001 * 987735.0,
            "fold lure 987735 +- 0.1% at alpha=0");
    v.check(std::abs(rows[10].yp_dstar - 102462.0) <= 0.001 * 102462.0,
            "fold lure 102462 +- 0.1% at alpha=0.1");
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        decreasing = decreasing && rows[i].yp_star < rows[i - 1].yp_star &&
                     rows[i].yp_dstar < rows[i - 1].yp_dstar;
    }
    v.check(decreasing, "both curves strictly decreasing in alpha");
    return v;
}

BasinGrid basin_at(const ControlSettings& c, double box, int n,
                   unsigned workers, double t_end)
{
    const BasinGridSpec spec = BasinGridSpec::males_vs_females(box, box, n, n);
    SolverOptions opts;
    opts.t_end = t_end;
    return basin_grid(kP, c, spec, opts, workers);
}

void basin_svg(const BasinGrid& grid, const std::string& path,
               const std::string& title)
{
    SvgPlot plot(title, "M", "Y + F");
    std::map<std::string, SvgPlot::Points> buckets;
    for (int i = 0; i < grid.spec.n1; ++i) {
        for (int j = 0; j < grid.spec.n2; ++j) {
            const auto& label = grid.labels[i * grid.spec.n2 + j];
            buckets[label ? to_string(*label) : "nonconvergent"].emplace_back(
                grid.coord1(i), grid.coord2(j));
        }
    }
    for (const auto& [key, pts] : buckets) {
        std::string color = "#9467bd";
        if (key == "TE") color = "#d62728";
        if (key == "EE#" || key == "EE*") color = "#1f77b4";
        if (key == "EE_MD2") color = "#2ca02c";
        if (key == "nonconvergent") color = "#aaaaaa";
        plot.scatter(pts, color, 2.6, key);
    }
    plot.write(path);
}

Verdict repro_fig8(const std::string& dir, bool svg, unsigned workers,
                   std::ostream&)
{
    Verdict v;
    const BasinGrid g0 =
        basin_at(ControlSettings{5500.0, 0.0}, 50.0, 50, workers, 2500.0);
    const BasinGrid g1 =
        basin_at(ControlSettings{5500.0, 0.1}, 50.0, 50, workers, 2500.0);
    write_basins_csv(join_dir(dir, "fig8_basins_alpha0.csv"), g0);
    write_basins_csv(join_dir(dir, "fig8_basins_alpha01.csv"), g1);
    if (svg) {
        basin_svg(g0, join_dir(dir, "fig8_basins_alpha0.svg"),
                  "Basins, no trapping");
        basin_svg(g1, join_dir(dir, "fig8_basins_alpha01.svg"),
                  "Basins, trapping 0.1/day");
    }
    const std::size_t te0 = g0.count(EquilibriumLabel::TE);
    const std::size_t te1 = g1.count(EquilibriumLabel::TE);
    v.note("extinction-basin cells: " + std::to_string(te0) +
           " (alpha=0) vs " + std::to_string(te1) + " (alpha=0.1)");
    v.check(te1 > te0, "trapping enlarges the extinction basin");
    v.check(g0.nonconvergent_fraction < 0.02 &&
                g1.nonconvergent_fraction < 0.02,
            "grid classification nearly complete");
    return v;
}

Verdict repro_fig9(const std::string& dir, bool, unsigned workers,
                   std::ostream&)
{
    Verdict v;
    const BasinGrid g_low =
        basin_at(ControlSettings{1e4, 0.0}, 100.0, 40, workers, 3000.0);
    const BasinGrid g_high =
        basin_at(ControlSettings{1e5, 0.0}, 100.0, 40, workers, 3000.0);
    write_basins_csv(join_dir(dir, "fig9_basins_yp1e4.csv"), g_low);
    write_basins_csv(join_dir(dir, "fig9_basins_yp1e5.csv"), g_high);
    const std::size_t te_low = g_low.count(EquilibriumLabel::TE);
    const std::size_t te_high = g_high.count(EquilibriumLabel::TE);
    v.note("extinction-basin cells: " + std::to_string(te_low) +
           " (Y_P=1e4) vs " + std::to_string(te_high) + " (Y_P=1e5)");
    v.check(te_high > te_low,
            "a stronger lure enlarges the extinction basin");
    return v;
}

Verdict repro_fig10(const std::string& dir, bool svg, unsigned,
                    std::ostream&)
{
    const double fold = yp_double_star(kP, 0.0, TangencyCurve::Psi).value;
    // Just past the fold the collapse crawls through the ghost of the
    // vanished pair; the horizon has to cover that bottleneck.
    return trajectories_to(ControlSettings{1.0001 * fold, 0.0}, 90000.0,
                           EquilibriumLabel::TE, dir, svg,
                           "fig10_trajectories");
}

Verdict repro_fig11(const std::string& dir, bool svg, unsigned, std::ostream&)
{
    Verdict v;
    const double fold = yp_double_star(kP, 0.0, TangencyCurve::Psi).value;
    const ControlSettings c{0.9999 * fold, 0.0};
    const CatalogReport cat = equilibrium_catalog(kP, c);
    SolverOptions opts;
    opts.t_end = 90000.0;
    opts.h_max = 250.0;
    AttractorOptions aopts;
    aopts.sample_spacing = 25.0;

    int to_te = 0;
    int to_positive = 0;
    int lost = 0;
    SvgPlot plot("Trajectories near the fold", "M", "Y + F");
    for (const PopulationState& s0 : repro_initial_conditions(kP)) {
        const AttractorResult res =
            classify_attractor(kP, c, cat.equilibria, s0, opts, aopts);
        bool te = false;
        if (res.label && *res.label == EquilibriumLabel::TE) {
            ++to_te;
            te = true;
        } else if (res.label && *res.label == EquilibriumLabel::EE_MD2) {
            ++to_positive;
        } else {
            ++lost;
        }

        const auto grid = linspace(0.0, opts.t_end, 200);
        const Trajectory traj =
            integrate(SystemVariant::FullControl, kP, c, s0, opts, grid);
        SvgPlot::Points pts;
        for (const PopulationState& s : traj.states) {
            pts.emplace_back(s.M, s.Y + s.F);
        }
        plot.line(pts, te ? "#d62728" : "#1f77b4", false, "");
    }
    for (const EquilibriumPoint& eq : cat.equilibria) {
        if (eq.stability == StabilityLabel::AsymptoticallyStable &&
            eq.label != EquilibriumLabel::TE) {
            plot.scatter({{eq.state.M, eq.state.Y + eq.state.F}}, "#2ca02c",
                         5.0, to_string(eq.label));
        }
    }
    if (svg) {
        plot.write(join_dir(dir, "fig11_trajectories.svg"));
    }

    v.note(std::to_string(to_te) + " starts collapse, " +
           std::to_string(to_positive) + " persist, " + std::to_string(lost) +
           " unresolved");
    v.check(lost == 0, "every start settles at a catalog equilibrium");
    v.check(to_te > 0 && to_positive > 0,
            "both extinction and persistence are observed");
    return v;
}

Verdict repro_fig12(const std::string& dir, bool svg, unsigned, std::ostream&)
{
    Verdict v;
    const auto alphas = linspace(0.0, 0.1, 11);
    const auto rows = threshold_sweep(kP, alphas);
    write_thresholds_csv(join_dir(dir, "fig12_thresholds.csv"), rows);

    SvgPlot plot("Auxiliary-fold margin vs trapping rate", "alpha",
                 "lure gap (equivalent females)");
    SvgPlot::Points gap_pts;
    double gap_min = 1e300, gap_max = 0.0;
    bool ordered = true;
    bool relative_small = true;
    for (const ThresholdRow& r : rows) {
        const double gap = r.yp_dstar_tilde - r.yp_dstar;
        gap_pts.emplace_back(r.alpha, gap);
        gap_min = std::min(gap_min, gap);
        gap_max = std::max(gap_max, gap);
        ordered = ordered && gap > 0.0;
        relative_small = relative_small && gap <= 0.2 * r.yp_dstar;
    }
    plot.line(gap_pts, "#1f77b4", false, "gap");
    if (svg) {
        plot.write(join_dir(dir, "fig12_gap.svg"));
    }

    v.note("gap range [" + fmt(gap_min, 6) + ", " + fmt(gap_max, 6) +
           "], folds " + fmt(rows.back().yp_dstar, 6) + " .. " +
           fmt(rows[0].yp_dstar_tilde, 6));
    v.check(ordered, "auxiliary fold lies above the fold at every alpha");
    v.check(gap_min >= 1e3 && gap_max < 1e6,
            "gap magnitude three to five orders, against folds up to ~1e6");
    v.check(relative_small, "gap below 20% of the fold lure at every alpha");
    v.check(rows[0].yp_dstar >= 3e5 && rows[0].yp_dstar_tilde <= 3e6,
            "untrapped folds are of order 1e6");
    return v;
}

Verdict repro_reduction49(const std::string&, bool, unsigned, std::ostream&)
{
    Verdict v;
    const EquilibriumPoint star = endemic_equilibrium(kP);
    const double natural = star.state.Y + star.state.F;
    for (double alpha : {0.0, 0.1}) {
        const double fold = yp_double_star(kP, alpha, TangencyCurve::Psi).value;
        const auto points =
            md_equilibria(kP, ControlSettings{0.9999 * fold, alpha});
        if (points.size() != 2) {
            v.check(false, "two equilibria just below the fold (alpha=" +
                               fmt(alpha, 3) + ")");
            continue;
        }
        const double controlled =
            points[1].state.Y + points[1].state.F;
        const double reduction = 1.0 - controlled / natural;
        v.note("alpha=" + fmt(alpha, 3) + ": females " + fmt(controlled, 8) +
               " vs " + fmt(natural, 8) + " -> reduction " +
               fmt(100.0 * reduction, 4) + "%");
        v.check(std::abs(reduction - 0.49) <= 0.02,
                "49% +- 2% female reduction at the fold (alpha=" +
                    fmt(alpha, 3) + ")");
    }
    return v;
}

using ReproFn = Verdict (*)(const std::string&, bool, unsigned,
                            std::ostream&);

const std::map<std::string, ReproFn>& repro_table()
{
    static const std::map<std::string, ReproFn> table{
        {"n0", repro_n0},
        {"ee-star", repro_ee_star},
        {"fig3", repro_fig3},
        {"fig6", repro_fig6},
        {"fig7", repro_fig7},
        {"fig8", repro_fig8},
        {"fig9", repro_fig9},
        {"fig10", repro_fig10},
        {"fig11", repro_fig11},
        {"fig12", repro_fig12},
        {"reduction49", repro_reduction49},
    };
    return table;
}

} // namespace

std::vector<PopulationState> repro_initial_conditions(const ModelParameters& p)
{
    // (M, Y+F) anchors expanded by the documented basin fill rule.
    const double anchors[][2] = {
        {50.0, 50.0},    {200.0, 200.0},  {200.0, 1000.0}, {200.0, 1800.0},
        {800.0, 200.0},  {800.0, 1000.0}, {800.0, 1800.0}, {1600.0, 200.0},
        {1600.0, 1000.0}, {1600.0, 1800.0}, {1200.0, 400.0}, {400.0, 1600.0},
    };
    const BasinGridSpec spec =
        BasinGridSpec::males_vs_females(2000.0, 2000.0, 2, 2);
    std::vector<PopulationState> out;
    for (const auto& a : anchors) {
        out.push_back(basin_cell_state(spec, p, a[0], a[1]));
    }
    return out;
}

const std::vector<std::string>& repro_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& [key, fn] : repro_table()) {
            v.push_back(key);
        }
        return v;
    }();
    return ids;
}

bool run_repro(const std::string& id, const std::string& out_dir, bool svg,
               unsigned workers, std::ostream& out)
{
    const auto it = repro_table().find(id);
    if (it == repro_table().end()) {
        std::string known;
        for (const std::string& k : repro_ids()) {
            known += known.empty() ? k : (", " + k);
        }
        throw ConfigError("unknown repro id '" + id + "'; available: " +
                          known);
    }
    out << "repro " << id << "\n";
    Verdict v = it->second(out_dir, svg, workers, out);
    out << v.text.str();
    out << (v.pass ? "PASS" : "FAIL") << "\n";
    return v.pass;
}

} // namespace matdyn::cli
