#include "matdyn/phase.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace matdyn {

namespace {

double proximity_scale(const EquilibriumPoint& eq)
{
    return std::max(1.0, eq.state.vec().cwiseAbs().maxCoeff());
}

int nearest_candidate(const std::vector<EquilibriumPoint>& catalog,
                      const PopulationState& s, double rel_tol)
{
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const double dist =
            (s.vec() - catalog[k].state.vec()).cwiseAbs().maxCoeff();
        if (dist <= rel_tol * proximity_scale(catalog[k])) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

} // namespace

AttractorResult classify_attractor(const ModelParameters& p,
                                   const ControlSettings& c,
                                   const std::vector<EquilibriumPoint>& catalog,
                                   const PopulationState& s0,
                                   const SolverOptions& opts,
                                   const AttractorOptions& aopts)
{
    AttractorResult result;
    if (catalog.empty()) {
        result.diagnostic = "empty candidate catalog";
        return result;
    }

    std::vector<double> grid;
    const double spacing = std::max(aopts.sample_spacing, 1e-3);
    for (double t = 0.0; t <= opts.t_end + 0.5 * spacing; t += spacing) {
        grid.push_back(std::min(t, opts.t_end));
    }

    const Trajectory traj =
        integrate(SystemVariant::FullControl, p, c, s0, opts, grid);
    if (traj.status != SolveStatus::Ok) {
        result.diagnostic = to_string(traj.status);
        return result;
    }

    int current = -1;
    double since = 0.0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const int hit = nearest_candidate(catalog, traj.states[i],
                                          aopts.proximity_rel);
        if (hit < 0 || hit != current) {
            current = hit;
            since = traj.times[i];
        }
        if (current >= 0 && traj.times[i] - since >= aopts.dwell_days) {
            result.label = catalog[static_cast<std::size_t>(current)].label;
            result.reached_at = since;
            return result;
        }
    }
    result.diagnostic = "no dwell within t_end";
    return result;
}

BasinGridSpec BasinGridSpec::males_vs_females(double m_max, double s_max,
                                              int n1, int n2)
{
    BasinGridSpec spec;
    spec.mode = Mode::MalesVsFemales;
    spec.min1 = 0.0;
    spec.max1 = m_max;
    spec.min2 = 0.0;
    spec.max2 = s_max;
    spec.n1 = n1;
    spec.n2 = n2;
    return spec;
}

double BasinGrid::coord1(int i) const
{
    return spec.n1 == 1 ? spec.min1
                        : spec.min1 + (spec.max1 - spec.min1) * i /
                              (spec.n1 - 1.0);
}

double BasinGrid::coord2(int j) const
{
    return spec.n2 == 1 ? spec.min2
                        : spec.min2 + (spec.max2 - spec.min2) * j /
                              (spec.n2 - 1.0);
}

std::size_t BasinGrid::count(EquilibriumLabel l) const
{
    return static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [&](const auto& v) {
            return v.has_value() && *v == l;
        }));
}

PopulationState basin_cell_state(const BasinGridSpec& spec,
                                 const ModelParameters& p, double c1,
                                 double c2)
{
    if (spec.mode == BasinGridSpec::Mode::RawPair) {
        PopulationState s = spec.base;
        auto set = [&](int coord, double v) {
            switch (coord) {
            case 0: s.I = v; break;
            case 1: s.Y = v; break;
            case 2: s.F = v; break;
            default: s.M = v; break;
            }
        };
        set(spec.coord1, c1);
        set(spec.coord2, c2);
        return s;
    }

    // (M, Y+F) plane: split Y:F at the endemic ratio and set I in
    // proportion to the total adult load, normalised so the endemic point
    // maps to itself.
    const EquilibriumPoint star = endemic_equilibrium(p);
    const double yf = star.state.Y + star.state.F;
    const double m = c1;
    const double s_total = c2;
    PopulationState s;
    s.Y = s_total * star.state.Y / yf;
    s.F = s_total * star.state.F / yf;
    s.M = m;
    s.I = (s_total + m) * star.state.I / (yf + star.state.M);
    return s;
}

BasinGrid basin_grid(const ModelParameters& p, const ControlSettings& c,
                     const BasinGridSpec& spec, const SolverOptions& opts,
                     unsigned workers, const AttractorOptions& aopts)
{
    BasinGrid grid;
    grid.spec = spec;
    const std::size_t cells =
        static_cast<std::size_t>(spec.n1) * static_cast<std::size_t>(spec.n2);
    grid.labels.assign(cells, std::nullopt);

    const CatalogReport catalog = equilibrium_catalog(p, c);

    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min<unsigned>(workers, static_cast<unsigned>(cells));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells) {
                return;
            }
            const int i = static_cast<int>(idx) / spec.n2;
            const int j = static_cast<int>(idx) % spec.n2;
            const PopulationState s0 = basin_cell_state(
                spec, p, grid.coord1(i), grid.coord2(j));
            try {
                const AttractorResult res = classify_attractor(
                    p, c, catalog.equilibria, s0, opts, aopts);
                grid.labels[idx] = res.label;
            } catch (const std::exception&) {
                grid.labels[idx] = std::nullopt;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for (std::thread& th : pool) {
        th.join();
    }

    const std::size_t nonconv = static_cast<std::size_t>(std::count_if(
        grid.labels.begin(), grid.labels.end(),
        [](const auto& v) { return !v.has_value(); }));
    grid.nonconvergent_fraction =
        cells == 0 ? 0.0 : static_cast<double>(nonconv) / cells;
    return grid;
}

BifurcationCurve bifurcation_curve(const ModelParameters& p, double alpha,
                                   std::span<const double> yp_grid)
{
    BifurcationCurve curve;
    for (double yp : yp_grid) {
        const CatalogReport catalog =
            equilibrium_catalog(p, ControlSettings{yp, alpha});
        for (const EquilibriumPoint& eq : catalog.equilibria) {
            curve.rows.push_back(BifurcationRow{
                yp, eq.label, eq.state.Y + eq.state.F, eq.stability});
        }
    }
    return curve;
}

BoundReport verify_comparison_bound(const ModelParameters& p,
                                    const ControlSettings& c,
                                    const PopulationState& s0, double t_end,
                                    int samples, double tol)
{
    BoundReport report;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i <= samples; ++i) {
        grid.push_back(t_end * i / static_cast<double>(samples));
    }

    SolverOptions opts;
    opts.t_end = t_end;
    const Trajectory full =
        integrate(SystemVariant::FullControl, p, c, s0, opts, grid);
    const Trajectory aux =
        integrate(SystemVariant::AuxiliaryMonotone, p, c, s0, opts, grid);
    report.full_status = full.status;
    report.aux_status = aux.status;
    if (full.status != SolveStatus::Ok || aux.status != SolveStatus::Ok) {
        report.holds = false;
        return report;
    }

    const std::size_t n = std::min(full.states.size(), aux.states.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector4d yf = full.states[i].vec();
        const Eigen::Vector4d ya = aux.states[i].vec();
        const double scale = std::max(yf.cwiseAbs().maxCoeff(),
                                      ya.cwiseAbs().maxCoeff());
        const double allowance = tol * (1.0 + scale);
        for (int k = 0; k < 4; ++k) {
            const double excess = yf[k] - ya[k] - allowance;
            if (excess > 0.0) {
                if (report.holds) {
                    report.holds = false;
                    report.first_violation_time = full.times[i];
                    report.component = k;
                }
                report.max_excess = std::max(report.max_excess, excess);
            }
        }
    }
    return report;
}

} // namespace matdyn
