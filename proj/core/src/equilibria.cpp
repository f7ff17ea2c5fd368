#include "matdyn/equilibria.hpp"

#include "matdyn/reproduction.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace matdyn {

namespace {

double residual_norm(SystemVariant variant, const ModelParameters& p,
                     const ControlSettings& c, const PopulationState& s)
{
    return rhs(variant, p, c, s).cwiseAbs().maxCoeff();
}

// Bisection with secant acceleration on a sign-change bracket; refines to
// 1e-12 relative in the abscissa.
double refine_root(const std::function<double(double)>& f, double lo,
                   double hi)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int iter = 0; iter < 200; ++iter) {
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
            break;
        }
        double mid = 0.5 * (lo + hi);
        if (fhi != flo) {
            const double sec = hi - fhi * (hi - lo) / (fhi - flo);
            const double margin = 0.01 * (hi - lo);
            if (sec > lo + margin && sec < hi - margin) {
                mid = sec;
            }
        }
        const double fmid = f(mid);
        if (fmid == 0.0) {
            return mid;
        }
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

// Sign-change scan of f on (0, upper] over a uniform grid, augmented with
// the critical points of f so a hump narrower than the grid spacing is
// still caught. Coincident roots within merge_tol are collapsed.
std::vector<double> bracketed_roots(const std::function<double(double)>& f,
                                    double upper,
                                    std::span<const double> extra_nodes,
                                    int grid_points, double merge_tol)
{
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(grid_points) + extra_nodes.size() +
                  1);
    for (int i = 0; i <= grid_points; ++i) {
        nodes.push_back(upper * static_cast<double>(i) / grid_points);
    }
    for (double x : extra_nodes) {
        if (x > 0.0 && x < upper) {
            nodes.push_back(x);
        }
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> roots;
    double prev_x = nodes.front();
    double prev_f = f(prev_x);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double x = nodes[i];
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if ((prev_f < 0.0) != (fx < 0.0)) {
            roots.push_back(refine_root(f, prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) {
        roots.push_back(prev_x);
    }

    std::vector<double> merged;
    for (double rt : roots) {
        if (merged.empty() || rt - merged.back() > merge_tol) {
            merged.push_back(rt);
        }
    }
    return merged;
}

// Zeros of a derivative function on (0, upper), from a coarse sign scan.
std::vector<double> critical_points(const std::function<double(double)>& df,
                                    double upper)
{
    std::vector<double> zeros;
    const int n = 64;
    double prev_x = upper / n;
    double prev = df(prev_x);
    for (int i = 2; i <= n; ++i) {
        const double x = upper * static_cast<double>(i) / n;
        const double cur = df(x);
        if ((prev < 0.0) != (cur < 0.0)) {
            zeros.push_back(refine_root(df, prev_x, x));
        }
        prev_x = x;
        prev = cur;
    }
    return zeros;
}

PopulationState lift_md(const CubicStructure& cubic, const ModelParameters& p,
                        const ControlSettings& c, double I)
{
    const double shrink = p.b * (1.0 - I / p.K);
    PopulationState s;
    s.I = I;
    s.Y = cubic.phi(I) * I / (p.mu_Y * shrink);
    s.F = (p.nu_I + p.mu_I) * I / shrink;
    s.M = (1.0 - p.r) * p.nu_I * I /
          (p.mu_M + c.alpha * c.yp / (s.Y + c.yp));
    return s;
}

PopulationState lift_tilde(const CubicStructure& cubic,
                           const ModelParameters& p, const ControlSettings& c,
                           double I)
{
    const double shrink = p.b * (1.0 - I / p.K);
    PopulationState s;
    s.I = I;
    s.Y = cubic.phi_tilde(I) * I / (p.mu_Y * shrink);
    s.F = (p.nu_I + p.mu_I) * I / shrink;
    s.M = (1.0 - p.r) * p.nu_I * I /
          (p.mu_M + c.alpha * c.yp / (s.Y + c.yp));
    return s;
}

} // namespace

const char* to_string(EquilibriumLabel l)
{
    switch (l) {
    case EquilibriumLabel::TE: return "TE";
    case EquilibriumLabel::EE_star: return "EE*";
    case EquilibriumLabel::EE_hat: return "EE^";
    case EquilibriumLabel::EE_sharp: return "EE#";
    case EquilibriumLabel::EE_MD1: return "EE_MD1";
    case EquilibriumLabel::EE_MD2: return "EE_MD2";
    case EquilibriumLabel::E_tilde1: return "E~1";
    case EquilibriumLabel::E_tilde2: return "E~2";
    }
    return "?";
}

double CubicStructure::psi_prime(double I) const
{
    const double dxi = -xi_head / K;
    const double dphi = -phi_head / K;
    return xi(I) * phi(I) + I * (dxi * phi(I) + xi(I) * dphi);
}

double CubicStructure::psi_second(double I) const
{
    const double dxi = -xi_head / K;
    const double dphi = -phi_head / K;
    return 2.0 * (dxi * phi(I) + xi(I) * dphi) + 2.0 * I * dxi * dphi;
}

double CubicStructure::psi_tilde_prime(double I) const
{
    const double dxi = -xi_head / K;
    const double dphi = -phi_head / K;
    return xi(I) * phi_tilde(I) + I * (dxi * phi_tilde(I) + xi(I) * dphi);
}

double CubicStructure::psi_tilde_second(double I) const
{
    const double dxi = -xi_head / K;
    const double dphi = -phi_head / K;
    return 2.0 * (dxi * phi_tilde(I) + xi(I) * dphi) + 2.0 * I * dxi * dphi;
}

CubicStructure cubic_structure(const ModelParameters& p,
                               const ControlSettings& c)
{
    CubicStructure cs;
    cs.K = p.K;
    cs.xi_head = p.nu_Y * p.gamma * (1.0 - p.r) * p.nu_I * p.b;
    cs.xi_const = (p.delta + p.mu_F) * (p.nu_I + p.mu_I) * p.mu_M;
    cs.phi_head = p.r * p.nu_I * p.b;
    cs.phi_const = p.mu_F * (p.nu_I + p.mu_I);
    cs.phi_tilde_const = p.delta * (p.nu_I + p.mu_I);
    cs.eta_head = p.mu_Y * (p.delta + p.mu_F) * (p.nu_I + p.mu_I) *
                  (p.mu_M + c.alpha) * p.b;

    cs.root_I1 = p.K * (1.0 - cs.xi_const / cs.xi_head);
    cs.root_I2 = p.K * (1.0 - cs.phi_const / cs.phi_head);
    cs.root_I2_tilde = p.K * (1.0 + cs.phi_tilde_const / cs.phi_head);
    cs.admissible_upper = std::min(cs.root_I1, cs.root_I2);
    cs.admissible_upper_tilde = cs.root_I1;
    return cs;
}

AssumptionReport check_assumptions(const ModelParameters& p)
{
    AssumptionReport report;
    const double n0 = basic_offspring_number(p);
    report.offspring_number_above_one = n0 > 1.0;
    if (report.offspring_number_above_one) {
        const double denom = yf_cycle_denominator(p);
        const double i_star = (1.0 - 1.0 / n0) * p.K;
        const double y_star =
            p.r * p.nu_I * (p.delta + p.mu_F) / denom * i_star;
        const double m_star = (1.0 - p.r) * p.nu_I / p.mu_M * i_star;
        report.male_abundance_at_endemic = y_star < p.gamma * m_star;
    }
    const double n0_hat = scarcity_offspring_number(p);
    report.scarcity_offspring_above_one = n0_hat > 1.0;
    if (report.scarcity_offspring_above_one) {
        const double i_hat = (1.0 - 1.0 / n0_hat) * p.K;
        const double m_hat = (1.0 - p.r) * p.nu_I / p.mu_M * i_hat;
        const double y_hat =
            (p.r * p.nu_I * (p.delta + p.mu_F) * p.mu_M -
             p.nu_Y * p.gamma * (1.0 - p.r) * p.nu_I * p.mu_F) /
            (p.mu_Y * (p.delta + p.mu_F) * p.mu_M) * i_hat;
        report.scarcity_equilibrium_in_abundance = y_hat < p.gamma * m_hat;
    }
    return report;
}

EquilibriumPoint trivial_equilibrium()
{
    EquilibriumPoint eq;
    eq.label = EquilibriumLabel::TE;
    eq.state = PopulationState{};
    eq.region = Regime::Boundary;
    eq.residual = 0.0;
    eq.stability = StabilityLabel::NotClassified;
    return eq;
}

EquilibriumPoint endemic_equilibrium(const ModelParameters& p)
{
    const double n0 = basic_offspring_number(p);
    if (n0 < 1.0) {
        throw NoPositiveEquilibriumError(
            "no endemic equilibrium: offspring number below one");
    }
    const double denom = yf_cycle_denominator(p);
    EquilibriumPoint eq;
    eq.label = EquilibriumLabel::EE_star;
    eq.state.I = (1.0 - 1.0 / n0) * p.K;
    eq.state.Y = p.r * p.nu_I * (p.delta + p.mu_F) / denom * eq.state.I;
    eq.state.F = p.r * p.nu_I * p.nu_Y / denom * eq.state.I;
    eq.state.M = (1.0 - p.r) * p.nu_I / p.mu_M * eq.state.I;
    eq.region = classify_regime(p, {}, eq.state);
    eq.residual = residual_norm(SystemVariant::FullNoControl, p, {}, eq.state);
    eq.admissible_full_model = eq.region != Regime::Scarcity;
    eq.stability =
        classify_stability(SystemVariant::FullNoControl, p, {}, eq);
    return eq;
}

ScarcityEquilibrium scarcity_equilibrium(const ModelParameters& p)
{
    const double n0_hat = scarcity_offspring_number(p);
    if (n0_hat < 1.0) {
        throw NoPositiveEquilibriumError(
            "no scarcity equilibrium: scarcity offspring number below one");
    }
    ScarcityEquilibrium result;
    EquilibriumPoint& eq = result.point;
    eq.label = EquilibriumLabel::EE_hat;
    eq.state.I = (1.0 - 1.0 / n0_hat) * p.K;
    eq.state.F = p.gamma * (1.0 - p.r) * p.nu_I * p.nu_Y /
                 ((p.delta + p.mu_F) * p.mu_M) * eq.state.I;
    eq.state.M = (1.0 - p.r) * p.nu_I / p.mu_M * eq.state.I;
    eq.state.Y = (p.r * p.nu_I * (p.delta + p.mu_F) * p.mu_M -
                  p.nu_Y * p.gamma * (1.0 - p.r) * p.nu_I * p.mu_F) /
                 (p.mu_Y * (p.delta + p.mu_F) * p.mu_M) * eq.state.I;
    result.y_hat = eq.state.Y;
    result.y_below_male_capacity = eq.state.Y < p.gamma * eq.state.M;
    eq.region = classify_regime(p, {}, eq.state);
    eq.residual =
        residual_norm(SystemVariant::ScarcityNoControl, p, {}, eq.state);
    eq.stability =
        classify_stability(SystemVariant::ScarcityNoControl, p, {}, eq);
    return result;
}

EquilibriumPoint abundance_control_equilibrium(const ModelParameters& p,
                                               const ControlSettings& c)
{
    EquilibriumPoint eq = endemic_equilibrium(p);
    eq.label = EquilibriumLabel::EE_sharp;
    if (c.yp > 0.0 && c.alpha > 0.0) {
        eq.state.M /= 1.0 + c.alpha * c.yp /
                            (p.mu_M * (eq.state.Y + c.yp));
    }
    eq.region = classify_regime(p, c, eq.state);
    eq.residual =
        residual_norm(SystemVariant::AbundanceControl, p, c, eq.state);
    eq.admissible_full_model = eq.region != Regime::Scarcity;
    eq.stability =
        classify_stability(SystemVariant::AbundanceControl, p, c, eq);
    return eq;
}

std::vector<EquilibriumPoint> md_equilibria(const ModelParameters& p,
                                            const ControlSettings& c)
{
    const CubicStructure cubic = cubic_structure(p, c);
    const double upper = cubic.admissible_upper;
    if (!(c.yp > 0.0) || upper <= 0.0) {
        return {};
    }
    auto gap = [&](double I) { return cubic.psi(I) - cubic.eta(c.yp, I); };
    // The critical points of the cubic gap keep brackets from slipping
    // through a hump narrower than the grid spacing near a tangency.
    auto gap_prime = [&](double I) {
        return cubic.psi_prime(I) + cubic.eta_head * c.yp / cubic.K;
    };
    // gap' is quadratic; its zeros are added to the scan grid.
    std::vector<double> extras = critical_points(gap_prime, upper);
    const double merge_tol = 1e-6 * upper;
    const std::vector<double> roots =
        bracketed_roots(gap, upper, extras, 2048, merge_tol);

    std::vector<EquilibriumPoint> points;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        EquilibriumPoint eq;
        eq.label = (roots.size() >= 2 && k + 1 == roots.size())
                       ? EquilibriumLabel::EE_MD2
                       : EquilibriumLabel::EE_MD1;
        eq.state = lift_md(cubic, p, c, roots[k]);
        eq.region = classify_regime(p, c, eq.state);
        eq.residual =
            residual_norm(SystemVariant::ScarcityControl, p, c, eq.state);
        eq.admissible_full_model = eq.region != Regime::Abundance;
        eq.stability =
            classify_stability(SystemVariant::ScarcityControl, p, c, eq);
        points.push_back(eq);
    }
    return points;
}

std::vector<EquilibriumPoint> tilde_equilibria(const ModelParameters& p,
                                               const ControlSettings& c)
{
    const CubicStructure cubic = cubic_structure(p, c);
    const double upper = cubic.admissible_upper_tilde;
    if (!(c.yp > 0.0) || upper <= 0.0) {
        return {};
    }
    auto gap = [&](double I) {
        return cubic.psi_tilde(I) - cubic.eta(c.yp, I);
    };
    auto gap_prime = [&](double I) {
        return cubic.psi_tilde_prime(I) + cubic.eta_head * c.yp / cubic.K;
    };
    const std::vector<double> extras = critical_points(gap_prime, upper);
    const std::vector<double> roots =
        bracketed_roots(gap, upper, extras, 2048, 1e-6 * upper);

    std::vector<EquilibriumPoint> points;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        EquilibriumPoint eq;
        eq.label = (roots.size() >= 2 && k + 1 == roots.size())
                       ? EquilibriumLabel::E_tilde2
                       : EquilibriumLabel::E_tilde1;
        eq.state = lift_tilde(cubic, p, c, roots[k]);
        eq.region = classify_regime(p, c, eq.state);
        eq.residual =
            residual_norm(SystemVariant::AuxiliaryMonotone, p, c, eq.state);
        eq.stability =
            classify_stability(SystemVariant::AuxiliaryMonotone, p, c, eq);
        points.push_back(eq);
    }
    return points;
}

StabilityLabel classify_stability(SystemVariant variant,
                                  const ModelParameters& p,
                                  const ControlSettings& c,
                                  const EquilibriumPoint& eq)
{
    try {
        const Eigen::MatrixXd J = jacobian(variant, p, c, eq.state);
        Eigen::EigenSolver<Eigen::MatrixXd> eig(J, false);
        if (eig.info() != Eigen::Success) {
            return StabilityLabel::NotClassified;
        }
        double max_real = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < eig.eigenvalues().size(); ++i) {
            max_real = std::max(max_real, eig.eigenvalues()[i].real());
        }
        constexpr double band = 1e-9;
        if (max_real < -band) {
            return StabilityLabel::AsymptoticallyStable;
        }
        if (max_real > band) {
            return StabilityLabel::Unstable;
        }
        return StabilityLabel::NotClassified;
    } catch (const std::exception&) {
        return StabilityLabel::NotClassified;
    }
}

CatalogReport equilibrium_catalog(const ModelParameters& p,
                                  const ControlSettings& c)
{
    CatalogReport report;
    report.assumptions = check_assumptions(p);
    report.assumptions_warning = !report.assumptions.all_hold();
    if (report.assumptions_warning) {
        report.note = "standing assumptions violated; catalog cases from "
                      "the bifurcation analysis may not apply";
    }

    EquilibriumPoint te = trivial_equilibrium();
    te.stability = classify_stability(SystemVariant::FullControl, p, c, te);
    report.equilibria.push_back(te);

    const double n0 = basic_offspring_number(p);
    if (c.yp <= 0.0) {
        if (n0 > 1.0) {
            report.equilibria.push_back(endemic_equilibrium(p));
        }
        return report;
    }

    if (n0 > 1.0) {
        EquilibriumPoint sharp = abundance_control_equilibrium(p, c);
        report.candidates.push_back(sharp);
        if (sharp.admissible_full_model) {
            report.equilibria.push_back(sharp);
        }
    }
    for (const EquilibriumPoint& md : md_equilibria(p, c)) {
        report.candidates.push_back(md);
        if (md.admissible_full_model) {
            report.equilibria.push_back(md);
        }
    }
    std::sort(report.equilibria.begin(), report.equilibria.end(),
              [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
                  return a.state.I < b.state.I;
              });
    return report;
}

} // namespace matdyn
