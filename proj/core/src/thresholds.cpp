#include "matdyn/thresholds.hpp"

#include "matdyn/reproduction.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace matdyn {

namespace {

struct RatioProblem {
    CubicStructure cubic;
    TangencyCurve which;
    double upper = 0.0;

    double numerator(double I) const
    {
        return which == TangencyCurve::Psi ? cubic.psi(I)
                                           : cubic.psi_tilde(I);
    }
    double numerator_prime(double I) const
    {
        return which == TangencyCurve::Psi ? cubic.psi_prime(I)
                                           : cubic.psi_tilde_prime(I);
    }
    double numerator_second(double I) const
    {
        return which == TangencyCurve::Psi ? cubic.psi_second(I)
                                           : cubic.psi_tilde_second(I);
    }
    // Lure level whose line passes through the curve at I: the tangency
    // level is the maximum of this ratio over the admissible interval.
    double ratio(double I) const
    {
        return numerator(I) / (cubic.eta_head * (1.0 - I / cubic.K));
    }
};

// Golden-section maximisation on [lo, hi] to 1e-10 relative in I.
double golden_max(const RatioProblem& prob, double lo, double hi)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = prob.ratio(c);
    double fd = prob.ratio(d);
    while (b - a > 1e-10 * std::max(1.0, std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = prob.ratio(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = prob.ratio(d);
        }
    }
    return 0.5 * (a + b);
}

// 2-variable Newton on {curve(I) = line(Y_P, I), curve'(I) = line'(Y_P, I)}.
void newton_tangency(const RatioProblem& prob, double& I, double& yp)
{
    const double eta_head = prob.cubic.eta_head;
    const double K = prob.cubic.K;
    for (int iter = 0; iter < 60; ++iter) {
        const double g1 =
            prob.numerator(I) - eta_head * (1.0 - I / K) * yp;
        const double g2 = prob.numerator_prime(I) + eta_head * yp / K;
        const double j11 = prob.numerator_prime(I) + eta_head * yp / K;
        const double j12 = -eta_head * (1.0 - I / K);
        const double j21 = prob.numerator_second(I);
        const double j22 = eta_head / K;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) {
            break;
        }
        const double dI = (-g1 * j22 + g2 * j12) / det;
        const double dyp = (-g2 * j11 + g1 * j21) / det;
        I += dI;
        yp += dyp;
        if (std::abs(dI) <= 1e-13 * std::max(1.0, std::abs(I)) &&
            std::abs(dyp) <= 1e-13 * std::max(1.0, std::abs(yp))) {
            break;
        }
    }
}

TangencySolve solve_tangency(const ModelParameters& p, double alpha,
                             TangencyCurve which)
{
    RatioProblem prob;
    prob.cubic = cubic_structure(p, ControlSettings{0.0, alpha});
    prob.which = which;
    prob.upper = which == TangencyCurve::Psi
                     ? prob.cubic.admissible_upper
                     : prob.cubic.admissible_upper_tilde;
    if (prob.upper <= 0.0) {
        throw NoThresholdError("admissible interval for the tangency solve "
                               "is empty");
    }

    // The ratio vanishes at both interval ends; a small margin keeps the
    // K-side limit away from 0/0.
    const double margin = 1e-9 * prob.upper;
    const int grid = 4096;
    double best_I = 0.0;
    double best_v = -std::numeric_limits<double>::infinity();
    int best_k = -1;
    for (int k = 1; k < grid; ++k) {
        const double I =
            margin + (prob.upper - 2.0 * margin) * k / (grid - 1.0);
        const double v = prob.ratio(I);
        if (v > best_v) {
            best_v = v;
            best_I = I;
            best_k = k;
        }
    }
    if (best_k <= 1 || best_k >= grid - 2 || !(best_v > 0.0)) {
        throw NoThresholdError(
            "tangency profile has no interior maximum (flat or boundary)");
    }

    const double cell = (prob.upper - 2.0 * margin) / (grid - 1.0);
    TangencySolve solve;
    solve.tangency_I = golden_max(prob, best_I - cell, best_I + cell);
    solve.value = prob.ratio(solve.tangency_I);

    solve.newton_tangency_I = solve.tangency_I;
    solve.newton_value = solve.value;
    newton_tangency(prob, solve.newton_tangency_I, solve.newton_value);
    return solve;
}

} // namespace

double yp_star(const ModelParameters& p, double alpha)
{
    const double n0 = basic_offspring_number(p);
    if (!(n0 > 1.0)) {
        throw NoThresholdError(
            "threshold undefined: offspring number not above one");
    }
    const EquilibriumPoint star = endemic_equilibrium(p);
    const double surplus = p.gamma * star.state.M - star.state.Y;
    if (!(surplus > 0.0)) {
        throw NoThresholdError(
            "threshold undefined: males not abundant at the endemic "
            "equilibrium");
    }
    const double form1 = surplus / (1.0 + alpha / p.mu_M);

    const double denom = yf_cycle_denominator(p);
    const double form2 =
        (p.gamma * (1.0 - p.r) * p.nu_I -
         p.r * p.nu_I * (p.delta + p.mu_F) * p.mu_M / denom) *
        (1.0 - 1.0 / n0) * p.K / (p.mu_M + alpha);
    if (std::abs(form1 - form2) > 1e-12 * std::max(1.0, std::abs(form1))) {
        throw std::logic_error("threshold forms disagree");
    }
    return form1;
}

TangencySolve yp_double_star(const ModelParameters& p, double alpha,
                             TangencyCurve which)
{
    return solve_tangency(p, alpha, which);
}

std::vector<ThresholdRow> threshold_sweep(const ModelParameters& p,
                                          std::span<const double> alpha_grid)
{
    std::vector<ThresholdRow> rows;
    rows.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        ThresholdRow row;
        row.alpha = alpha;
        try {
            row.yp_star = yp_star(p, alpha);
            const TangencySolve psi =
                yp_double_star(p, alpha, TangencyCurve::Psi);
            row.yp_dstar = psi.value;
            row.tangency_I = psi.tangency_I;
            const TangencySolve tilde =
                yp_double_star(p, alpha, TangencyCurve::PsiTilde);
            row.yp_dstar_tilde = tilde.value;
            row.tangency_I_tilde = tilde.tangency_I;
        } catch (const std::exception& e) {
            row.ok = false;
            row.message = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace matdyn
