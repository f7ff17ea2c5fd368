#ifndef MATDYN_THRESHOLDS_HPP
#define MATDYN_THRESHOLDS_HPP

#include "matdyn/equilibria.hpp"
#include "matdyn/parameters.hpp"

#include <span>
#include <string>
#include <vector>

namespace matdyn {

/// Which equilibrium cubic a tangency solve refers to.
enum class TangencyCurve { Psi, PsiTilde };

/// Minimal lure strength that moves the female equilibrium:
/// (gamma*M* - Y*) / (1 + alpha/mu_M). Both printed forms are evaluated
/// and must agree to 1e-12 relative. Throws NoThresholdError when N0 <= 1
/// or males are not abundant at the endemic equilibrium.
double yp_star(const ModelParameters& p, double alpha);

struct TangencySolve {
    double value = 0.0;      // Y_P at which the line is tangent to the cubic
    double tangency_I = 0.0; // location of the tangency
    double newton_value = 0.0;      // cross-validation by the 2x2 solve
    double newton_tangency_I = 0.0;
};

/// Lure threshold above which the chosen cubic admits no positive root:
/// the maximum over the admissible interval of
/// Y_P(I) = psi(I) / (eta_head * (1 - I/K)). Located by a 4096-point grid
/// scan plus golden-section refinement to 1e-10 relative, then confirmed
/// by a 2-variable Newton solve of the tangency system started at the
/// grid optimum. Throws NoThresholdError if the profile has no interior
/// maximum.
TangencySolve yp_double_star(const ModelParameters& p, double alpha,
                             TangencyCurve which);

struct ThresholdRow {
    double alpha = 0.0;
    double yp_star = 0.0;
    double yp_dstar = 0.0;       // tangency of psi
    double yp_dstar_tilde = 0.0; // tangency of psi_tilde
    double tangency_I = 0.0;
    double tangency_I_tilde = 0.0;
    bool ok = true;
    std::string message;
};

/// Per-alpha threshold table. Failures are recorded per row and the sweep
/// continues.
std::vector<ThresholdRow> threshold_sweep(const ModelParameters& p,
                                          std::span<const double> alpha_grid);

} // namespace matdyn

#endif
