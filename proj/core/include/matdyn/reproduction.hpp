#ifndef MATDYN_REPRODUCTION_HPP
#define MATDYN_REPRODUCTION_HPP

#include "matdyn/parameters.hpp"

namespace matdyn {

/// Basic offspring number of the male-abundance system:
/// b*r*nu_I*nu_Y / ((mu_I+nu_I) * ((nu_Y+mu_Y)(delta+mu_F) - delta*nu_Y)).
double basic_offspring_number(const ModelParameters& p);

/// Basic offspring number of the decoupled male-scarcity system:
/// b*gamma*(1-r)*nu_I*nu_Y / ((nu_I+mu_I)(delta+mu_F)*mu_M).
double scarcity_offspring_number(const ModelParameters& p);

struct NextGenerationResult {
    double value = 0.0;          // spectral radius of R * T^-1
    Eigen::Matrix4d recruitment; // R: recruitment Jacobian at extinction
    Eigen::Matrix4d transfer;    // T: transfer Jacobian at extinction
};

/// Next-generation construction of the offspring number: builds the
/// recruitment matrix R (single nonzero entry b, egg laying into I from F)
/// and the transfer matrix T, and returns the largest-magnitude eigenvalue
/// of R*T^-1. The rank-1 structure of the product makes its trace an
/// independent route to the same value; both are computed and must agree
/// to 1e-12 relative or the function throws. Throws SingularInputError if
/// T is numerically singular (cannot happen for valid parameters).
NextGenerationResult next_generation_offspring_number(const ModelParameters& p);

struct ReproductionReport {
    double N0 = 0.0;
    double N0_hat = 0.0;
    double N0_ngm = 0.0;
    Eigen::Matrix4d recruitment;
    Eigen::Matrix4d transfer;
};

ReproductionReport reproduction_report(const ModelParameters& p);

} // namespace matdyn

#endif
