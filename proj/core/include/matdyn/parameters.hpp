#ifndef MATDYN_PARAMETERS_HPP
#define MATDYN_PARAMETERS_HPP

#include "matdyn/types.hpp"

namespace matdyn {

/// Biological rates and constants of the compartment model. Units: b in
/// eggs per female per day, r dimensionless in (0,1), K individuals,
/// gamma females per male, all mu/nu/delta in 1/day.
struct ModelParameters {
    double b = 9.272;
    double r = 0.57;
    double K = 1000.0;
    double gamma = 4.0;
    double mu_I = 1.0 / 15.0;
    double mu_Y = 1.0 / 75.1;
    double mu_F = 1.0 / 75.1;
    double mu_M = 1.0 / 86.4;
    double nu_I = 1.0 / 24.6;
    double nu_Y = 0.5;
    double delta = 0.1;

    /// Reference field parameter set used throughout the test corpus.
    static ModelParameters reference() { return ModelParameters{}; }
};

/// (nu_Y + mu_Y)(delta + mu_F) - delta*nu_Y, evaluated in the
/// cancellation-free form nu_Y*mu_F + mu_Y*(delta + mu_F). Strictly
/// positive for any valid parameter set.
double yf_cycle_denominator(const ModelParameters& p);

/// Same quantity via the textbook product-minus-product form; kept as an
/// independent route for consistency checks.
double yf_cycle_denominator_product_form(const ModelParameters& p);

/// Parameters that passed validation, with the cycle denominator cached.
class ValidatedParameters {
public:
    const ModelParameters& get() const { return p_; }
    double denominator() const { return denom_; }

private:
    friend ValidatedParameters validate_params(const ModelParameters& p);
    ModelParameters p_;
    double denom_ = 0.0;
};

/// Checks every invariant (positivity of all rates, r in (0,1)) and
/// throws ValidationError listing every violation at once.
ValidatedParameters validate_params(const ModelParameters& p);

} // namespace matdyn

#endif
