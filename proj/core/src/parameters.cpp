#include "matdyn/parameters.hpp"

#include <cmath>
#include <sstream>

namespace matdyn {

double yf_cycle_denominator(const ModelParameters& p)
{
    return p.nu_Y * p.mu_F + p.mu_Y * (p.delta + p.mu_F);
}

double yf_cycle_denominator_product_form(const ModelParameters& p)
{
    return (p.nu_Y + p.mu_Y) * (p.delta + p.mu_F) - p.delta * p.nu_Y;
}

ValidatedParameters validate_params(const ModelParameters& p)
{
    std::ostringstream problems;
    auto require_positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            problems << name << " must be positive and finite (got " << v
                     << "); ";
        }
    };
    require_positive(p.b, "b");
    require_positive(p.K, "K");
    require_positive(p.gamma, "gamma");
    require_positive(p.mu_I, "mu_I");
    require_positive(p.mu_Y, "mu_Y");
    require_positive(p.mu_F, "mu_F");
    require_positive(p.mu_M, "mu_M");
    require_positive(p.nu_I, "nu_I");
    require_positive(p.nu_Y, "nu_Y");
    require_positive(p.delta, "delta");
    if (!(p.r > 0.0 && p.r < 1.0)) {
        problems << "r out of range (0,1) (got " << p.r << "); ";
    }

    const std::string msg = problems.str();
    if (!msg.empty()) {
        throw ValidationError("invalid model parameters: " + msg);
    }

    ValidatedParameters v;
    v.p_ = p;
    v.denom_ = yf_cycle_denominator(p);
    return v;
}

const char* to_string(SystemVariant v)
{
    switch (v) {
    case SystemVariant::FullNoControl: return "full-no-control";
    case SystemVariant::AbundanceNoControl: return "abundance-no-control";
    case SystemVariant::ScarcityNoControl: return "scarcity-no-control";
    case SystemVariant::FullControl: return "full-control";
    case SystemVariant::AbundanceControl: return "abundance-control";
    case SystemVariant::ScarcityControl: return "scarcity-control";
    case SystemVariant::AuxiliaryMonotone: return "auxiliary-monotone";
    }
    return "?";
}

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::Abundance: return "abundance";
    case Regime::Scarcity: return "scarcity";
    case Regime::Boundary: return "boundary";
    }
    return "?";
}

const char* to_string(StabilityLabel s)
{
    switch (s) {
    case StabilityLabel::AsymptoticallyStable: return "stable";
    case StabilityLabel::Unstable: return "unstable";
    case StabilityLabel::NotClassified: return "not-classified";
    }
    return "?";
}

} // namespace matdyn
