#ifndef MATDYN_TEST_SUPPORT_HPP
#define MATDYN_TEST_SUPPORT_HPP

#include "matdyn/parameters.hpp"
#include "matdyn/types.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace matdyn::testing {

// Reference parameter set and derived quantities, frozen from independent
// high-precision evaluation of the closed forms.
namespace frozen {
inline constexpr double kCycleDenominator = 0.008166652186786903;
inline constexpr double kN0 = 122.566080024079264;
inline constexpr double kN0Hat = 2302.990077128512;
inline constexpr double kN0DeltaZero = 146.44341493927603;
inline constexpr double kIStar = 991.8411358199304;
inline constexpr double kYStar = 318.88010794852456;
inline constexpr double kFStar = 1407.0444246142300;
inline constexpr double kMStar = 1497.9220275602462;
inline constexpr double kGammaMStar = 5991.688110240985;
inline constexpr double kYFStar = 1725.9245325627546;
inline constexpr double kIHat = 999.5657818894092;
inline constexpr double kYHat = -24904.598001200921;
inline constexpr double kFHat = 26643.964359954577;
inline constexpr double kMHat = 1509.588127185176;
inline constexpr double kYpStar0 = 5672.80800229246;
inline constexpr double kYpStar01 = 588.4655604037822;
inline constexpr double kTrapLeverage = 0.10373443983402490;
inline constexpr double kRootI1 = 999.5657818894092;
inline constexpr double kRootI2 = 993.3485594884583;
inline constexpr double kRootI2Tilde = 1049.9523182416784;
inline constexpr double kYpDoubleStar0 = 987734.7784163383;
inline constexpr double kYpDoubleStar01 = 102462.11394360356;
inline constexpr double kTangencyI0 = 496.46286617300750;
inline constexpr double kYpDoubleStarTilde0 = 1103453.0422702873;
inline constexpr double kYpDoubleStarTilde01 = 114466.08322305885;
inline constexpr double kTangencyITilde0 = 524.71104156570205;
inline constexpr double kBForUnitN0 = 0.07564898867760499;
// Roots of the equilibrium cubic against the lure line, alpha = 0.
inline constexpr double kMd1At1000 = 0.2513767834208991;
inline constexpr double kMd2At1000 = 993.0804639950553;
inline constexpr double kMd1At3000 = 0.754512776470066;
inline constexpr double kMd2At3000 = 992.5476749051952;
inline constexpr double kMd1At5500 = 1.3841518212867048;
inline constexpr double kMd2At5500 = 991.886661706778;
inline constexpr double kMd1At1e5 = 25.8018;
inline constexpr double kMd2At1e5 = 967.2029;
inline constexpr double kMSharp1000_01 = 198.37366691766399;
inline constexpr double kFemaleReduction = 0.4944477445385724;
} // namespace frozen

inline bool close_rel(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Random valid parameter sets for property tests.
inline ModelParameters random_parameters(std::mt19937& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::pow(hi / lo, unit(rng));
    };
    ModelParameters p;
    p.b = log_uniform(0.5, 20.0);
    p.r = 0.05 + 0.9 * unit(rng);
    p.K = log_uniform(50.0, 1e5);
    p.gamma = log_uniform(0.2, 10.0);
    p.mu_I = log_uniform(1e-3, 0.5);
    p.mu_Y = log_uniform(1e-3, 0.5);
    p.mu_F = log_uniform(1e-3, 0.5);
    p.mu_M = log_uniform(1e-3, 0.5);
    p.nu_I = log_uniform(1e-3, 0.5);
    p.nu_Y = log_uniform(1e-2, 1.0);
    p.delta = log_uniform(1e-3, 0.5);
    return p;
}

inline PopulationState random_state(std::mt19937& rng, double scale)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return PopulationState{unit(rng) * scale, unit(rng) * scale,
                           unit(rng) * scale, unit(rng) * scale};
}

} // namespace matdyn::testing

#endif
