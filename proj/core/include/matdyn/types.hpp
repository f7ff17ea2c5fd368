#ifndef MATDYN_TYPES_HPP
#define MATDYN_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace matdyn {

/// Compartment vector: immatures, mating-available females, fertilised
/// females, males. Counts are nonnegative reals for full-model
/// trajectories; the decoupled scarcity analysis may report Y < 0.
struct PopulationState {
    double I = 0.0;
    double Y = 0.0;
    double F = 0.0;
    double M = 0.0;

    double operator[](int i) const
    {
        switch (i) {
        case 0: return I;
        case 1: return Y;
        case 2: return F;
        default: return M;
        }
    }

    Eigen::Vector4d vec() const { return {I, Y, F, M}; }

    static PopulationState from_vec(const Eigen::Vector4d& v)
    {
        return {v[0], v[1], v[2], v[3]};
    }

    bool operator==(const PopulationState&) const = default;
};

/// Lure strength (equivalent wild females) and trap kill rate.
struct ControlSettings {
    double yp = 0.0;    // >= 0
    double alpha = 0.0; // per day, >= 0
};

/// Which system of equations is being evaluated. The "full" variants use
/// the saturating fertilisation term; the abundance/scarcity variants fix
/// one branch of it; AuxiliaryMonotone is the cooperative majorant of the
/// full control system.
enum class SystemVariant {
    FullNoControl,
    AbundanceNoControl,
    ScarcityNoControl,
    FullControl,
    AbundanceControl,
    ScarcityControl,
    AuxiliaryMonotone,
};

const char* to_string(SystemVariant v);

/// Position of a state relative to the switching surface gamma*M = Y + Y_P.
enum class Regime { Abundance, Scarcity, Boundary };

const char* to_string(Regime r);

enum class StabilityLabel { AsymptoticallyStable, Unstable, NotClassified };

const char* to_string(StabilityLabel s);

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NoPositiveEquilibriumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace matdyn

#endif
