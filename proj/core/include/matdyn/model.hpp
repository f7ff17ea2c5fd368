#ifndef MATDYN_MODEL_HPP
#define MATDYN_MODEL_HPP

#include "matdyn/parameters.hpp"
#include "matdyn/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace matdyn {

/// Time derivative (dI, dY, dF, dM) of the requested system variant.
///
/// The saturating fertilisation term of the full variants is evaluated in
/// the division-safe form nu_Y * Y * min(gamma*M, Y+Y_P) / (Y+Y_P), with
/// value 0 at Y = 0. FullControl with yp = alpha = 0 equals FullNoControl
/// exactly. States with I > K are evaluated as written (the recruitment
/// factor goes negative); they decay back into I <= K.
Eigen::Vector4d rhs(SystemVariant variant, const ModelParameters& p,
                    const ControlSettings& c, const PopulationState& s);

/// Analytic Jacobian of rhs. 4x4 for every variant except
/// ScarcityNoControl, which returns the 3x3 Jacobian of the decoupled
/// (I, F, M) subsystem. The full variants dispatch on classify_regime;
/// on the switching surface the scarcity branch is used whenever
/// Y + Y_P > 0. Throws SingularInputError when the variant needs the
/// quotient 1/(Y+Y_P) and Y + Y_P = 0.
Eigen::MatrixXd jacobian(SystemVariant variant, const ModelParameters& p,
                         const ControlSettings& c, const PopulationState& s);

/// Side of the surface gamma*M = Y + Y_P, with a relative dead band of
/// 1e-9*max(1, gamma*M) to keep classification stable on the surface.
Regime classify_regime(const ModelParameters& p, const ControlSettings& c,
                       const PopulationState& s);

struct CooperativityViolation {
    PopulationState state;
    int row = 0;
    int col = 0;
    double entry = 0.0;
};

/// Off-diagonal Jacobian sign census over a sample of states.
struct CooperativityReport {
    SystemVariant variant;
    bool cooperative = true;
    std::size_t samples_checked = 0;
    std::optional<CooperativityViolation> first_violation;
};

/// Checks whether every off-diagonal Jacobian entry is >= 0 at each
/// sample. Samples outside the domain of the variant's Jacobian
/// (Y + Y_P = 0) are skipped.
CooperativityReport check_cooperative(SystemVariant variant,
                                      const ModelParameters& p,
                                      const ControlSettings& c,
                                      std::span<const PopulationState> samples);

/// Deterministic sample of states in Omega_K = {s >= 0 : I <= K};
/// convenience for cooperativity sweeps and property tests.
std::vector<PopulationState> sample_states_omega_k(const ModelParameters& p,
                                                   std::size_t count,
                                                   unsigned seed);

} // namespace matdyn

#endif
