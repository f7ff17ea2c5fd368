#ifndef MATDYN_EQUILIBRIA_HPP
#define MATDYN_EQUILIBRIA_HPP

#include "matdyn/model.hpp"
#include "matdyn/parameters.hpp"
#include "matdyn/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace matdyn {

enum class EquilibriumLabel {
    TE,       // extinction state
    EE_star,  // endemic equilibrium of the uncontrolled model
    EE_hat,   // equilibrium of the decoupled scarcity system
    EE_sharp, // abundance-side equilibrium under control
    EE_MD1,   // lower mating-disruption equilibrium (scarcity side)
    EE_MD2,   // upper mating-disruption equilibrium (scarcity side)
    E_tilde1, // lower equilibrium of the auxiliary monotone system
    E_tilde2, // upper equilibrium of the auxiliary monotone system
};

const char* to_string(EquilibriumLabel l);

struct EquilibriumPoint {
    EquilibriumLabel label = EquilibriumLabel::TE;
    PopulationState state;
    Regime region = Regime::Boundary;
    StabilityLabel stability = StabilityLabel::NotClassified;
    double residual = 0.0; // max-norm of the producing system's rhs
    /// For control equilibria: whether the point lies in the region where
    /// its producing branch coincides with the full model.
    bool admissible_full_model = true;
};

/// Both factored cubics I*xi(I)*phi(I) and I*xi(I)*phi_tilde(I) whose
/// intersections with the line eta(Y_P, .) locate the positive control
/// equilibria, plus their roots and admissible intervals.
struct CubicStructure {
    // xi(I)  = xi_head*(1 - I/K) - xi_const
    // phi(I) = phi_head*(1 - I/K) - phi_const
    // phi_tilde(I) = phi_head*(1 - I/K) + phi_tilde_const
    // eta(Y_P, I) = eta_head*(1 - I/K)*Y_P
    double xi_head = 0.0;
    double xi_const = 0.0;
    double phi_head = 0.0;
    double phi_const = 0.0;
    double phi_tilde_const = 0.0;
    double eta_head = 0.0;
    double K = 0.0;

    double root_I1 = 0.0;       // zero of xi
    double root_I2 = 0.0;       // zero of phi
    double root_I2_tilde = 0.0; // zero of phi_tilde (> K)
    double admissible_upper = 0.0;       // min(I1, I2)
    double admissible_upper_tilde = 0.0; // I1

    double xi(double I) const { return xi_head * (1.0 - I / K) - xi_const; }
    double phi(double I) const { return phi_head * (1.0 - I / K) - phi_const; }
    double phi_tilde(double I) const
    {
        return phi_head * (1.0 - I / K) + phi_tilde_const;
    }
    double psi(double I) const { return I * xi(I) * phi(I); }
    double psi_tilde(double I) const { return I * xi(I) * phi_tilde(I); }
    double eta(double yp, double I) const
    {
        return eta_head * (1.0 - I / K) * yp;
    }
    double psi_prime(double I) const;
    double psi_second(double I) const;
    double psi_tilde_prime(double I) const;
    double psi_tilde_second(double I) const;
};

CubicStructure cubic_structure(const ModelParameters& p,
                               const ControlSettings& c);

/// Flags for the standing assumptions: an endemic equilibrium exists and
/// males are abundant there, plus the two consequences that must follow.
struct AssumptionReport {
    bool offspring_number_above_one = false; // N0 > 1
    bool male_abundance_at_endemic = false;  // Y* < gamma*M*
    bool scarcity_offspring_above_one = false; // derived: N0_hat > 1
    bool scarcity_equilibrium_in_abundance = false; // derived: Y_hat < gamma*M_hat
    bool all_hold() const
    {
        return offspring_number_above_one && male_abundance_at_endemic;
    }
};

AssumptionReport check_assumptions(const ModelParameters& p);

/// The extinction state. Residual is exactly zero; stability is context
/// dependent and left NotClassified here (see classify_stability).
EquilibriumPoint trivial_equilibrium();

/// Closed-form endemic equilibrium of the uncontrolled model. Requires
/// N0 >= 1; throws NoPositiveEquilibriumError for N0 < 1. At N0 = 1 the
/// formulas degenerate to the extinction state.
EquilibriumPoint endemic_equilibrium(const ModelParameters& p);

struct ScarcityEquilibrium {
    EquilibriumPoint point; // state (I_hat, Y_hat, F_hat, M_hat)
    double y_hat = 0.0;     // may be negative
    bool y_below_male_capacity = false; // Y_hat < gamma*M_hat
};

/// Closed-form equilibrium of the decoupled scarcity system. Requires
/// N0_hat >= 1; throws NoPositiveEquilibriumError for N0_hat < 1.
ScarcityEquilibrium scarcity_equilibrium(const ModelParameters& p);

/// Abundance-branch control equilibrium (I*, Y*, F*, M#(Y_P)). The
/// admissibility flag records whether Y* + Y_P < gamma*M#, i.e. whether
/// the point is an equilibrium of the full control model.
EquilibriumPoint abundance_control_equilibrium(const ModelParameters& p,
                                               const ControlSettings& c);

/// Positive equilibria of the scarcity-branch control system: bracketed
/// roots of psi(I) = eta(Y_P, I) on (0, min(I1, I2)), lifted to full
/// states. Returns 0 or 2 points ordered by I (1 at a tangency). Each
/// point's admissibility flag is the region test Y + Y_P >= gamma*M.
std::vector<EquilibriumPoint> md_equilibria(const ModelParameters& p,
                                            const ControlSettings& c);

/// Positive equilibria of the auxiliary monotone system: roots of
/// psi_tilde(I) = eta(Y_P, I) on (0, I1), lifted componentwise.
std::vector<EquilibriumPoint> tilde_equilibria(const ModelParameters& p,
                                               const ControlSettings& c);

/// Spectrum-based local stability at an equilibrium of the given variant.
/// Real parts below -1e-9 for every eigenvalue: asymptotically stable;
/// any above +1e-9: unstable; otherwise NotClassified.
StabilityLabel classify_stability(SystemVariant variant,
                                  const ModelParameters& p,
                                  const ControlSettings& c,
                                  const EquilibriumPoint& eq);

struct CatalogReport {
    AssumptionReport assumptions;
    bool assumptions_warning = false;
    /// Equilibria of the full model for the given control, with stability.
    std::vector<EquilibriumPoint> equilibria;
    /// Every branch equilibrium considered, including the ones rejected by
    /// the region test.
    std::vector<EquilibriumPoint> candidates;
    std::string note;
};

/// Full-model equilibrium catalog for one control setting. Membership is
/// decided by the region test on each candidate, not by comparing Y_P
/// against precomputed thresholds.
CatalogReport equilibrium_catalog(const ModelParameters& p,
                                  const ControlSettings& c);

} // namespace matdyn

#endif
