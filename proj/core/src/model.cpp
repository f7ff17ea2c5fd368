#include "matdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace matdyn {

namespace {

// Division-safe saturating fertilisation flow nu_Y * min(gamma*M/(Y+YP), 1) * Y.
// Zero at Y = 0, which is the limit value and covers YP = 0.
double saturating_fertilisation(const ModelParameters& p, double yp,
                                const PopulationState& s)
{
    if (s.Y <= 0.0) {
        return 0.0;
    }
    const double pool = s.Y + yp;
    return p.nu_Y * s.Y * std::min(p.gamma * s.M, pool) / pool;
}

// Scarcity-branch flow nu_Y * gamma * M * Y / (Y + YP), zero when the pool
// is empty.
double scarcity_fertilisation(const ModelParameters& p, double yp,
                              const PopulationState& s)
{
    const double pool = s.Y + yp;
    if (pool <= 0.0) {
        return 0.0;
    }
    return p.nu_Y * p.gamma * s.M * s.Y / pool;
}

// Extra male removal rate alpha * YP / (Y + YP); zero without a lure.
double trap_rate(const ControlSettings& c, const PopulationState& s)
{
    if (c.yp <= 0.0) {
        return 0.0;
    }
    return c.alpha * c.yp / (s.Y + c.yp);
}

double immature_flow(const ModelParameters& p, const PopulationState& s)
{
    return p.b * (1.0 - s.I / p.K) * s.F - (p.nu_I + p.mu_I) * s.I;
}

Eigen::Vector4d assemble(const ModelParameters& p, const ControlSettings& c,
                         const PopulationState& s, double fert)
{
    Eigen::Vector4d d;
    d[0] = immature_flow(p, s);
    d[1] = p.r * p.nu_I * s.I - fert + p.delta * s.F - p.mu_Y * s.Y;
    d[2] = fert - (p.delta + p.mu_F) * s.F;
    d[3] = (1.0 - p.r) * p.nu_I * s.I - (p.mu_M + trap_rate(c, s)) * s.M;
    return d;
}

Eigen::Matrix4d jac_abundance(const ModelParameters& p,
                              const ControlSettings& c,
                              const PopulationState& s)
{
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 0) = -(p.nu_I + p.mu_I + p.b * s.F / p.K);
    J(0, 2) = p.b * (1.0 - s.I / p.K);
    J(1, 0) = p.r * p.nu_I;
    J(1, 1) = -(p.nu_Y + p.mu_Y);
    J(1, 2) = p.delta;
    J(2, 1) = p.nu_Y;
    J(2, 2) = -(p.mu_F + p.delta);
    J(3, 0) = (1.0 - p.r) * p.nu_I;
    if (c.yp > 0.0) {
        const double pool = s.Y + c.yp;
        J(3, 1) = c.alpha * c.yp * s.M / (pool * pool);
        J(3, 3) = -(p.mu_M + c.alpha * c.yp / pool);
    } else {
        J(3, 3) = -p.mu_M;
    }
    return J;
}

Eigen::Matrix4d jac_scarcity(const ModelParameters& p,
                             const ControlSettings& c,
                             const PopulationState& s)
{
    const double pool = s.Y + c.yp;
    if (pool <= 0.0) {
        throw SingularInputError(
            "scarcity Jacobian undefined at Y + Y_P = 0");
    }
    const double q = p.nu_Y * p.gamma * s.M * c.yp / (pool * pool);
    const double w = p.nu_Y * p.gamma * s.Y / pool;
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 0) = -(p.nu_I + p.mu_I + p.b * s.F / p.K);
    J(0, 2) = p.b * (1.0 - s.I / p.K);
    J(1, 0) = p.r * p.nu_I;
    J(1, 1) = -(q + p.mu_Y);
    J(1, 2) = p.delta;
    J(1, 3) = -w;
    J(2, 1) = q;
    J(2, 2) = -(p.mu_F + p.delta);
    J(2, 3) = w;
    J(3, 0) = (1.0 - p.r) * p.nu_I;
    if (c.yp > 0.0) {
        J(3, 1) = c.alpha * c.yp * s.M / (pool * pool);
        J(3, 3) = -(p.mu_M + c.alpha * c.yp / pool);
    } else {
        J(3, 3) = -p.mu_M;
    }
    return J;
}

Eigen::Matrix3d jac_scarcity_reduced(const ModelParameters& p,
                                     const PopulationState& s)
{
    Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
    J(0, 0) = -(p.nu_I + p.mu_I + p.b * s.F / p.K);
    J(0, 1) = p.b * (1.0 - s.I / p.K);
    J(1, 1) = -(p.delta + p.mu_F);
    J(1, 2) = p.nu_Y * p.gamma;
    J(2, 0) = (1.0 - p.r) * p.nu_I;
    J(2, 2) = -p.mu_M;
    return J;
}

Eigen::Matrix4d jac_auxiliary(const ModelParameters& p,
                              const ControlSettings& c,
                              const PopulationState& s)
{
    const double pool = s.Y + c.yp;
    if (pool <= 0.0) {
        throw SingularInputError(
            "auxiliary-system Jacobian undefined at Y + Y_P = 0");
    }
    const double q = p.nu_Y * p.gamma * s.M * c.yp / (pool * pool);
    const double w = p.nu_Y * p.gamma * s.Y / pool;
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J(0, 0) = -(p.nu_I + p.mu_I + p.b * s.F / p.K);
    J(0, 2) = p.b * (1.0 - s.I / p.K);
    J(1, 0) = p.r * p.nu_I;
    J(1, 1) = -p.mu_Y;
    J(1, 2) = p.delta;
    J(2, 1) = q;
    J(2, 2) = -(p.mu_F + p.delta);
    J(2, 3) = w;
    J(3, 0) = (1.0 - p.r) * p.nu_I;
    if (c.yp > 0.0) {
        J(3, 1) = c.alpha * c.yp * s.M / (pool * pool);
        J(3, 3) = -(p.mu_M + c.alpha * c.yp / pool);
    } else {
        J(3, 3) = -p.mu_M;
    }
    return J;
}

constexpr ControlSettings kNoControl{};

} // namespace

Eigen::Vector4d rhs(SystemVariant variant, const ModelParameters& p,
                    const ControlSettings& c, const PopulationState& s)
{
    switch (variant) {
    case SystemVariant::FullControl:
        return assemble(p, c, s, saturating_fertilisation(p, c.yp, s));
    case SystemVariant::FullNoControl:
        return assemble(p, kNoControl, s,
                        saturating_fertilisation(p, 0.0, s));
    case SystemVariant::AbundanceControl:
        return assemble(p, c, s, p.nu_Y * s.Y);
    case SystemVariant::AbundanceNoControl:
        return assemble(p, kNoControl, s, p.nu_Y * s.Y);
    case SystemVariant::ScarcityControl:
        return assemble(p, c, s, scarcity_fertilisation(p, c.yp, s));
    case SystemVariant::ScarcityNoControl:
        // The uncontrolled scarcity flow is nu_Y*gamma*M independent of Y;
        // this is where trajectories may carry Y < 0.
        return assemble(p, kNoControl, s, p.nu_Y * p.gamma * s.M);
    case SystemVariant::AuxiliaryMonotone: {
        const double fert = scarcity_fertilisation(p, c.yp, s);
        Eigen::Vector4d d = assemble(p, c, s, fert);
        d[1] += fert; // the majorant drops the fertilisation loss from Y
        return d;
    }
    }
    return Eigen::Vector4d::Zero();
}

Eigen::MatrixXd jacobian(SystemVariant variant, const ModelParameters& p,
                         const ControlSettings& c, const PopulationState& s)
{
    switch (variant) {
    case SystemVariant::AbundanceControl:
        return jac_abundance(p, c, s);
    case SystemVariant::AbundanceNoControl:
        return jac_abundance(p, kNoControl, s);
    case SystemVariant::ScarcityControl:
        return jac_scarcity(p, c, s);
    case SystemVariant::ScarcityNoControl:
        return jac_scarcity_reduced(p, s);
    case SystemVariant::AuxiliaryMonotone:
        return jac_auxiliary(p, c, s);
    case SystemVariant::FullControl:
    case SystemVariant::FullNoControl: {
        const ControlSettings& eff =
            variant == SystemVariant::FullControl ? c : kNoControl;
        // On the switching surface the scarcity branch is used whenever
        // its quotient exists; at Y + Y_P = 0 only the abundance branch is
        // differentiable.
        if (classify_regime(p, eff, s) == Regime::Abundance ||
            s.Y + eff.yp <= 0.0) {
            return jac_abundance(p, eff, s);
        }
        return jac_scarcity(p, eff, s);
    }
    }
    return Eigen::Matrix4d::Zero();
}

Regime classify_regime(const ModelParameters& p, const ControlSettings& c,
                       const PopulationState& s)
{
    const double males = p.gamma * s.M;
    const double pool = s.Y + c.yp;
    const double tol = 1e-9 * std::max(1.0, males);
    if (males > pool + tol) {
        return Regime::Abundance;
    }
    if (males < pool - tol) {
        return Regime::Scarcity;
    }
    return Regime::Boundary;
}

CooperativityReport check_cooperative(SystemVariant variant,
                                      const ModelParameters& p,
                                      const ControlSettings& c,
                                      std::span<const PopulationState> samples)
{
    CooperativityReport report;
    report.variant = variant;
    for (const PopulationState& s : samples) {
        Eigen::MatrixXd J;
        try {
            J = jacobian(variant, p, c, s);
        } catch (const SingularInputError&) {
            continue;
        }
        ++report.samples_checked;
        for (int i = 0; i < J.rows(); ++i) {
            for (int j = 0; j < J.cols(); ++j) {
                if (i != j && J(i, j) < 0.0) {
                    if (report.cooperative) {
                        report.cooperative = false;
                        report.first_violation =
                            CooperativityViolation{s, i, j, J(i, j)};
                    }
                }
            }
        }
    }
    return report;
}

std::vector<PopulationState> sample_states_omega_k(const ModelParameters& p,
                                                   std::size_t count,
                                                   unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Adult compartments sampled up to a few times the natural scale K.
    std::vector<PopulationState> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        PopulationState s;
        s.I = unit(rng) * p.K;
        s.Y = unit(rng) * 3.0 * p.K;
        s.F = unit(rng) * 3.0 * p.K;
        s.M = unit(rng) * 3.0 * p.K;
        out.push_back(s);
    }
    return out;
}

} // namespace matdyn
