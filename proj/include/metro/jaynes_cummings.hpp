#pragma once

#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/qbounds.hpp"
#include "metro/states.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace metro::jaynescummings {

// Resonant Jaynes-Cummings frequency estimation: a field confined to
// {|0>, |1>} evolves freely for a time t, then couples to a ground-state
// atom for a time T; the atom is read out in {|g>, |e>}. The coupling
// Omega = kappa sqrt(omega) makes the induced POVM depend on the unknown
// frequency. kappa collapses the dipole/volume constants into one number;
// the only derivative fact needed is dOmega/domega = Omega / (2 omega).
struct JCConfig {
    double omega = 1.0;
    double kappa = 1.0;
    double free_time = 0.0;         // t
    double interaction_time = 1.0;  // T
    Complex c0 = Complex(1.0, 0.0);
    Complex c1 = Complex(0.0, 0.0);
    int n_max = 8;  // highest retained field level

    double rabi_at(double w) const { return kappa * std::sqrt(w); }
    double rabi() const { return rabi_at(omega); }

    void validate() const {
        if (!(omega > 0.0)) throw UsageError("omega must be positive");
        if (!(kappa > 0.0)) throw UsageError("kappa must be positive");
        if (!(free_time >= 0.0) || !(interaction_time >= 0.0))
            throw UsageError("times must be nonnegative");
        if (n_max < 2) throw UsageError("n_max must be at least 2");
        if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > tol::matrix)
            throw UsageError("field amplitudes must satisfy |c0|^2 + |c1|^2 = 1");
    }
};

struct JCOutcomeDistribution {
    double p_g = 1.0;
    double p_e = 0.0;
};

inline const char* kFieldBasis = "jc-field-fock";

namespace detail {

// Basis ordering on field x atom: index = 2 n + a with a = 0 (g), 1 (e).
inline Eigen::Index idx(int n, int atom) { return 2 * n + atom; }

}  // namespace detail

// U_T = cos(OT sqrt(N)) |g><g| + cos(OT sqrt(1+N)) |e><e|
//     - i sin(OT sqrt(N))/sqrt(N) a'|g><e| - i sin(OT sqrt(1+N))/sqrt(1+N) a |e><g|,
// truncated to field levels <= n_max. Columns whose field level can reach
// the cut are not unitary; the check runs on the safe subspace only.
inline CMat evolution_operator(const JCConfig& config) {
    config.validate();
    const double ot = config.rabi() * config.interaction_time;
    const int levels = config.n_max + 1;
    CMat u = CMat::Zero(2 * levels, 2 * levels);
    const Complex mi(0.0, -1.0);
    for (int n = 0; n < levels; ++n) {
        u(detail::idx(n, 0), detail::idx(n, 0)) = std::cos(ot * std::sqrt(double(n)));
        u(detail::idx(n, 1), detail::idx(n, 1)) = std::cos(ot * std::sqrt(n + 1.0));
        // a' |g><e| : |n, e> -> sin(OT sqrt(n+1)) |n+1, g>
        if (n + 1 < levels) u(detail::idx(n + 1, 0), detail::idx(n, 1)) = mi * std::sin(ot * std::sqrt(n + 1.0));
        // a |e><g| : |n, g> -> sin(OT sqrt(n)) |n-1, e>
        if (n >= 1) u(detail::idx(n - 1, 1), detail::idx(n, 0)) = mi * std::sin(ot * std::sqrt(double(n)));
    }
    // Unitarity on field levels <= n_max - 2 for both atom states.
    const Eigen::Index safe = detail::idx(config.n_max - 2, 1) + 1;
    const CMat gram = u.adjoint() * u;
    if ((gram.topLeftCorner(safe, safe) - CMat::Identity(safe, safe)).cwiseAbs().maxCoeff() > 1e-9)
        throw NumericError("truncation too small: evolution not unitary on the safe subspace");
    return u;
}

// M(g) = cos(OT sqrt(N)), M(e) = -i sin(OT sqrt(1+N))/sqrt(1+N) a,
// validated against the <g|U|g> and <e|U|g> blocks.
inline std::pair<CMat, CMat> detection_operators(const JCConfig& config) {
    config.validate();
    const double ot = config.rabi() * config.interaction_time;
    const int levels = config.n_max + 1;
    CMat mg = CMat::Zero(levels, levels), me = CMat::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) {
        mg(n, n) = std::cos(ot * std::sqrt(double(n)));
        if (n >= 1) me(n - 1, n) = Complex(0.0, -1.0) * std::sin(ot * std::sqrt(double(n)));
    }
    const CMat u = evolution_operator(config);
    for (int n = 0; n < levels; ++n)
        for (int m = 0; m < levels; ++m) {
            if (std::abs(u(detail::idx(n, 0), detail::idx(m, 0)) - mg(n, m)) > 1e-10 ||
                std::abs(u(detail::idx(n, 1), detail::idx(m, 0)) - me(n, m)) > 1e-10)
                throw NumericError("detection operators disagree with the evolution blocks");
        }
    return {mg, me};
}

// POVM on the field: Pi(g) = cos^2(OT sqrt(N)), Pi(e) = sin^2(OT sqrt(N)).
inline std::pair<HermitianOperator, HermitianOperator> povm(const JCConfig& config) {
    config.validate();
    const double ot = config.rabi() * config.interaction_time;
    const int levels = config.n_max + 1;
    CMat pg = CMat::Zero(levels, levels), pe = CMat::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) {
        const double c = std::cos(ot * std::sqrt(double(n)));
        pg(n, n) = c * c;
        pe(n, n) = 1.0 - c * c;
    }
    return {HermitianOperator(std::move(pg), kFieldBasis), HermitianOperator(std::move(pe), kFieldBasis)};
}

// p(g) = |c0|^2 + |c1|^2 cos^2(OT), p(e) = |c1|^2 sin^2(OT). The free
// phases never enter: the POVM is diagonal in the Fock basis.
inline JCOutcomeDistribution outcome_probabilities(const JCConfig& config) {
    config.validate();
    const double ot = config.rabi() * config.interaction_time;
    const double c1sq = std::norm(config.c1);
    const double sn = std::sin(ot);
    JCOutcomeDistribution d;
    d.p_e = c1sq * sn * sn;
    d.p_g = 1.0 - d.p_e;
    return d;
}

// Both outcome probabilities are stationary in omega exactly when
// |c1| = 1 and sin^2(OT) = 1 simultaneously.
inline bool degenerate_point(const JCConfig& config) {
    const double sn = std::sin(config.rabi() * config.interaction_time);
    return std::abs(std::norm(config.c1) - 1.0) < 1e-12 && std::abs(sn * sn - 1.0) < 1e-12;
}

// F(omega) = (OT/omega)^2 |c1|^2 cos^2(OT) / (1 - |c1|^2 sin^2(OT)).
// At the degenerate point the 0/0 limit is zero (no outcome moves).
inline double closed_form_fi(const JCConfig& config) {
    config.validate();
    if (degenerate_point(config)) return 0.0;
    const double ot = config.rabi() * config.interaction_time;
    const double c1sq = std::norm(config.c1);
    const double cs = std::cos(ot), sn = std::sin(ot);
    const double scale = ot / config.omega;
    return scale * scale * c1sq * cs * cs / (1.0 - c1sq * sn * sn);
}

// J(omega) = 4 t^2 |c0 c1|^2; zero whenever the field starts in an energy
// eigenstate.
inline double closed_form_qfi(const JCConfig& config) {
    config.validate();
    const double t = config.free_time;
    return 4.0 * t * t * std::norm(config.c0) * std::norm(config.c1);
}

// |psi(omega)> = c0 e^{-i omega t / 2} |0> + c1 e^{-3 i omega t / 2} |1>
// in the field Fock basis, with its analytic omega-derivative.
inline StateFamily state_family(const JCConfig& config) {
    config.validate();
    const int levels = config.n_max + 1;
    StateFamily family;
    family.lo = 0.0;
    family.value = [config, levels](double w) {
        CVec amps = CVec::Zero(levels);
        const double t = config.free_time;
        amps[0] = config.c0 * std::exp(Complex(0.0, -0.5 * w * t));
        amps[1] = config.c1 * std::exp(Complex(0.0, -1.5 * w * t));
        return StateVector(amps, kFieldBasis);
    };
    family.derivative = [config, levels](double w) {
        CVec d = CVec::Zero(levels);
        const double t = config.free_time;
        d[0] = config.c0 * Complex(0.0, -0.5 * t) * std::exp(Complex(0.0, -0.5 * w * t));
        d[1] = config.c1 * Complex(0.0, -1.5 * t) * std::exp(Complex(0.0, -1.5 * w * t));
        return d;
    };
    return family;
}

inline OperatorFamily density_family(const JCConfig& config) {
    const StateFamily states = state_family(config);
    OperatorFamily family;
    family.lo = 0.0;
    family.value = [states](double w) { return DensityOperator::pure(states.value(w)); };
    family.derivative = [states](double w) {
        const CVec psi = states.value(w).amplitudes();
        const CVec dpsi = states.derivative(w);
        return (dpsi * psi.adjoint() + psi * dpsi.adjoint()).eval();
    };
    return family;
}

// The omega-dependent POVM family {Pi(g), Pi(e)} with analytic derivative
// through dOmega/domega = Omega / (2 omega).
inline POVMFamily povm_family(const JCConfig& config) {
    config.validate();
    POVMFamily family;
    family.space = OutcomeSpace::discrete({0.0, 1.0});  // 0 = g, 1 = e
    family.elements.lo = 0.0;
    family.elements.value = [config](double w) {
        JCConfig at = config;
        at.omega = w;
        auto [pg, pe] = povm(at);
        return PovmElements{pg, pe};
    };
    family.elements.derivative = [config](double w) {
        const int levels = config.n_max + 1;
        const double omega_t = config.rabi_at(w) * config.interaction_time;
        const double drabi = config.rabi_at(w) / (2.0 * w);
        CMat dpg = CMat::Zero(levels, levels);
        for (int n = 0; n < levels; ++n) {
            const double rt = std::sqrt(double(n));
            dpg(n, n) = -std::sin(2.0 * omega_t * rt) * rt * config.interaction_time * drabi;
        }
        return std::vector<CMat>{dpg, -dpg};
    };
    return family;
}

// Outcome distribution over omega for estimation runs, with analytic
// derivative.
inline DensityFamily distribution_family(const JCConfig& config) {
    config.validate();
    DensityFamily family;
    family.lo = 0.0;
    family.value = [config](double w) {
        JCConfig at = config;
        at.omega = w;
        const JCOutcomeDistribution d = outcome_probabilities(at);
        RealVec p(2);
        p << d.p_g, d.p_e;
        return p;
    };
    family.derivative = [config](double w) {
        const double ot = config.rabi_at(w) * config.interaction_time;
        const double dot = config.interaction_time * config.rabi_at(w) / (2.0 * w);
        const double dpe = std::norm(config.c1) * std::sin(2.0 * ot) * dot;
        RealVec dp(2);
        dp << -dpe, dpe;
        return dp;
    };
    return family;
}

}  // namespace metro::jaynescummings
