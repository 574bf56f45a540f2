#pragma once

#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/qbounds.hpp"
#include "metro/quadrature.hpp"
#include "metro/states.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace metro::oscillator {

// Mechanical oscillator in a uniform gravitational field,
// H = p^2/2m + k x^2/2 + m g x, prepared by cooling to the ground state
// and displacing by dx. The unknown parameter is g. hbar = 1 throughout;
// lengths in units of l = 1/sqrt(m w), energies in units of w.
struct OscillatorConfig {
    double mass = 1.0;
    double stiffness = 1.0;
    double gravity = 0.0;
    double displacement = 1.0;
    double time = 0.0;
    int n_max = 0;  // Fock truncation; 0 selects the smallest tail-safe value
    int grid_points = 2001;
    double grid_padding = 10.0;  // half-width beyond |xi_delta| + |xi_g|, in xi units

    double omega() const { return std::sqrt(stiffness / mass); }
    double length() const { return 1.0 / std::sqrt(mass * omega()); }
    double xi_g_at(double g) const { return mass * g / (stiffness * length()); }
    double xi_g() const { return xi_g_at(gravity); }
    double xi_delta() const { return displacement / length(); }
    // d(xi_g)/dg; all g-derivatives chain through this factor.
    double dxi_g() const { return mass / (stiffness * length()); }
    double shift_at(double g) const { return xi_delta() - xi_g_at(g); }
    double shift() const { return shift_at(gravity); }

    void validate() const {
        if (!(mass > 0.0) || !(stiffness > 0.0)) throw UsageError("mass and stiffness must be positive");
        if (!(time >= 0.0)) throw UsageError("time must be nonnegative");
        if (grid_points < 3) throw UsageError("grid_points must be at least 3");
        if (!std::isfinite(xi_g()) || !std::isfinite(xi_delta()))
            throw UsageError("dimensionless coordinates must be finite");
    }
};

// Coherent-state expansion over the displaced-oscillator eigenbasis.
struct FockExpansion {
    CVec coefficients;
    RealVec energies;
};

namespace detail {

inline double poisson_tail(double mu, int n) {
    double term = std::exp(-mu), cum = term;
    for (int k = 1; k <= n; ++k) {
        term *= mu / k;
        cum += term;
    }
    return std::max(0.0, 1.0 - cum);
}

}  // namespace detail

// Smallest truncation with Poisson tail mass below 1e-12 (never below 20);
// an explicit n_max that leaves more tail than that is rejected.
inline int resolved_n_max(const OscillatorConfig& config) {
    const double mu = 0.5 * config.shift() * config.shift();
    if (config.n_max > 0) {
        if (detail::poisson_tail(mu, config.n_max) > 1e-12)
            throw NumericError("increase n_max: Fock tail mass above 1e-12");
        return config.n_max;
    }
    int n = 20;
    while (detail::poisson_tail(mu, n) > 1e-12) {
        ++n;
        if (n > 150) throw NumericError("increase n_max: truncation exceeds the double-safe range");
    }
    return n;
}

// Physicists' Hermite polynomial by the ascending recurrence
// H_{n+1} = 2 x H_n - 2 n H_{n-1}.
inline double hermite_h(int n, double x) {
    if (n < 0) throw UsageError("Hermite degree must be nonnegative");
    double hm = 1.0, h = 2.0 * x;
    if (n == 0) return hm;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = next;
    }
    return h;
}

// Energy eigenstate psi_n evaluated at the dimensionless coordinate xi.
// The normalized recurrence keeps H_n / sqrt(2^n n!) in range; n beyond
// 150 would overflow the factorial scaling and is rejected.
inline double eigenstate(int n, const OscillatorConfig& config, double xi) {
    config.validate();
    if (n < 0 || n > resolved_n_max(config)) throw UsageError("eigenstate index outside truncation");
    if (n > 150) throw NumericError("eigenstate index in the factorial overflow regime");
    const double y = xi + config.xi_g();
    const double prefactor = std::pow(config.mass * config.omega() / M_PI, 0.25);
    double um = prefactor * std::exp(-0.5 * y * y);  // n = 0
    if (n == 0) return um;
    double u = std::sqrt(2.0) * y * um;  // n = 1
    for (int k = 2; k <= n; ++k) {
        const double next = (std::sqrt(2.0) * y * u - std::sqrt(k - 1.0) * um) / std::sqrt(double(k));
        um = u;
        u = next;
    }
    return u;
}

// E_n = w (n + 1/2) - m g^2 / (2 w^2).
inline double energy(int n, const OscillatorConfig& config) {
    if (n < 0) throw UsageError("energy level must be nonnegative");
    const double w = config.omega();
    return w * (n + 0.5) - config.mass * config.gravity * config.gravity / (2.0 * w * w);
}

// c_n = (-1)^n (2^n n!)^{-1/2} (xi_delta - xi_g)^n exp(-(xi_delta - xi_g)^2 / 4).
inline FockExpansion fock_coefficients(const OscillatorConfig& config) {
    config.validate();
    const int n_max = resolved_n_max(config);
    const double s = config.shift();
    FockExpansion fe;
    fe.coefficients = CVec::Zero(n_max + 1);
    fe.energies = RealVec::Zero(n_max + 1);
    double c = std::exp(-0.25 * s * s);
    for (int n = 0; n <= n_max; ++n) {
        fe.coefficients[n] = c;
        fe.energies[n] = energy(n, config);
        c *= -s / std::sqrt(2.0 * (n + 1.0));
    }
    return fe;
}

// Closed-form evolved coherent state psi(x, t), x in physical units.
inline Complex wavefunction(const OscillatorConfig& config, double x, double t) {
    config.validate();
    const double w = config.omega();
    const double xi = x / config.length();
    const double xg = config.xi_g();
    const double s = config.shift();
    const double y = xi + xg;
    const Complex phase = std::exp(Complex(0.0, -0.5 * w * t * (1.0 - xg * xg)));
    const Complex rotating = std::exp(Complex(0.0, -w * t));
    const Complex envelope =
        std::exp(-rotating * (0.5 * s * s * std::cos(w * t) + s * y) - Complex(0.5 * y * y, 0.0));
    return std::pow(config.mass * w / M_PI, 0.25) * phase * envelope;
}

// J(g) = 8 m / w^3 sin^2(w t / 2).
inline double closed_form_qfi(const OscillatorConfig& config) {
    config.validate();
    const double w = config.omega();
    const double sn = std::sin(0.5 * w * config.time);
    return 8.0 * config.mass / (w * w * w) * sn * sn;
}

// F_H(g) = 2 m / w^3, independent of t and g. This is the generic-point
// value; at xi_delta = xi_g the outcome distribution is stationary in g
// and the pointwise FI degenerates to zero.
inline double closed_form_energy_fi(const OscillatorConfig& config) {
    config.validate();
    const double w = config.omega();
    return 2.0 * config.mass / (w * w * w);
}

// Reference value K_X = m / w^3 [2 + (xi_delta - xi_g)^2]. The full
// tangent-vector sum oscillates with the evolution phase,
//   4 sum_n <d_g n | rho(t) | d_g n> = 2 m / w^3 [1 + s^2 (1 - cos 2 w t)],
// and coincides with this reference exactly where cos(2 w t) = 1/2.
inline double closed_form_kx(const OscillatorConfig& config) {
    config.validate();
    const double w = config.omega();
    const double s = config.shift();
    return config.mass / (w * w * w) * (2.0 + s * s);
}

// I_p^{n,m} = integral of xi^p H_n H_m exp(-xi^2), by the recurrence
// I_p = (p-1)/2 I_{p-2} + n I_{p-1}^{n-1,m} + m I_{p-1}^{n,m-1}
// with base I_0^{n,m} = sqrt(pi) 2^n n! delta_nm.
inline double hermite_integral(int p, int n, int m) {
    if (p < 0 || n < 0 || m < 0) return 0.0;
    if (p > 12 || n > 60 || m > 60)
        throw NumericError("hermite_integral outside the overflow-safe range (p <= 12, n,m <= 60)");
    if (p == 0) {
        if (n != m) return 0.0;
        return std::exp(0.5 * std::log(M_PI) + n * std::log(2.0) + std::lgamma(n + 1.0));
    }
    return 0.5 * (p - 1) * hermite_integral(p - 2, n, m) + n * hermite_integral(p - 1, n - 1, m) +
           m * hermite_integral(p - 1, n, m - 1);
}

// --- grid machinery -------------------------------------------------------

// Symmetric spatial grid in physical units covering every Gaussian factor.
inline OutcomeSpace spatial_grid(const OscillatorConfig& config) {
    config.validate();
    const double half =
        (std::abs(config.xi_delta()) + std::abs(config.xi_g()) + config.grid_padding) * config.length();
    return OutcomeSpace::continuous(-half, half, config.grid_points);
}

namespace detail {

// Rows 0..n_max of the eigenbasis evaluated on the grid nodes (no weights).
inline Eigen::MatrixXd eigenbasis_on_grid(const OscillatorConfig& config, double g, int n_max,
                                          const OutcomeSpace& space) {
    const double prefactor = std::pow(config.mass * config.omega() / M_PI, 0.25);
    const double inv_l = 1.0 / config.length();
    const double xg = config.xi_g_at(g);
    Eigen::MatrixXd basis(n_max + 1, space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        const double y = space.nodes()[i] * inv_l + xg;
        double um = prefactor * std::exp(-0.5 * y * y);
        basis(0, static_cast<Eigen::Index>(i)) = um;
        if (n_max == 0) continue;
        double u = std::sqrt(2.0) * y * um;
        basis(1, static_cast<Eigen::Index>(i)) = u;
        for (int k = 2; k <= n_max; ++k) {
            const double next = (std::sqrt(2.0) * y * u - std::sqrt(k - 1.0) * um) / std::sqrt(double(k));
            um = u;
            u = next;
            basis(k, static_cast<Eigen::Index>(i)) = u;
        }
    }
    return basis;
}

inline CVec wavefunction_on_grid(const OscillatorConfig& config, double g, const OutcomeSpace& space) {
    OscillatorConfig at = config;
    at.gravity = g;
    CVec psi(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        psi[static_cast<Eigen::Index>(i)] = wavefunction(at, space.nodes()[i], config.time);
    return psi;
}

}  // namespace detail

inline const char* kGridBasis = "oscillator-grid";
inline const char* kFockBasis = "oscillator-fock";

// psi(x, t) as a normalized grid state; the family parameter is g.
inline StateFamily wavefunction_family(const OscillatorConfig& config) {
    config.validate();
    const OutcomeSpace space = spatial_grid(config);
    RealVec sqw(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        sqw[static_cast<Eigen::Index>(i)] = std::sqrt(space.weights()[i]);
    StateFamily family;
    family.value = [config, space, sqw](double g) {
        const CVec psi = detail::wavefunction_on_grid(config, g, space);
        return StateVector(psi.cwiseProduct(sqw.cast<Complex>()), kGridBasis);
    };
    return family;
}

// Coefficients of psi(x, t; g) in the eigenbasis frozen at the config's
// own g. At the base point these are c_n exp(-i E_n t); away from it the
// frozen basis keeps the representation gauge-consistent, which the moving
// eigenbasis would not.
inline StateFamily fock_state_family(const OscillatorConfig& config) {
    config.validate();
    const int n_max = resolved_n_max(config);
    const OutcomeSpace space = spatial_grid(config);
    Eigen::MatrixXd projector =
        detail::eigenbasis_on_grid(config, config.gravity, n_max, space);  // rows: <n(g0)|
    for (std::size_t i = 0; i < space.size(); ++i)
        projector.col(static_cast<Eigen::Index>(i)) *= space.weights()[i];
    StateFamily family;
    family.value = [config, space, projector](double g) {
        const CVec coeff = projector * detail::wavefunction_on_grid(config, g, space);
        return StateVector(coeff, kFockBasis);
    };
    return family;
}

// Rank-one density family built on the frozen-basis coefficients.
inline OperatorFamily density_family(const OscillatorConfig& config) {
    const StateFamily states = fock_state_family(config);
    OperatorFamily family;
    family.value = [states](double g) { return DensityOperator::pure(states.value(g)); };
    return family;
}

// Energy eigenbasis as a grid-represented projective family over g.
inline ProjectiveFamily energy_projective_family(const OscillatorConfig& config) {
    config.validate();
    const int n_max = resolved_n_max(config);
    const OutcomeSpace space = spatial_grid(config);
    RealVec sqw(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        sqw[static_cast<Eigen::Index>(i)] = std::sqrt(space.weights()[i]);

    ProjectiveFamily proj;
    for (int n = 0; n <= n_max; ++n) proj.labels.push_back(n);
    proj.eigenbasis.value = [config, space, sqw, n_max](double g) {
        const Eigen::MatrixXd basis = detail::eigenbasis_on_grid(config, g, n_max, space);
        std::vector<StateVector> states;
        states.reserve(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            const RealVec amps = basis.row(n).transpose().cwiseProduct(sqw);
            states.emplace_back(amps.cast<Complex>(), kGridBasis);
        }
        return states;
    };
    return proj;
}

// Energy projectors |n(g)><n(g)| expressed in the frozen Fock basis, as a
// parameter-dependent POVM over the quantum-number outcomes.
inline POVMFamily energy_povm_family(const OscillatorConfig& config) {
    config.validate();
    const int n_max = resolved_n_max(config);
    const OutcomeSpace space = spatial_grid(config);
    Eigen::MatrixXd projector = detail::eigenbasis_on_grid(config, config.gravity, n_max, space);
    for (std::size_t i = 0; i < space.size(); ++i)
        projector.col(static_cast<Eigen::Index>(i)) *= space.weights()[i];

    std::vector<double> labels;
    for (int n = 0; n <= n_max; ++n) labels.push_back(n);

    POVMFamily povm;
    povm.space = OutcomeSpace::discrete(labels);
    povm.elements.value = [config, space, projector, n_max](double g) {
        // Columns: coordinates of |n(g)> in the frozen basis.
        const Eigen::MatrixXd overlap =
            projector * detail::eigenbasis_on_grid(config, g, n_max, space).transpose();
        PovmElements elements;
        elements.reserve(n_max + 1);
        for (int n = 0; n <= n_max; ++n) {
            const Eigen::MatrixXd pi = overlap.col(n) * overlap.col(n).transpose();
            elements.emplace_back(pi.cast<Complex>(), kFockBasis);
        }
        return elements;
    };
    return povm;
}

// Outcome distribution of the energy measurement, p_n = |c_n(g)|^2
// (Poissonian with mean (xi_delta - xi_g)^2 / 2), with its analytic
// g-derivative.
inline DensityFamily energy_distribution_family(const OscillatorConfig& config) {
    config.validate();
    const int n_max = resolved_n_max(config);
    DensityFamily family;
    family.value = [config, n_max](double g) {
        const double mu = 0.5 * config.shift_at(g) * config.shift_at(g);
        RealVec p(n_max + 1);
        p[0] = std::exp(-mu);
        for (int n = 1; n <= n_max; ++n) p[n] = p[n - 1] * mu / n;
        return p;
    };
    family.derivative = [config, n_max](double g) {
        const double s = config.shift_at(g);
        const double dmu = -s * config.dxi_g();
        const double mu = 0.5 * s * s;
        RealVec p(n_max + 1), dp(n_max + 1);
        p[0] = std::exp(-mu);
        dp[0] = -p[0] * dmu;
        for (int n = 1; n <= n_max; ++n) {
            p[n] = p[n - 1] * mu / n;
            dp[n] = dmu * (p[n - 1] - p[n]);
        }
        return dp;
    };
    return family;
}

}  // namespace metro::oscillator
