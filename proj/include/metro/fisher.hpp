#pragma once

#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/measure.hpp"
#include "metro/quadrature.hpp"

#include <cmath>

namespace metro {

// Classical statistical model: densities p_lambda on an outcome space,
// normalized jointly with the sample-space measure m_lambda.
struct ClassicalModel {
    OutcomeSpace space;
    DensityFamily p;
    SampleMeasure m = SampleMeasure::counting();
};

// Total Fisher information with its decomposition into state, measure and
// cross contributions. All entries carry units 1/[lambda]^2.
struct FisherReport {
    double total = 0.0;
    double term_state = 0.0;
    double term_measure = 0.0;
    double term_cross = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

inline void check_joint_normalization(const ClassicalModel& model, double lambda) {
    const RealVec p = model.p.value(lambda);
    const RealVec m = model.m.on_grid(model.space, lambda);
    const double mass = integrate_values(model.space, m.cwiseProduct(p)).value;
    if (std::abs(mass - 1.0) > tol::normalization) throw NumericError("model not normalized");
}

inline void check_support(const RealVec& m, const RealVec& p) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m[i] <= tol::probability_floor && p[i] > 1e-9)
            throw NumericError("measure support mismatch");
}

}  // namespace detail

// Fisher information for a parameter-independent measure. Nodes where the
// joint density vanishes contribute zero unless the density derivative is
// nonzero there, which signals a moving support.
inline double classical_fi(const ClassicalModel& model, double lambda) {
    if (!model.m.is_static(model.space, lambda))
        throw UsageError("classical_fi requires a parameter-independent measure");
    detail::check_joint_normalization(model, lambda);
    if (!model.p.has_derivative()) {
        const double h = model.p.step_at(lambda);
        detail::check_joint_normalization(model, lambda + h);
        detail::check_joint_normalization(model, lambda - h);
    }

    const RealVec p = model.p.value(lambda);
    const RealVec m = model.m.on_grid(model.space, lambda);
    const RealVec dp = fd_derivative(model.p, lambda);
    detail::check_support(m, p);

    RealVec integrand = RealVec::Zero(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (m[i] * p[i] < tol::probability_floor) {
            if (std::abs(dp[i]) > tol::derivative_floor) throw NumericError("singular support shift");
            continue;
        }
        integrand[i] = m[i] * dp[i] * dp[i] / p[i];
    }
    return integrate_values(model.space, integrand).value;
}

// Generalized Fisher information || d/dlambda ln(m p) ||^2 for a
// parameter-dependent sample-space measure, with the three-term
// decomposition. The directly integrated total serves as an internal
// consistency oracle for the decomposition.
inline FisherReport generalized_fi(const ClassicalModel& model, double lambda) {
    detail::check_joint_normalization(model, lambda);
    if (!model.p.has_derivative() || !model.m.derivative) {
        const double h = std::max(model.p.step_at(lambda),
                                  model.m.fd_step * std::max(1.0, std::abs(lambda)));
        detail::check_joint_normalization(model, lambda + h);
        detail::check_joint_normalization(model, lambda - h);
    }

    const RealVec p = model.p.value(lambda);
    const RealVec m = model.m.on_grid(model.space, lambda);
    const RealVec dp = fd_derivative(model.p, lambda);
    const RealVec dm = model.m.derivative_on_grid(model.space, lambda);
    detail::check_support(m, p);

    const Eigen::Index n = p.size();
    RealVec f_state = RealVec::Zero(n), f_meas = RealVec::Zero(n), f_cross = RealVec::Zero(n),
            f_direct = RealVec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double q = m[i] * p[i];
        const double dq = dm[i] * p[i] + m[i] * dp[i];
        if (q < tol::probability_floor) {
            if (std::abs(dq) > tol::derivative_floor) throw NumericError("singular support shift");
            continue;
        }
        const double score_p = dp[i] / p[i];
        const double score_m = dm[i] / m[i];
        f_state[i] = q * score_p * score_p;
        f_meas[i] = q * score_m * score_m;
        f_cross[i] = 2.0 * q * score_p * score_m;
        f_direct[i] = dq * dq / q;
    }

    FisherReport report;
    report.term_state = integrate_values(model.space, f_state).value;
    report.term_measure = integrate_values(model.space, f_meas).value;
    report.term_cross = integrate_values(model.space, f_cross).value;
    report.total = report.term_state + report.term_measure + report.term_cross;

    const QuadratureResult direct = integrate_values(model.space, f_direct);
    report.error_estimate = direct.error_estimate;
    if (std::abs(direct.value - report.total) >
        1e-8 * std::max(1.0, std::max(std::abs(direct.value), std::abs(report.total))))
        throw NumericError("generalized FI decomposition inconsistent with direct norm");
    return report;
}

// Cramer-Rao variance bound 1/(n F) for n independent repetitions.
inline double crb_variance_bound(const FisherReport& report, long n) {
    if (n <= 0) throw UsageError("repetition count must be positive");
    if (!(report.total > 0.0)) throw NumericError("no information: bound infinite");
    return 1.0 / (static_cast<double>(n) * report.total);
}

}  // namespace metro
