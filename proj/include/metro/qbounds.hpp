#pragma once

#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/fisher.hpp"
#include "metro/measure.hpp"
#include "metro/quadrature.hpp"
#include "metro/states.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace metro {

// POVM whose elements may depend on the unknown parameter, defined on an
// outcome space with sample-space measure m. Completeness reads
// integral dx m(x) Pi(x) = identity (a plain sum for discrete outcomes).
struct POVMFamily {
    OutcomeSpace space;
    PovmElementsFamily elements;
    SampleMeasure measure = SampleMeasure::counting();
};

// Ordered orthonormal eigenbasis depending on the parameter. Outcomes are
// labeled by quantum numbers, which keeps the sample space fixed while the
// spectrum moves with the parameter. Only discrete spectra are supported.
struct ProjectiveFamily {
    ParametricFamily<std::vector<StateVector>, std::vector<CVec>> eigenbasis;
    std::vector<int> labels;
};

struct QuantumFisherReport {
    double total = 0.0;
    double term_state = 0.0;
    double term_measure = 0.0;
    double term_povm = 0.0;
    double term_cross = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

inline double trace_product(const CMat& a, const CMat& b) {
    return (a.transpose().cwiseProduct(b)).sum().real();
}

inline void check_povm_elements(const OutcomeSpace& space, const PovmElements& elements,
                                const RealVec& m) {
    if (elements.size() != space.size()) throw UsageError("POVM element count must match outcome grid");
    const Eigen::Index dim = elements.front().dim();
    CMat sum = CMat::Zero(dim, dim);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].dim() != dim) throw UsageError("POVM elements must share a dimension");
        if (elements[i].min_eigenvalue() < -tol::matrix)
            throw NumericError("invalid POVM family: element not positive semidefinite");
        sum += space.weights()[i] * m[static_cast<Eigen::Index>(i)] * elements[i].matrix();
    }
    if ((sum - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol::completeness)
        throw NumericError("invalid POVM family: completeness violated");
}

inline void check_orthonormal(const std::vector<StateVector>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            const Complex g = basis[i].overlap(basis[j]);
            const double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - target) > tol::orthonormal)
                throw NumericError("projective family not orthonormal");
        }
}

}  // namespace detail

// Symmetric logarithmic derivative: the Hermitian solution L of
// d rho = (rho L + L rho) / 2, assembled in the eigenbasis of rho.
// Matrix elements between eigenvectors whose populations both vanish are
// set to zero; a nonzero derivative there means the rank of the family
// changes and no SLD exists.
inline HermitianOperator sld(const OperatorFamily& rho_family, double lambda) {
    const DensityOperator rho = rho_family.value(lambda);
    const CMat drho = fd_derivative(rho_family, lambda);
    auto [pops, vecs] = rho.eigensystem();

    const CMat d_eig = vecs.adjoint() * drho * vecs;
    const double off_scale = std::max(1.0, d_eig.cwiseAbs().maxCoeff());
    CMat l_eig = CMat::Zero(rho.dim(), rho.dim());
    for (Eigen::Index i = 0; i < rho.dim(); ++i)
        for (Eigen::Index j = 0; j < rho.dim(); ++j) {
            const double denom = pops[i] + pops[j];
            if (denom > tol::sld_support) {
                l_eig(i, j) = 2.0 * d_eig(i, j) / denom;
            } else if (std::abs(d_eig(i, j)) > 1e-8 * off_scale) {
                throw NumericError("rank-changing family: SLD undefined off the support");
            }
        }
    CMat l = vecs * l_eig * vecs.adjoint();
    l = 0.5 * (l + l.adjoint().eval());
    return HermitianOperator(std::move(l), rho.basis_label());
}

// Quantum Fisher information J = tr(rho L^2).
inline double qfi(const OperatorFamily& rho_family, double lambda) {
    const DensityOperator rho = rho_family.value(lambda);
    const CMat l = sld(rho_family, lambda).matrix();
    return detail::trace_product(rho.matrix(), l * l);
}

// Pure-state reduction J = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2).
inline double qfi_pure(const StateFamily& psi_family, double lambda) {
    const StateVector psi = psi_family.value(lambda);
    CVec dpsi;
    if (psi_family.has_derivative()) {
        dpsi = psi_family.derivative(lambda);
    } else {
        const double h = psi_family.step_at(lambda);
        if (!(lambda - h > psi_family.lo) || !(lambda + h < psi_family.hi))
            throw NumericError("cannot difference at boundary");
        const StateVector plus = psi_family.value(lambda + h);
        const StateVector minus = psi_family.value(lambda - h);
        if (std::abs(plus.amplitudes().norm() - 1.0) > 1e-8 ||
            std::abs(minus.amplitudes().norm() - 1.0) > 1e-8)
            throw NumericError("state norm drifts across the FD stencil");
        dpsi = (plus.amplitudes() - minus.amplitudes()) / (2.0 * h);
    }
    const double grad2 = dpsi.squaredNorm();
    const Complex overlap = psi.amplitudes().dot(dpsi);
    return 4.0 * (grad2 - std::norm(overlap));
}

// Fisher information of a parameter-dependent POVM, expanded into the
// state term, the POVM term and their interference. The total is cross
// checked against the plain FI of the induced outcome distribution.
inline QuantumFisherReport povm_fi(const OperatorFamily& rho_family, const POVMFamily& povm,
                                   double lambda) {
    if (!povm.measure.is_static(povm.space, lambda))
        throw UsageError("povm_fi requires a parameter-independent measure; see measure_fi_quantum");

    const RealVec m = povm.measure.on_grid(povm.space, lambda);
    const PovmElements elements = povm.elements.value(lambda);
    detail::check_povm_elements(povm.space, elements, m);
    const double h = std::max(rho_family.step_at(lambda), povm.elements.step_at(lambda));
    for (const double at : {lambda - h, lambda + h})
        if (at > povm.elements.lo && at < povm.elements.hi)
            detail::check_povm_elements(povm.space, povm.elements.value(at), m);

    const DensityOperator rho = rho_family.value(lambda);
    check_same_basis(rho.basis_label(), elements.front().basis_label(), "povm_fi");
    const CMat drho = fd_derivative(rho_family, lambda);
    const std::vector<CMat> delements = fd_derivative(povm.elements, lambda);

    const Eigen::Index n = static_cast<Eigen::Index>(povm.space.size());
    RealVec f_state = RealVec::Zero(n), f_povm = RealVec::Zero(n), f_cross = RealVec::Zero(n),
            f_direct = RealVec::Zero(n), q = RealVec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double prob = detail::trace_product(elements[i].matrix(), rho.matrix());
        const double a = detail::trace_product(elements[i].matrix(), drho);
        const double b = detail::trace_product(delements[i], rho.matrix());
        q[i] = m[i] * prob;
        if (q[i] < tol::probability_floor) {
            if (std::abs(m[i] * (a + b)) > tol::derivative_floor)
                throw NumericError("singular support shift");
            continue;
        }
        f_state[i] = m[i] * a * a / prob;
        f_povm[i] = m[i] * b * b / prob;
        f_cross[i] = 2.0 * m[i] * a * b / prob;
        f_direct[i] = m[i] * (a + b) * (a + b) / prob;
    }
    if (std::abs(integrate_values(povm.space, q).value - 1.0) > tol::normalization)
        throw NumericError("model not normalized");

    QuantumFisherReport report;
    report.term_state = integrate_values(povm.space, f_state).value;
    report.term_povm = integrate_values(povm.space, f_povm).value;
    report.term_cross = integrate_values(povm.space, f_cross).value;
    report.total = report.term_state + report.term_povm + report.term_cross;
    const QuadratureResult direct = integrate_values(povm.space, f_direct);
    report.error_estimate = direct.error_estimate;

    // Oracle: the same number through the classical route.
    ClassicalModel induced;
    induced.space = povm.space;
    induced.m = povm.measure;
    induced.p.fd_step = std::max(rho_family.fd_step, povm.elements.fd_step);
    induced.p.lo = std::max(rho_family.lo, povm.elements.lo);
    induced.p.hi = std::min(rho_family.hi, povm.elements.hi);
    induced.p.value = [rho_family, povm](double l) {
        const CMat r = rho_family.value(l).matrix();
        const PovmElements el = povm.elements.value(l);
        RealVec out(el.size());
        for (std::size_t i = 0; i < el.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = detail::trace_product(el[i].matrix(), r);
        return out;
    };
    if (rho_family.has_derivative() && povm.elements.has_derivative()) {
        induced.p.derivative = [rho_family, povm](double l) {
            const CMat r = rho_family.value(l).matrix();
            const CMat dr = rho_family.derivative(l);
            const PovmElements el = povm.elements.value(l);
            const std::vector<CMat> del = povm.elements.derivative(l);
            RealVec out(el.size());
            for (std::size_t i = 0; i < el.size(); ++i)
                out[static_cast<Eigen::Index>(i)] = detail::trace_product(el[i].matrix(), dr) +
                                                    detail::trace_product(del[i], r);
            return out;
        };
    }
    const double oracle = generalized_fi(induced, lambda).total;
    if (std::abs(report.total - oracle) >
        1e-7 * std::max(std::abs(report.total), std::abs(oracle)) + 1e-12)
        throw NumericError("POVM FI disagrees with the induced classical model");
    return report;
}

// Fisher information when the POVM is fixed but the sample-space measure
// carries the parameter. The cross term vanishes identically whenever the
// parameter-dependent completeness relation holds; it is reported and
// checked rather than assumed.
inline QuantumFisherReport measure_fi_quantum(const OperatorFamily& rho_family,
                                              const OutcomeSpace& space,
                                              const PovmElements& elements,
                                              const SampleMeasure& measure, double lambda) {
    const double h = std::max(rho_family.step_at(lambda),
                              measure.fd_step * std::max(1.0, std::abs(lambda)));
    for (const double at : {lambda, lambda - h, lambda + h})
        detail::check_povm_elements(space, elements, measure.on_grid(space, at));

    const DensityOperator rho = rho_family.value(lambda);
    const CMat drho = fd_derivative(rho_family, lambda);
    const RealVec m = measure.on_grid(space, lambda);
    const RealVec dm = measure.derivative_on_grid(space, lambda);

    const Eigen::Index n = static_cast<Eigen::Index>(space.size());
    RealVec f_state = RealVec::Zero(n), f_meas = RealVec::Zero(n), f_cross = RealVec::Zero(n),
            f_direct = RealVec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double prob = detail::trace_product(elements[static_cast<std::size_t>(i)].matrix(),
                                                  rho.matrix());
        const double a = detail::trace_product(elements[static_cast<std::size_t>(i)].matrix(), drho);
        const double q = m[i] * prob;
        const double dq = dm[i] * prob + m[i] * a;
        if (q < tol::probability_floor) {
            if (std::abs(dq) > tol::derivative_floor) throw NumericError("singular support shift");
            continue;
        }
        f_state[i] = m[i] * a * a / prob;
        f_meas[i] = prob * dm[i] * dm[i] / m[i];
        f_cross[i] = 2.0 * dm[i] * a;
        f_direct[i] = dq * dq / q;
    }

    QuantumFisherReport report;
    report.term_state = integrate_values(space, f_state).value;
    report.term_measure = integrate_values(space, f_meas).value;
    report.term_cross = integrate_values(space, f_cross).value;
    report.total = report.term_state + report.term_measure + report.term_cross;
    report.error_estimate = integrate_values(space, f_direct).error_estimate;
    if (std::abs(report.term_cross) >= 1e-8)
        throw NumericError("measure cross term failed to vanish; completeness inconsistent");
    return report;
}

namespace detail {

// Finite-difference eigenbasis tangents in the global-phase gauge that
// maximizes Re<x(l)|x(l+-h)>. For real eigenbases this is exact.
inline std::vector<CVec> eigenbasis_tangents(const ProjectiveFamily& proj, double lambda) {
    const auto& family = proj.eigenbasis;
    if (family.has_derivative()) return family.derivative(lambda);
    const double h = family.step_at(lambda);
    if (!(lambda - h > family.lo) || !(lambda + h < family.hi))
        throw NumericError("cannot difference at boundary");

    const std::vector<StateVector> center = family.value(lambda);
    const std::vector<StateVector> plus = family.value(lambda + h);
    const std::vector<StateVector> minus = family.value(lambda - h);
    check_orthonormal(plus);
    check_orthonormal(minus);
    if (plus.size() != center.size() || minus.size() != center.size())
        throw NumericError("eigenbasis size changes across the FD stencil");

    std::vector<CVec> tangents;
    tangents.reserve(center.size());
    for (std::size_t x = 0; x < center.size(); ++x) {
        auto aligned = [&](const StateVector& s) -> CVec {
            const Complex z = center[x].overlap(s);
            if (std::abs(z) < 0.5)
                throw NumericError("eigenbasis continuation lost across the FD stencil");
            return s.amplitudes() * (std::conj(z) / std::abs(z));
        };
        tangents.push_back((aligned(plus[x]) - aligned(minus[x])) / (2.0 * h));
    }
    return tangents;
}

}  // namespace detail

// Geometric information of a parameter-dependent eigenbasis:
// 4 sum_x <dx|rho|dx>. The truncated sum must have converged; a last term
// still contributing more than 1e-10 of the running total is rejected.
inline double kx(const ProjectiveFamily& proj, const DensityOperator& rho, double lambda) {
    const std::vector<StateVector> basis = proj.eigenbasis.value(lambda);
    if (!proj.labels.empty() && proj.labels.size() != basis.size())
        throw UsageError("projective family labels do not match the eigenbasis");
    detail::check_orthonormal(basis);
    const std::vector<CVec> tangents = detail::eigenbasis_tangents(proj, lambda);

    double total = 0.0, last = 0.0;
    for (const CVec& t : tangents) {
        last = 4.0 * (t.adjoint() * rho.matrix() * t)(0, 0).real();
        total += last;
    }
    if (total > 1e-12 && last > 1e-10 * total)
        throw NumericError("increase truncation: eigenbasis sum not converged");
    return total;
}

// Pure-state variant, avoiding the dense rank-one matrix.
inline double kx(const ProjectiveFamily& proj, const StateVector& psi, double lambda) {
    const std::vector<StateVector> basis = proj.eigenbasis.value(lambda);
    if (!proj.labels.empty() && proj.labels.size() != basis.size())
        throw UsageError("projective family labels do not match the eigenbasis");
    detail::check_orthonormal(basis);
    const std::vector<CVec> tangents = detail::eigenbasis_tangents(proj, lambda);

    double total = 0.0, last = 0.0;
    for (const CVec& t : tangents) {
        last = 4.0 * std::norm(t.dot(psi.amplitudes()));
        total += last;
    }
    if (total > 1e-12 && last > 1e-10 * total)
        throw NumericError("increase truncation: eigenbasis sum not converged");
    return total;
}

// Diagnostic middle bound 4 sum_x |<x|rho|dx>|^2 / <x|rho|x>, which sits
// between the POVM term of the FI expansion and the kx-based bound.
inline double kx_cauchy_bound(const ProjectiveFamily& proj, const DensityOperator& rho,
                              double lambda) {
    const std::vector<StateVector> basis = proj.eigenbasis.value(lambda);
    detail::check_orthonormal(basis);
    const std::vector<CVec> tangents = detail::eigenbasis_tangents(proj, lambda);

    double total = 0.0;
    for (std::size_t x = 0; x < basis.size(); ++x) {
        const CVec rx = rho.matrix() * basis[x].amplitudes();
        const double px = basis[x].amplitudes().dot(rx).real();
        const Complex num = rx.dot(tangents[x]);
        if (px < tol::probability_floor) {
            if (std::abs(num) > tol::derivative_floor) throw NumericError("singular support shift");
            continue;
        }
        total += 4.0 * std::norm(num) / px;
    }
    return total;
}

// Upper bound (sqrt(J) + sqrt(K))^2 on the FI of a parameter-dependent
// projective measurement. K = 0 recovers the Braunstein-Caves bound.
inline double projective_bound(double j, double k) {
    if (j < 0.0 || k < 0.0) throw UsageError("information inputs must be nonnegative");
    const double s = std::sqrt(j) + std::sqrt(k);
    return s * s;
}

// Additive bound J + I_m for a parameter-dependent sample-space measure.
inline double measure_bound(double j, double im) {
    if (j < 0.0 || im < 0.0) throw UsageError("information inputs must be nonnegative");
    return j + im;
}

}  // namespace metro
