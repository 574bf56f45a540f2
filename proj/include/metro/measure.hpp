#pragma once

#include "metro/common.hpp"
#include "metro/quadrature.hpp"

#include <cmath>
#include <functional>

namespace metro {

// Sample-space measure density m(lambda, x) >= 0 converting the counting /
// Lebesgue measure into the outcome measure. A parameter-dependent measure
// should carry its analytic derivative; without one the derivative is
// taken by central differences in lambda.
struct SampleMeasure {
    std::function<double(double, double)> density;
    std::function<double(double, double)> derivative;  // optional d m / d lambda
    double fd_step = kDefaultFdStep;

    static SampleMeasure counting() {
        SampleMeasure m;
        m.density = [](double, double) { return 1.0; };
        m.derivative = [](double, double) { return 0.0; };
        return m;
    }

    RealVec on_grid(const OutcomeSpace& space, double lambda) const {
        RealVec v(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) {
            const double mi = density(lambda, space.nodes()[i]);
            if (!(mi >= 0.0)) throw NumericError("measure density must be nonnegative");
            v[static_cast<Eigen::Index>(i)] = mi;
        }
        return v;
    }

    RealVec derivative_on_grid(const OutcomeSpace& space, double lambda) const {
        RealVec v(space.size());
        const double h = fd_step * std::max(1.0, std::abs(lambda));
        for (std::size_t i = 0; i < space.size(); ++i) {
            const double x = space.nodes()[i];
            v[static_cast<Eigen::Index>(i)] =
                derivative ? derivative(lambda, x)
                           : (density(lambda + h, x) - density(lambda - h, x)) / (2.0 * h);
        }
        return v;
    }

    // Parameter-independent iff the gridded derivative vanishes identically.
    bool is_static(const OutcomeSpace& space, double lambda) const {
        return derivative_on_grid(space, lambda).cwiseAbs().maxCoeff() == 0.0;
    }
};

// E[f] = integral of m * p * f over the space. The (m, p) pair must be
// jointly normalized.
inline double expectation(const OutcomeSpace& space, const RealVec& p, const RealVec& f,
                          const SampleMeasure& measure, double lambda) {
    const RealVec m = measure.on_grid(space, lambda);
    const double mass = integrate_values(space, m.cwiseProduct(p)).value;
    if (std::abs(mass - 1.0) > tol::normalization) throw NumericError("model not normalized");
    return integrate_values(space, m.cwiseProduct(p).cwiseProduct(f)).value;
}

inline double expectation(const OutcomeSpace& space, const RealVec& p,
                          const std::function<double(double)>& f, const SampleMeasure& measure,
                          double lambda) {
    return expectation(space, p, gridded(space, f), measure, lambda);
}

}  // namespace metro
