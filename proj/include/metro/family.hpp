#pragma once

#include "metro/common.hpp"
#include "metro/states.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace metro {

// One-parameter family of values: densities on a grid, state vectors,
// density operators or POVM element lists. `Tangent` is the vector-space
// type of the lambda-derivative (it differs from `Value` for normalized
// objects such as StateVector).
template <typename Value, typename Tangent = Value>
struct ParametricFamily {
    std::function<Value(double)> value;
    std::function<Tangent(double)> derivative;  // optional analytic derivative
    double fd_step = kDefaultFdStep;            // relative step
    double lo = -kInf;                          // declared parameter domain
    double hi = kInf;

    bool has_derivative() const { return static_cast<bool>(derivative); }
    double step_at(double lambda) const { return fd_step * std::max(1.0, std::abs(lambda)); }
};

using ScalarFamily = ParametricFamily<double>;
using DensityFamily = ParametricFamily<RealVec>;
using StateFamily = ParametricFamily<StateVector, CVec>;
using OperatorFamily = ParametricFamily<DensityOperator, CMat>;
using PovmElements = std::vector<HermitianOperator>;
using PovmElementsFamily = ParametricFamily<PovmElements, std::vector<CMat>>;

namespace detail {

inline double tangent_of(double v) { return v; }
inline const RealVec& tangent_of(const RealVec& v) { return v; }
inline const CVec& tangent_of(const CVec& v) { return v; }
inline const CMat& tangent_of(const CMat& v) { return v; }
inline const CVec& tangent_of(const StateVector& v) { return v.amplitudes(); }
inline const CMat& tangent_of(const DensityOperator& v) { return v.matrix(); }
inline std::vector<CMat> tangent_of(const PovmElements& v) {
    std::vector<CMat> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(e.matrix());
    return out;
}

template <typename T>
T tangent_difference(const T& plus, const T& minus, double inv2h) {
    return (plus - minus) * inv2h;
}

inline std::vector<CMat> tangent_difference(const std::vector<CMat>& plus,
                                            const std::vector<CMat>& minus, double inv2h) {
    std::vector<CMat> out(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) out[i] = (plus[i] - minus[i]) * inv2h;
    return out;
}

template <typename T>
T tangent_richardson(const T& coarse, const T& fine) {
    return (fine * 4.0 - coarse) / 3.0;
}

inline std::vector<CMat> tangent_richardson(const std::vector<CMat>& coarse,
                                            const std::vector<CMat>& fine) {
    std::vector<CMat> out(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) out[i] = (fine[i] * 4.0 - coarse[i]) / 3.0;
    return out;
}

}  // namespace detail

// Central difference (f(l+h) - f(l-h)) / 2h with h = fd_step * max(1, |l|).
// An analytic derivative, when present, is returned as-is. Richardson
// extrapolation combines the h and h/2 stencils.
template <typename Value, typename Tangent>
Tangent fd_derivative(const ParametricFamily<Value, Tangent>& family, double lambda,
                      bool richardson = false) {
    if (family.has_derivative()) return family.derivative(lambda);
    const double h = family.step_at(lambda);
    if (!(lambda - h > family.lo) || !(lambda + h < family.hi))
        throw NumericError("cannot difference at boundary");
    auto stencil = [&](double step) -> Tangent {
        return detail::tangent_difference(Tangent(detail::tangent_of(family.value(lambda + step))),
                                          Tangent(detail::tangent_of(family.value(lambda - step))),
                                          0.5 / step);
    };
    Tangent d = stencil(h);
    if (!richardson) return d;
    return detail::tangent_richardson(d, stencil(0.5 * h));
}

}  // namespace metro
