#include "metro/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace metro;

TEST_CASE("discrete spaces sum their values", "[quadrature]") {
    const OutcomeSpace space = OutcomeSpace::discrete({0.0, 1.0, 2.0});
    RealVec p(3);
    p << 0.2, 0.3, 0.5;
    const QuadratureResult r = integrate_values(space, p);
    CHECK(r.value == 1.0);
    CHECK(r.error_estimate == 0.0);
}

TEST_CASE("trapezoid handles smooth periodic and localized integrands", "[quadrature]") {
    const OutcomeSpace circle = OutcomeSpace::continuous(0.0, 2.0 * M_PI, 2001);
    const double sin2 = integrate(circle, [](double x) { return std::sin(x) * std::sin(x); }).value;
    CHECK(std::abs(sin2 - M_PI) < 1e-8);

    const OutcomeSpace line = OutcomeSpace::continuous(-10.0, 10.0, 4001);
    const double gauss = integrate(line, [](double x) {
                             return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
                         }).value;
    CHECK(std::abs(gauss - 1.0) < 1e-10);
}

TEST_CASE("gauss-legendre integrates polynomials and gaussians", "[quadrature]") {
    const OutcomeSpace gl = OutcomeSpace::continuous(-1.0, 1.0, 8, QuadratureRule::GaussLegendre);
    // degree-7 polynomial is exact for 8 nodes
    const double cubic = integrate(gl, [](double x) { return x * x * x * x * x * x; }).value;
    CHECK(std::abs(cubic - 2.0 / 7.0) < 1e-14);

    const OutcomeSpace wide = OutcomeSpace::continuous(-10.0, 10.0, 64, QuadratureRule::GaussLegendre);
    const double gauss = integrate(wide, [](double x) {
                             return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
                         }).value;
    CHECK(std::abs(gauss - 1.0) < 1e-12);
}

TEST_CASE("non-finite integrands are rejected", "[quadrature]") {
    const OutcomeSpace line = OutcomeSpace::continuous(-1.0, 1.0, 11);
    CHECK_THROWS_AS(integrate(line, [](double x) { return 1.0 / x; }), NumericError);
    RealVec bad = RealVec::Constant(11, 1.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(integrate_values(line, bad), NumericError);
}

TEST_CASE("halving the grid spacing reduces the quadrature error", "[quadrature]") {
    auto f = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    auto error_at = [&](int points) {
        const OutcomeSpace s = OutcomeSpace::continuous(-4.0, 4.0, points);
        return std::abs(integrate(s, f).value - 0.99993665751633376336);
    };
    // reference: erf(4/sqrt(2)) frozen from scipy
    CHECK(error_at(1001) < error_at(501));
    CHECK(error_at(2001) < error_at(1001));
}

TEST_CASE("error estimate tracks the coarse-fine difference", "[quadrature]") {
    const OutcomeSpace s = OutcomeSpace::continuous(0.0, 1.0, 101);
    const QuadratureResult r = integrate(s, [](double x) { return x * x; });
    CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-4);
    CHECK(r.error_estimate > 0.0);
    CHECK(r.error_estimate < 1e-3);
}

TEST_CASE("outcome space construction is validated", "[quadrature]") {
    CHECK_THROWS_AS(OutcomeSpace::discrete({1.0, 1.0}), UsageError);
    CHECK_THROWS_AS(OutcomeSpace::discrete({}), UsageError);
    CHECK_THROWS_AS(OutcomeSpace::continuous(1.0, 0.0, 11), UsageError);
    CHECK_THROWS_AS(OutcomeSpace::continuous(0.0, 1.0, 2), UsageError);
}
