#pragma once

#include "metro/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace metro {

enum class QuadratureRule { Trapezoid, GaussLegendre };

struct QuadratureResult {
    double value = 0.0;
    // |full grid - half resolution|; zero for discrete sums.
    double error_estimate = 0.0;
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace detail

// Sample space: a finite label set (counting measure) or a gridded
// interval with a quadrature rule attached.
class OutcomeSpace {
  public:
    static OutcomeSpace discrete(std::vector<double> labels) {
        if (labels.empty()) throw UsageError("discrete outcome space needs at least one label");
        std::set<double> uniq(labels.begin(), labels.end());
        if (uniq.size() != labels.size()) throw UsageError("discrete outcome labels must be unique");
        OutcomeSpace s;
        s.discrete_ = true;
        s.nodes_ = std::move(labels);
        s.weights_.assign(s.nodes_.size(), 1.0);
        return s;
    }

    static OutcomeSpace continuous(double lo, double hi, int grid_points,
                                   QuadratureRule rule = QuadratureRule::Trapezoid) {
        if (!(lo < hi)) throw UsageError("continuous outcome space requires lo < hi");
        if (grid_points < 3) throw UsageError("continuous outcome space requires grid_points >= 3");
        OutcomeSpace s;
        s.discrete_ = false;
        s.lo_ = lo;
        s.hi_ = hi;
        s.rule_ = rule;
        s.build_nodes(grid_points, s.nodes_, s.weights_);
        s.build_nodes(std::max(3, (grid_points + 1) / 2), s.coarse_nodes_, s.coarse_weights_);
        return s;
    }

    bool is_discrete() const { return discrete_; }
    std::size_t size() const { return nodes_.size(); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    QuadratureRule rule() const { return rule_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& coarse_nodes() const { return coarse_nodes_; }
    const std::vector<double>& coarse_weights() const { return coarse_weights_; }

  private:
    void build_nodes(int n, std::vector<double>& xs, std::vector<double>& ws) const {
        xs.assign(n, 0.0);
        ws.assign(n, 0.0);
        if (rule_ == QuadratureRule::Trapezoid) {
            const double h = (hi_ - lo_) / (n - 1);
            for (int i = 0; i < n; ++i) {
                xs[i] = lo_ + h * i;
                ws[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
            }
        } else {
            detail::gauss_legendre_unit(n, xs, ws);
            const double c = 0.5 * (hi_ - lo_), m = 0.5 * (hi_ + lo_);
            for (int i = 0; i < n; ++i) {
                xs[i] = m + c * xs[i];
                ws[i] *= c;
            }
        }
    }

    bool discrete_ = true;
    double lo_ = 0.0, hi_ = 0.0;
    QuadratureRule rule_ = QuadratureRule::Trapezoid;
    std::vector<double> nodes_, weights_;
    std::vector<double> coarse_nodes_, coarse_weights_;
};

// Integrates values sampled on the space's own nodes. The error estimate
// for trapezoid grids comes from re-summing every other node.
inline QuadratureResult integrate_values(const OutcomeSpace& space, const RealVec& f) {
    if (static_cast<std::size_t>(f.size()) != space.size())
        throw UsageError("integrand values do not match the outcome grid");
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i])) throw NumericError("non-finite integrand");

    double total = 0.0;
    const auto& w = space.weights();
    for (Eigen::Index i = 0; i < f.size(); ++i) total += w[i] * f[i];
    if (space.is_discrete()) return {total, 0.0};

    // Coarse pass on the node subset {0, 2, 4, ...} plus the right endpoint,
    // with non-uniform trapezoid weights.
    double coarse = 0.0;
    if (space.rule() == QuadratureRule::Trapezoid) {
        const auto& x = space.nodes();
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < f.size(); i += 2) idx.push_back(i);
        if (idx.back() != f.size() - 1) idx.push_back(f.size() - 1);
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            const double dx = x[idx[k + 1]] - x[idx[k]];
            coarse += 0.5 * dx * (f[idx[k]] + f[idx[k + 1]]);
        }
    } else {
        // Gauss nodes do not nest; callers that need an estimate should use
        // integrate() with a callable instead.
        coarse = total;
    }
    return {total, std::abs(total - coarse)};
}

inline QuadratureResult integrate(const OutcomeSpace& space, const std::function<double(double)>& f) {
    RealVec vals(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) vals[static_cast<Eigen::Index>(i)] = f(space.nodes()[i]);
    QuadratureResult fine = integrate_values(space, vals);
    if (space.is_discrete() || space.rule() == QuadratureRule::Trapezoid) return fine;

    double coarse = 0.0;
    const auto& cx = space.coarse_nodes();
    const auto& cw = space.coarse_weights();
    for (std::size_t i = 0; i < cx.size(); ++i) {
        const double v = f(cx[i]);
        if (!std::isfinite(v)) throw NumericError("non-finite integrand");
        coarse += cw[i] * v;
    }
    fine.error_estimate = std::abs(fine.value - coarse);
    return fine;
}

// Grid a function of x over the space.
inline RealVec gridded(const OutcomeSpace& space, const std::function<double(double)>& f) {
    RealVec v(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(space.nodes()[i]);
    return v;
}

}  // namespace metro
