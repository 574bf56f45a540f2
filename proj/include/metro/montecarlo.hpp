#pragma once

#include "metro/common.hpp"
#include "metro/family.hpp"
#include "metro/philox.hpp"
#include "metro/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace metro {

// A finite-outcome model ready for sampling and estimation: outcome
// probabilities over the parameter plus the registered closed-form Fisher
// information used for bound predictions.
struct EstimationModel {
    OutcomeSpace space = OutcomeSpace::discrete({0.0});
    DensityFamily probabilities;
    std::function<double(double)> fisher_information;
};

struct MonteCarloConfig {
    double true_lambda = 1.0;
    long shots = 10000;
    int trials = 500;
    std::uint64_t seed = 0;
    double grid_lo = 0.5;
    double grid_hi = 1.5;
    int grid_points = 1001;

    void validate() const {
        if (shots <= 0) throw UsageError("shots must be positive");
        if (trials <= 0) throw UsageError("trials must be positive");
        if (grid_points < 11) throw UsageError("estimator grid needs at least 11 points");
        if (!(grid_lo < true_lambda && true_lambda < grid_hi))
            throw UsageError("true parameter must lie inside the estimator grid");
    }
};

struct CrbExperimentReport {
    double empirical_var = 0.0;
    double crb = 0.0;    // 1 / (n F)
    double ratio = 0.0;  // empirical_var * n F
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    double bootstrap_sigma = 0.0;
    double mean_estimate = 0.0;
};

// n i.i.d. draws from a discrete distribution; deterministic given
// (seed, trial, shot) through the Philox counter stream.
inline std::vector<long> sample(const RealVec& probs, long n, std::uint64_t seed,
                                std::uint64_t trial = 0) {
    const double mass = probs.sum();
    if (probs.minCoeff() < 0.0 || std::abs(mass - 1.0) > 1e-9)
        throw UsageError("sampling distribution not normalized");
    std::vector<double> cumulative(probs.size());
    double run = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        run += probs[i];
        cumulative[static_cast<std::size_t>(i)] = run;
    }

    std::vector<long> counts(probs.size(), 0);
    philox::Counter cache{};
    for (long shot = 0; shot < n; ++shot) {
        const auto draw = static_cast<std::uint64_t>(shot);
        if ((draw & 3) == 0)
            cache = philox::block({draw >> 2, trial, static_cast<std::uint64_t>(RngStream::Sampling), 0},
                                  {seed, 0x6D6574726F6C6162ULL});
        const double u = philox::to_unit(cache[draw & 3]) * mass;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                               counts.size() - 1);
        ++counts[idx];
    }
    return counts;
}

// Grid maximum-likelihood estimate refined by one parabolic interpolation
// through the argmax and its neighbors. Interior ties break toward the
// lower parameter value; an argmax on the boundary is an error.
inline double mle(const std::vector<long>& counts, const DensityFamily& probabilities,
                  double grid_lo, double grid_hi, int grid_points) {
    if (grid_points < 3) throw UsageError("estimator grid needs at least 3 points");
    if (!(grid_lo < grid_hi)) throw UsageError("estimator grid bounds must be ordered");

    const double dx = (grid_hi - grid_lo) / (grid_points - 1);
    std::vector<double> loglik(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double lambda = grid_lo + dx * i;
        const RealVec p = probabilities.value(lambda);
        if (static_cast<std::size_t>(p.size()) != counts.size())
            throw UsageError("likelihood dimension does not match counts");
        double ll = 0.0;
        for (Eigen::Index x = 0; x < p.size(); ++x) {
            const long c = counts[static_cast<std::size_t>(x)];
            if (c == 0) continue;
            if (std::isnan(p[x])) throw NumericError("likelihood not finite on the estimator grid");
            ll += (p[x] > 0.0) ? c * std::log(p[x]) : -kInf;
        }
        loglik[static_cast<std::size_t>(i)] = ll;
    }

    int best = 0;
    for (int i = 1; i < grid_points; ++i)
        if (loglik[static_cast<std::size_t>(i)] > loglik[static_cast<std::size_t>(best)]) best = i;
    if (best == 0 || best == grid_points - 1)
        throw NumericError("estimate at boundary: widen grid");

    const double lm = loglik[static_cast<std::size_t>(best) - 1];
    const double l0 = loglik[static_cast<std::size_t>(best)];
    const double lp = loglik[static_cast<std::size_t>(best) + 1];
    const double peak = grid_lo + dx * best;
    if (!std::isfinite(lm) || !std::isfinite(lp)) return peak;
    const double denom = lm - 2.0 * l0 + lp;
    if (denom >= 0.0) return peak;  // flat or degenerate triple
    return peak + 0.5 * dx * (lm - lp) / denom;
}

namespace detail {

inline double sample_variance(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

}  // namespace detail

// Repeated-MLE experiment against the Cramer-Rao bound: reports the sample
// variance of the estimates, the bound 1/(nF) at the true parameter, their
// ratio, and a percentile-bootstrap 95% interval for the ratio.
inline CrbExperimentReport crb_experiment(const EstimationModel& model,
                                          const MonteCarloConfig& cfg) {
    cfg.validate();
    if (cfg.trials < 2) throw UsageError("trials >= 2 required");
    const double fisher = model.fisher_information(cfg.true_lambda);
    if (!(fisher > 0.0)) throw NumericError("no information: bound infinite");

    const RealVec p_true = model.probabilities.value(cfg.true_lambda);
    std::vector<double> estimates(static_cast<std::size_t>(cfg.trials));
    for (int trial = 0; trial < cfg.trials; ++trial) {
        const std::vector<long> counts =
            sample(p_true, cfg.shots, cfg.seed, static_cast<std::uint64_t>(trial));
        estimates[static_cast<std::size_t>(trial)] =
            mle(counts, model.probabilities, cfg.grid_lo, cfg.grid_hi, cfg.grid_points);
    }

    CrbExperimentReport report;
    report.crb = 1.0 / (static_cast<double>(cfg.shots) * fisher);
    report.empirical_var = detail::sample_variance(estimates);
    report.ratio = report.empirical_var / report.crb;
    for (double e : estimates) report.mean_estimate += e;
    report.mean_estimate /= static_cast<double>(cfg.trials);

    // Percentile bootstrap over the trial estimates.
    const int resamples = 1000;
    std::vector<double> ratios(resamples);
    std::vector<double> pick(estimates.size());
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < estimates.size(); ++i) {
            const double u = counter_uniform(cfg.seed, RngStream::Bootstrap,
                                             static_cast<std::uint64_t>(b),
                                             static_cast<std::uint64_t>(i));
            pick[i] = estimates[std::min<std::size_t>(
                static_cast<std::size_t>(u * static_cast<double>(estimates.size())),
                estimates.size() - 1)];
        }
        ratios[static_cast<std::size_t>(b)] = detail::sample_variance(pick) / report.crb;
    }
    std::sort(ratios.begin(), ratios.end());
    report.ci95_lo = ratios[static_cast<std::size_t>(0.025 * resamples)];
    report.ci95_hi = ratios[static_cast<std::size_t>(0.975 * resamples) - 1];
    report.bootstrap_sigma = std::sqrt(detail::sample_variance(ratios));
    return report;
}

}  // namespace metro
