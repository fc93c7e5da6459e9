#pragma once

#include <vector>

#include "irs/bayes.hpp"
#include "irs/inner.hpp"
#include "irs/parallel.hpp"

namespace irs {

struct BoundEstimate {
    double mean = 0.0;
    double stderr_value = 0.0;
    long samples = 0;
    PenaltyKind penalty = PenaltyKind::kTs;
};

struct BoundOptions {
    int jobs = 1;
    VEmaxOptions vemax;
    // Outcomes are sampled at this horizon and solved at the requested one;
    // lets one sample set serve a whole horizon grid.  0 means the requested
    // horizon itself.
    int sample_horizon = 0;
};

namespace detail {
inline constexpr std::uint64_t kBoundSampleTag = 0x626f756e64ULL;  // "bound"
}

// Monte Carlo estimate of W^z(T, y): mean inner-problem value over S
// independently sampled outcomes.  Sample i always uses the stream derived
// from (key, i), so the same outcome set is shared across penalties and
// horizons and the estimate does not depend on thread count.
inline BoundEstimate estimate_bound(PenaltyKind penalty, int horizon, const BeliefVector& prior,
                                    long samples, const RngStream& key,
                                    const BoundOptions& opts = {}) {
    if (samples < 2) throw std::invalid_argument("estimate_bound: need at least 2 samples");
    if (horizon < 1) throw std::invalid_argument("estimate_bound: horizon must be >= 1");
    const int sample_horizon = opts.sample_horizon > 0 ? opts.sample_horizon : horizon;
    if (sample_horizon < horizon)
        throw std::invalid_argument("estimate_bound: sample_horizon below horizon");

    std::vector<double> values(static_cast<std::size_t>(samples));
    parallel_for(samples, opts.jobs, [&](long i) {
        RngStream rng = key.derived(detail::kBoundSampleTag, static_cast<std::uint64_t>(i));
        const Outcome o = sample_outcome(prior, sample_horizon, rng);
        values[static_cast<std::size_t>(i)] = inner_value(penalty, o, horizon, prior, opts.vemax);
    });

    const MeanStderr ms = mean_and_stderr(values);
    return {ms.mean, ms.stderr_value, samples, penalty};
}

// Deterministic benchmark W^TS(T, y) = T * E[max_a mu_a(theta_a)], via
// quadrature rather than Monte Carlo.
inline double regret_benchmark(int horizon, const BeliefVector& prior) {
    if (horizon < 1) throw std::invalid_argument("regret_benchmark: horizon must be >= 1");
    return static_cast<double>(horizon) * expected_max_mean(prior);
}

}  // namespace irs
