#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/index_policy.hpp"
#include "irs/inner.hpp"
#include "irs/opt_dp.hpp"

namespace irs {

enum class PolicyKind {
    kTs,
    kIrsFh,
    kIrsVZero,
    kIrsVEmax,
    kIrsIndex,
    kIrsIndexStar,
    kBayesUcb,
    kOptDp,
};

// Bayes-UCB with quantile 1 - 1/t, clamped away from the degenerate ends.
inline int bayes_ucb_decide(const BeliefVector& belief, long t) {
    if (t < 1) throw std::invalid_argument("bayes_ucb_decide: t must be >= 1");
    double q = 1.0 - 1.0 / static_cast<double>(t);
    q = std::clamp(q, 0.5, 1.0 - 1e-12);
    int best = 0;
    double best_q = param_quantile(belief[0], q);
    for (int a = 1; a < static_cast<int>(belief.size()); ++a) {
        const double v = param_quantile(belief[a], q);
        if (v > best_q) {
            best_q = v;
            best = a;
        }
    }
    return best;
}

struct DecideOptions {
    long epoch = 1;  // decision epoch index, used by Bayes-UCB
    VEmaxOptions vemax;
    DpOptions dp;
    // Reusable exact-DP solution (horizon/prior must match the episode);
    // avoids re-solving per decision when running OptDp episodes.
    const DpSolution* dp_solution = nullptr;
};

// One decision with `remaining` rounds to go.  IRS kinds sample exactly one
// outcome from the current belief and play the inner problem's first action;
// TS and IRS.FH use the sufficient-statistic shortcuts so a decision is O(K).
inline int decide(PolicyKind kind, int remaining, const BeliefVector& belief, RngStream& rng,
                  const DecideOptions& opts = {}) {
    if (remaining < 1) throw std::invalid_argument("decide: remaining must be >= 1");
    if (belief.empty()) throw std::invalid_argument("decide: empty belief");
    const int K = static_cast<int>(belief.size());
    switch (kind) {
        case PolicyKind::kTs: {
            int best = 0;
            double best_theta = sample_parameter(belief[0], rng);
            for (int a = 1; a < K; ++a) {
                const double th = sample_parameter(belief[a], rng);
                if (th > best_theta) {
                    best_theta = th;
                    best = a;
                }
            }
            return best;
        }
        case PolicyKind::kIrsFh: {
            int best = 0;
            double best_mu = sample_fh_mean(belief[0], remaining - 1, rng);
            for (int a = 1; a < K; ++a) {
                const double mu = sample_fh_mean(belief[a], remaining - 1, rng);
                if (mu > best_mu) {
                    best_mu = mu;
                    best = a;
                }
            }
            return best;
        }
        case PolicyKind::kIrsVZero: {
            const Outcome o = sample_outcome(belief, remaining, rng);
            const MeanTrajectory traj = mean_trajectory(belief, o, remaining - 1);
            return solve_vzero(traj, remaining).first_action;
        }
        case PolicyKind::kIrsVEmax: {
            const Outcome o = sample_outcome(belief, remaining, rng);
            return solve_vemax(o, remaining, belief, opts.vemax).first_action;
        }
        case PolicyKind::kIrsIndex:
            return irs_index_decide(belief, remaining, rng, IndexVariant::kStandard);
        case PolicyKind::kIrsIndexStar:
            return irs_index_decide(belief, remaining, rng, IndexVariant::kStar);
        case PolicyKind::kBayesUcb:
            return bayes_ucb_decide(belief, opts.epoch);
        case PolicyKind::kOptDp:
            return opt_dp(remaining, belief, opts.dp).first_action();
    }
    throw std::invalid_argument("decide: unknown policy");
}

struct EpisodeRecord {
    std::vector<int> actions;
    std::vector<double> rewards;
    // sum_t mu_{a_t}(theta_{a_t}) under the episode's hidden parameters
    double realized_mean_payoff = 0.0;
};

// Plays one episode against a fixed nature outcome: the n-th pull of arm a
// earns nature's R_{a,n}, and the belief is updated along the way.  Policy
// randomness comes only from `rng`.
inline EpisodeRecord run_episode(PolicyKind kind, int horizon, const BeliefVector& prior,
                                 const Outcome& nature, RngStream& rng,
                                 const DecideOptions& base_opts = {}) {
    if (horizon < 1) throw std::invalid_argument("run_episode: horizon must be >= 1");
    if (nature.num_arms != static_cast<int>(prior.size()))
        throw std::invalid_argument("run_episode: belief/outcome arm mismatch");
    if (nature.horizon < horizon)
        throw std::invalid_argument("run_episode: nature holds fewer than T rewards per arm");
    const int K = nature.num_arms;

    std::optional<DpSolution> local_dp;
    const DpSolution* dp = base_opts.dp_solution;
    std::vector<int> succ(K, 0), fail(K, 0);
    if (kind == PolicyKind::kOptDp) {
        if (dp == nullptr || dp->horizon() != horizon) {
            local_dp.emplace(horizon, prior, base_opts.dp);
            dp = &*local_dp;
        }
        if (!dp->has_actions())
            throw std::invalid_argument("run_episode: OptDp tables unavailable for this size");
    }

    EpisodeRecord rec;
    rec.actions.reserve(horizon);
    rec.rewards.reserve(horizon);
    BeliefVector belief = prior;
    std::vector<int> pulls(K, 0);
    CompensatedSum payoff;
    for (int t = 1; t <= horizon; ++t) {
        int a;
        if (kind == PolicyKind::kOptDp) {
            a = dp->action_at(succ, fail);
        } else {
            DecideOptions opts = base_opts;
            opts.epoch = t;
            a = decide(kind, horizon - t + 1, belief, rng, opts);
        }
        const double r = nature.reward(a, pulls[a]);
        ++pulls[a];
        rec.actions.push_back(a);
        rec.rewards.push_back(r);
        payoff.add(nature.theta[a]);
        belief[a] = update(belief[a], r);
        if (kind == PolicyKind::kOptDp) {
            if (r == 1.0)
                ++succ[a];
            else
                ++fail[a];
        }
    }
    rec.realized_mean_payoff = payoff.value();
    return rec;
}

}  // namespace irs
