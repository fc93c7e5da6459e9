#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/errors.hpp"
#include "irs/lattice.hpp"

namespace irs {

// Penalty families with a tractable inner problem.  The ideal penalty has no
// variant here; it is realized only through the exact DP on small instances.
enum class PenaltyKind { kTs, kIrsFh, kIrsVZero, kIrsVEmax };

struct Allocation {
    std::vector<int> counts;
};

// Result of one clairvoyant inner problem: the action played first, the
// penalized optimal value, and the plan that realizes it (allocation always;
// a full sequence when the solver derives one).
struct InnerSolution {
    int first_action = 0;
    double value = 0.0;
    Allocation plan;
    std::vector<int> sequence;
};

namespace detail {

inline int argmax_lowest(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace detail

// Penalty z^TS: the clairvoyant pulls argmax_a theta_a for all T rounds.
inline InnerSolution solve_ts(const Outcome& outcome, int horizon) {
    if (horizon < 1) throw std::invalid_argument("solve_ts: horizon must be >= 1");
    InnerSolution s;
    s.first_action = detail::argmax_lowest(outcome.theta);
    s.value = static_cast<double>(horizon) * outcome.theta[s.first_action];
    s.plan.counts.assign(outcome.num_arms, 0);
    s.plan.counts[s.first_action] = horizon;
    return s;
}

// Penalty z^Irs.FH: pull the arm with the highest posterior mean inferred
// from the first T-1 future rewards, for all T rounds.
inline InnerSolution solve_fh(const Outcome& outcome, int horizon, const BeliefVector& prior) {
    if (horizon < 1) throw std::invalid_argument("solve_fh: horizon must be >= 1");
    if (static_cast<int>(prior.size()) != outcome.num_arms)
        throw std::invalid_argument("solve_fh: belief/outcome arm mismatch");
    if (outcome.horizon < horizon - 1)
        throw std::invalid_argument("solve_fh: outcome holds fewer than T-1 rewards per arm");
    const int K = outcome.num_arms;
    std::vector<double> mu(K);
    for (int a = 0; a < K; ++a) {
        CompensatedSum sum;
        for (int n = 0; n < horizon - 1; ++n) sum.add(outcome.reward(a, n));
        mu[a] = posterior_mean(posterior_after(prior[a], horizon - 1, sum.value()));
    }
    InnerSolution s;
    s.first_action = detail::argmax_lowest(mu);
    s.value = static_cast<double>(horizon) * mu[s.first_action];
    s.plan.counts.assign(K, 0);
    s.plan.counts[s.first_action] = horizon;
    return s;
}

// Penalty z^Irs.V-Zero: optimal allocation of T pulls given the posterior
// mean trajectories, solved by K successive sup convolutions in O(K T^2).
// The chosen first action is the arm with the largest count.
inline InnerSolution solve_vzero(const MeanTrajectory& traj, int horizon) {
    if (horizon < 1) throw std::invalid_argument("solve_vzero: horizon must be >= 1");
    if (traj.length < horizon)
        throw std::invalid_argument("solve_vzero: trajectory misses entries 0..T-1");
    const int K = traj.num_arms;
    const int T = horizon;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    // S[a][n] = sum of the first n posterior means of arm a
    std::vector<double> cum(static_cast<std::size_t>(K) * (T + 1));
    for (int a = 0; a < K; ++a) {
        CompensatedSum s;
        cum[static_cast<std::size_t>(a) * (T + 1)] = 0.0;
        for (int n = 1; n <= T; ++n) {
            s.add(traj.at(a, n - 1));
            cum[static_cast<std::size_t>(a) * (T + 1) + n] = s.value();
        }
    }

    std::vector<double> prev(T + 1, kNegInf), curr(T + 1);
    prev[0] = 0.0;
    std::vector<int> split(static_cast<std::size_t>(K) * (T + 1));  // optimal own-pulls per arm
    for (int a = 0; a < K; ++a) {
        const double* s = cum.data() + static_cast<std::size_t>(a) * (T + 1);
        int* sp = split.data() + static_cast<std::size_t>(a) * (T + 1);
        for (int n = 0; n <= T; ++n) {
            double best = kNegInf;
            int bestm = 0;
            for (int m = 0; m <= n; ++m) {
                const double v = prev[n - m] + s[m];
                if (v > best) {
                    best = v;
                    bestm = m;
                }
            }
            curr[n] = best;
            sp[n] = bestm;
        }
        std::swap(prev, curr);
    }

    InnerSolution out;
    out.value = prev[T];
    out.plan.counts.assign(K, 0);
    int rem = T;
    for (int a = K - 1; a >= 0; --a) {
        const int m = split[static_cast<std::size_t>(a) * (T + 1) + rem];
        out.plan.counts[a] = m;
        rem -= m;
    }
    int best_arm = 0;
    for (int a = 1; a < K; ++a)
        if (out.plan.counts[a] > out.plan.counts[best_arm]) best_arm = a;
    out.first_action = best_arm;
    return out;
}

struct VEmaxOptions {
    // Cap on K * |N_{<=T}| lattice-cell operations; exceeding it raises
    // BudgetError rather than truncating.
    std::int64_t op_budget = 50'000'000;
};

// Penalty z^Irs.V-EMax: exact DP over the pull-count lattice.  Stage payoff
// of pulling arm a from node n is mu_a(y_{a,n_a}) plus the change the pull
// induces in the remaining-horizon benchmark.
inline InnerSolution solve_vemax(const Outcome& outcome, int horizon, const BeliefVector& prior,
                                 const VEmaxOptions& opts = {}) {
    if (horizon < 1) throw std::invalid_argument("solve_vemax: horizon must be >= 1");
    if (static_cast<int>(prior.size()) != outcome.num_arms)
        throw std::invalid_argument("solve_vemax: belief/outcome arm mismatch");
    if (outcome.horizon < horizon - 1)
        throw std::invalid_argument("solve_vemax: outcome holds fewer than T-1 rewards per arm");
    const int K = outcome.num_arms;
    const int T = horizon;

    CompositionIndexer idx(K, T);
    std::uint64_t total_nodes = 0;
    for (int s = 0; s <= T; ++s) total_nodes += idx.count(s);
    if (static_cast<std::int64_t>(total_nodes) * K > opts.op_budget)
        throw BudgetError("solve_vemax: instance too large (" + std::to_string(total_nodes) +
                          " lattice nodes x " + std::to_string(K) + " arms exceeds budget " +
                          std::to_string(opts.op_budget) + ")");

    // Belief path of each arm along its own reward row, up to T-1 pulls of
    // that arm being relevant for stage payoffs.
    std::vector<std::vector<ArmPrior>> beliefs(K);
    std::vector<std::vector<double>> mubar(K);
    for (int a = 0; a < K; ++a) {
        beliefs[a].resize(T + 1);
        mubar[a].resize(T + 1);
        beliefs[a][0] = prior[a];
        mubar[a][0] = posterior_mean(prior[a]);
        for (int n = 1; n <= T; ++n) {
            if (n - 1 < outcome.horizon)
                beliefs[a][n] = update(beliefs[a][n - 1], outcome.reward(a, n - 1));
            else
                beliefs[a][n] = beliefs[a][n - 1];
            mubar[a][n] = posterior_mean(beliefs[a][n]);
        }
    }

    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> gamma_prev, gamma_curr;
    std::vector<double> m_prev, m_curr;
    std::vector<std::vector<std::uint8_t>> action(T + 1);
    BeliefVector node_belief(static_cast<std::size_t>(K));
    std::vector<int> pred(K);

    for (int s = 0; s <= T; ++s) {
        const std::uint64_t level = idx.count(s);
        // Gamma on the top face multiplies a zero horizon factor; skip it.
        if (s < T) {
            gamma_curr.resize(level);
            idx.for_each(s, [&](const std::vector<int>& c, std::uint64_t r) {
                for (int a = 0; a < K; ++a) node_belief[a] = beliefs[a][c[a]];
                gamma_curr[r] = expected_max_mean(node_belief);
            });
        } else {
            gamma_curr.clear();
        }

        if (s > 0) {
            m_curr.resize(level);
            action[s].resize(level);
            const int remaining = T - s;  // horizon factor of the Gamma difference
            idx.for_each(s, [&](const std::vector<int>& c, std::uint64_t r) {
                double best = kNegInf;
                int best_arm = -1;
                const double gamma_here = (s < T) ? gamma_curr[r] : 0.0;
                for (int a = 0; a < K; ++a) {
                    if (c[a] == 0) continue;
                    for (int j = 0; j < K; ++j) pred[j] = c[j];
                    pred[a] -= 1;
                    const std::uint64_t pr = idx.rank(pred);
                    const double stage = mubar[a][pred[a]] +
                                         static_cast<double>(remaining) *
                                             (gamma_prev[pr] - gamma_here);
                    const double v = m_prev[pr] + stage;
                    if (v > best) {
                        best = v;
                        best_arm = a;
                    }
                }
                m_curr[r] = best;
                action[s][r] = static_cast<std::uint8_t>(best_arm);
            });
        } else {
            m_curr.assign(1, 0.0);
        }
        std::swap(gamma_prev, gamma_curr);
        std::swap(m_prev, m_curr);
    }

    // Best node on the sum-T face, then walk the argmax table back down.
    std::uint64_t best_rank = 0;
    double best_value = kNegInf;
    std::vector<int> best_counts(K, 0);
    idx.for_each(T, [&](const std::vector<int>& c, std::uint64_t r) {
        if (m_prev[r] > best_value) {
            best_value = m_prev[r];
            best_rank = r;
            best_counts = c;
        }
    });

    InnerSolution out;
    out.value = best_value;
    out.plan.counts = best_counts;
    out.sequence.resize(T);
    std::vector<int> node = best_counts;
    for (int t = T; t >= 1; --t) {
        const int a = action[t][idx.rank(node)];
        out.sequence[t - 1] = a;
        node[a] -= 1;
    }
    out.first_action = out.sequence[0];
    return out;
}

// Value of the inner problem under the given penalty.
inline double inner_value(PenaltyKind penalty, const Outcome& outcome, int horizon,
                          const BeliefVector& prior, const VEmaxOptions& vemax_opts = {}) {
    switch (penalty) {
        case PenaltyKind::kTs:
            return solve_ts(outcome, horizon).value;
        case PenaltyKind::kIrsFh:
            return solve_fh(outcome, horizon, prior).value;
        case PenaltyKind::kIrsVZero:
            return solve_vzero(mean_trajectory(prior, outcome, horizon - 1), horizon).value;
        case PenaltyKind::kIrsVEmax:
            return solve_vemax(outcome, horizon, prior, vemax_opts).value;
    }
    throw std::invalid_argument("inner_value: unknown penalty");
}

}  // namespace irs
