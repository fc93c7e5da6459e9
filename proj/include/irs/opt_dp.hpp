#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "irs/bayes.hpp"
#include "irs/errors.hpp"
#include "irs/lattice.hpp"

namespace irs {

struct DpOptions {
    // Cap on the total number of DP states across levels.
    std::int64_t state_budget = 200'000'000;
    // Greedy action tables are kept when their total size stays below this.
    std::int64_t action_cells_budget = 200'000'000;
    // Value tables are kept only for small instances.
    std::int64_t value_cells_budget = 4'000'000;
};

// Exact Bellman solution for a Beta-Bernoulli instance.  States are per-arm
// (success, failure) counts relative to the initial prior; level p collects
// the states reachable after p pulls.
class DpSolution {
public:
    DpSolution(int horizon, BeliefVector prior, const DpOptions& opts)
        : horizon_(horizon), prior_(std::move(prior)) {
        if (horizon_ < 1) throw std::invalid_argument("opt_dp: horizon must be >= 1");
        const int K = static_cast<int>(prior_.size());
        if (K < 1) throw std::invalid_argument("opt_dp: empty belief");
        for (const auto& y : prior_)
            if (y.family != Family::kBetaBernoulli)
                throw std::invalid_argument("opt_dp: only Beta-Bernoulli beliefs are supported");

        indexer_ = std::make_unique<CompositionIndexer>(2 * K, horizon_);
        std::int64_t total_states = 0;
        for (int p = 0; p < horizon_; ++p)
            total_states += static_cast<std::int64_t>(indexer_->count(p));
        if (total_states > opts.state_budget)
            throw BudgetError("opt_dp: instance too large (" + std::to_string(total_states) +
                              " states exceeds budget " + std::to_string(opts.state_budget) + ")");

        keep_actions_ = total_states <= opts.action_cells_budget;
        keep_values_ = total_states <= opts.value_cells_budget;
        if (keep_actions_) actions_.resize(horizon_);
        if (keep_values_) values_.resize(horizon_);

        std::vector<double> v_next(indexer_->count(horizon_), 0.0);
        std::vector<double> v_curr;
        std::vector<int> succ(2 * K);
        for (int p = horizon_ - 1; p >= 0; --p) {
            const std::uint64_t level = indexer_->count(p);
            v_curr.assign(level, 0.0);
            std::vector<std::uint8_t>* acts = nullptr;
            if (keep_actions_) {
                actions_[p].resize(level);
                acts = &actions_[p];
            }
            indexer_->for_each(p, [&](const std::vector<int>& c, std::uint64_t r) {
                double best = -1.0;
                int best_arm = 0;
                for (int a = 0; a < K; ++a) {
                    const double alpha = prior_[a].alpha + c[2 * a];
                    const double beta = prior_[a].beta + c[2 * a + 1];
                    const double pm = alpha / (alpha + beta);
                    for (int j = 0; j < 2 * K; ++j) succ[j] = c[j];
                    succ[2 * a] += 1;
                    const double q_succ = v_next[indexer_->rank(succ)];
                    succ[2 * a] -= 1;
                    succ[2 * a + 1] += 1;
                    const double q_fail = v_next[indexer_->rank(succ)];
                    succ[2 * a + 1] -= 1;
                    const double q = pm * (1.0 + q_succ) + (1.0 - pm) * q_fail;
                    if (q > best) {
                        best = q;
                        best_arm = a;
                    }
                }
                v_curr[r] = best;
                if (acts) (*acts)[r] = static_cast<std::uint8_t>(best_arm);
            });
            if (keep_values_) values_[p] = v_curr;
            std::swap(v_next, v_curr);
        }
        value_ = v_next[0];
        first_action_ = keep_actions_ ? static_cast<int>(actions_[0][0]) : 0;
    }

    double value() const { return value_; }
    int first_action() const { return first_action_; }
    int horizon() const { return horizon_; }
    int num_arms() const { return static_cast<int>(prior_.size()); }
    bool has_actions() const { return keep_actions_; }
    bool has_values() const { return keep_values_; }

    // Greedy action at the state reached from the initial prior by the given
    // per-arm success/failure counts.
    int action_at(std::span<const int> successes, std::span<const int> failures) const {
        if (!keep_actions_) throw std::logic_error("opt_dp: action tables were not kept");
        const int K = num_arms();
        std::vector<int> c(2 * K);
        int p = 0;
        for (int a = 0; a < K; ++a) {
            c[2 * a] = successes[a];
            c[2 * a + 1] = failures[a];
            p += successes[a] + failures[a];
        }
        if (p >= horizon_) throw std::invalid_argument("opt_dp: state beyond the horizon");
        return actions_[p][indexer_->rank(c)];
    }

    // V*(horizon - p, state) for kept levels; mainly for small-instance checks.
    double value_at(std::span<const int> successes, std::span<const int> failures) const {
        if (!keep_values_) throw std::logic_error("opt_dp: value tables were not kept");
        const int K = num_arms();
        std::vector<int> c(2 * K);
        int p = 0;
        for (int a = 0; a < K; ++a) {
            c[2 * a] = successes[a];
            c[2 * a + 1] = failures[a];
            p += successes[a] + failures[a];
        }
        if (p >= horizon_) return 0.0;
        return values_[p][indexer_->rank(c)];
    }

private:
    int horizon_;
    BeliefVector prior_;
    std::unique_ptr<CompositionIndexer> indexer_;
    double value_ = 0.0;
    int first_action_ = 0;
    bool keep_actions_ = false;
    bool keep_values_ = false;
    std::vector<std::vector<std::uint8_t>> actions_;
    std::vector<std::vector<double>> values_;
};

inline DpSolution opt_dp(int horizon, const BeliefVector& prior, const DpOptions& opts = {}) {
    return DpSolution(horizon, prior, opts);
}

}  // namespace irs
