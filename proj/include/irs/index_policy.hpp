#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "irs/bayes.hpp"

namespace irs {

// E[max(theta, lambda)] for theta ~ Beta(alpha, beta), in closed form.
inline double gamma_beta(double alpha, double beta, double lambda) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw std::invalid_argument("gamma_beta: alpha,beta must be positive");
    const double m = alpha / (alpha + beta);
    if (lambda <= 0.0) return m;
    if (lambda >= 1.0) return lambda;
    return lambda * beta_cdf(lambda, alpha, beta) +
           m * (1.0 - beta_cdf(lambda, alpha + 1.0, beta));
}

// E[max(theta, lambda)] for theta ~ N(mean, 1/precision^2), in closed form.
inline double gamma_gauss(double mean, double precision, double lambda) {
    if (!(precision > 0.0)) throw std::invalid_argument("gamma_gauss: precision must be positive");
    const double z = precision * (lambda - mean);
    return mean + (lambda - mean) * normal_cdf(z) + normal_pdf(z) / precision;
}

enum class IndexVariant { kStandard, kStar };

namespace detail {

// Per-arm machinery for the single-armed worth-trying problem: a sampled
// belief trajectory y_{a,0..T} with whatever is reusable across lambda
// evaluations precomputed (posterior means, log-Beta terms, precisions).
class SingleArmScan {
public:
    SingleArmScan(std::span<const ArmPrior> beliefs, int horizon)
        : T_(horizon), family_(beliefs.empty() ? Family::kBetaBernoulli : beliefs[0].family) {
        if (horizon < 1) throw std::invalid_argument("worth_trying: horizon must be >= 1");
        if (static_cast<int>(beliefs.size()) < horizon + 1)
            throw std::invalid_argument("worth_trying: need beliefs y_0..y_T");
        mu_.resize(T_ + 1);
        if (family_ == Family::kBetaBernoulli) {
            a_.resize(T_ + 1);
            b_.resize(T_ + 1);
            lnb1_.resize(T_ + 1);
            lnb2_.resize(T_ + 1);
        } else {
            nu_.resize(T_ + 1);
        }
        for (int n = 0; n <= T_; ++n) {
            const ArmPrior& y = beliefs[n];
            if (y.family != family_)
                throw std::invalid_argument("worth_trying: mixed-family trajectory");
            mu_[n] = posterior_mean(y);
            if (family_ == Family::kBetaBernoulli) {
                a_[n] = y.alpha;
                b_[n] = y.beta;
                lnb1_[n] = lbeta(y.alpha, y.beta);
                // B(a+1,b) = B(a,b) * a/(a+b)
                lnb2_[n] = lnb1_[n] + std::log(y.alpha / (y.alpha + y.beta));
            } else {
                nu_[n] = 1.0 / std::sqrt(y.variance);
            }
        }
        prior_ = beliefs[0];
    }

    int horizon() const { return T_; }
    Family family() const { return family_; }
    const ArmPrior& prior() const { return prior_; }

    double gamma_at(int n, double lambda) const {
        if (family_ == Family::kBetaBernoulli) {
            if (lambda <= 0.0) return mu_[n];
            if (lambda >= 1.0) return lambda;
            return lambda * detail::beta_cdf_lnb(lambda, a_[n], b_[n], lnb1_[n]) +
                   mu_[n] * (1.0 - detail::beta_cdf_lnb(lambda, a_[n] + 1.0, b_[n], lnb2_[n]));
        }
        const double z = nu_[n] * (lambda - mu_[n]);
        return mu_[n] + (lambda - mu_[n]) * normal_cdf(z) + normal_pdf(z) / nu_[n];
    }

    // Maximal advantage of pulling (at least once) over taking the outside
    // option lambda for all T rounds; >= 0 means the arm is worth trying.
    // `early_exit` permits returning any value >= 0 as soon as the sign is
    // settled.
    double phi(double lambda, IndexVariant variant, bool early_exit = false) const {
        double best = -std::numeric_limits<double>::infinity();
        const double g0 = gamma_at(0, lambda);
        if (variant == IndexVariant::kStandard) {
            const double threshold = T_ * lambda;
            double prefix = 0.0;  // sum_{s<=n} (mu_{s-1} - Gamma_{s-1})
            double gmin = g0;
            double gprev = g0;
            for (int n = 1; n <= T_; ++n) {
                prefix += mu_[n - 1] - gprev;
                const double gn = gamma_at(n, lambda);
                if (gn < gmin) gmin = gn;
                const double cand = T_ * g0 + (T_ - n) * (lambda - gmin) + prefix;
                if (cand > best) best = cand;
                if (early_exit && best >= threshold) return best - threshold;
                gprev = gn;
            }
            return best - threshold;
        }
        double prefix = 0.0;  // sum_{s<=n} (mu_{s-1} - lambda - (Gamma_s - Gamma_0))
        for (int n = 1; n <= T_; ++n) {
            prefix += mu_[n - 1] - lambda - (gamma_at(n, lambda) - g0);
            if (prefix > best) best = prefix;
            if (early_exit && best >= 0.0) return best;
        }
        return best;
    }

    bool worth(double lambda, IndexVariant variant) const {
        return phi(lambda, variant, /*early_exit=*/true) >= 0.0;
    }

private:
    int T_;
    Family family_;
    ArmPrior prior_;
    std::vector<double> mu_;
    std::vector<double> a_, b_, lnb1_, lnb2_;
    std::vector<double> nu_;
};

}  // namespace detail

struct WorthTryingResult {
    bool worth = false;
    double phi = 0.0;
};

// Worth-trying test for one arm given its sampled belief trajectory
// y_{a,0..T} and a deterministic outside option lambda.
inline WorthTryingResult worth_trying(std::span<const ArmPrior> beliefs, int horizon,
                                      double lambda, IndexVariant variant = IndexVariant::kStandard) {
    detail::SingleArmScan scan(beliefs, horizon);
    const double phi = scan.phi(lambda, variant);
    return {phi >= 0.0, phi};
}

struct IndexEntry {
    double lambda_star = 0.0;
    int iterations = 0;
};

namespace detail {

inline IndexEntry compute_index_scan(const SingleArmScan& scan, IndexVariant variant) {
    constexpr double kTol = 1e-6;
    constexpr int kMaxIter = 60;
    double lo, hi;
    if (scan.family() == Family::kBetaBernoulli) {
        lo = 0.0;
        hi = 1.0;
    } else {
        const double m0 = posterior_mean(scan.prior());
        const double spread = posterior_std(scan.prior()) + noise_std(scan.prior());
        lo = m0 - 8.0 * spread;
        hi = m0 + 8.0 * spread;
    }
    if (!scan.worth(lo, variant)) {
        lo -= (hi - lo);  // widen once
        if (!scan.worth(lo, variant))
            throw std::runtime_error("compute_index: lower bracket end not worth trying");
    }
    if (scan.worth(hi, variant)) {
        hi += (hi - lo);  // widen once
        if (scan.worth(hi, variant))
            throw std::runtime_error("compute_index: upper bracket end still worth trying");
    }
    int iter = 0;
    while (hi - lo > kTol && iter < kMaxIter) {
        const double mid = 0.5 * (lo + hi);
        if (scan.worth(mid, variant))
            lo = mid;
        else
            hi = mid;
        ++iter;
    }
    return {0.5 * (lo + hi), iter};
}

}  // namespace detail

// Threshold index of one arm: the boundary value of lambda at which the
// worth-trying test flips, located by binary search.
inline IndexEntry compute_index(std::span<const ArmPrior> beliefs, int horizon,
                                IndexVariant variant = IndexVariant::kStandard) {
    detail::SingleArmScan scan(beliefs, horizon);
    return detail::compute_index_scan(scan, variant);
}

// One decision of the index policy: sample an outcome, compute every arm's
// index on its sampled belief trajectory, play the largest.
inline int irs_index_decide(const BeliefVector& belief, int horizon, RngStream& rng,
                            IndexVariant variant = IndexVariant::kStandard) {
    if (horizon < 1) throw std::invalid_argument("irs_index_decide: horizon must be >= 1");
    const Outcome outcome = sample_outcome(belief, horizon, rng);
    const int K = outcome.num_arms;
    int best_arm = 0;
    double best_lambda = -std::numeric_limits<double>::infinity();
    std::vector<ArmPrior> path(static_cast<std::size_t>(horizon) + 1);
    for (int a = 0; a < K; ++a) {
        path[0] = belief[a];
        for (int n = 1; n <= horizon; ++n) path[n] = update(path[n - 1], outcome.reward(a, n - 1));
        detail::SingleArmScan scan(path, horizon);
        const IndexEntry e = detail::compute_index_scan(scan, variant);
        if (e.lambda_star > best_lambda) {
            best_lambda = e.lambda_star;
            best_arm = a;
        }
    }
    return best_arm;
}

}  // namespace irs
