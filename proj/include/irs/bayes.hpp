#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "irs/rng.hpp"
#include "irs/special.hpp"

namespace irs {

enum class Family { kBetaBernoulli, kGaussian };

// Per-arm belief hyperparameters.  Beta-Bernoulli carries (alpha, beta);
// Gaussian-known-variance carries the posterior (mean, variance) over the
// unknown mean together with the fixed observation noise variance.
struct ArmPrior {
    Family family = Family::kBetaBernoulli;
    double alpha = 1.0;
    double beta = 1.0;
    double mean = 0.0;
    double variance = 1.0;
    double noise_variance = 1.0;

    static ArmPrior beta_bernoulli(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("ArmPrior: alpha and beta must be positive");
        ArmPrior y;
        y.family = Family::kBetaBernoulli;
        y.alpha = alpha;
        y.beta = beta;
        return y;
    }

    static ArmPrior gaussian(double mean, double variance, double noise_variance) {
        if (!(variance > 0.0) || !(noise_variance > 0.0))
            throw std::invalid_argument("ArmPrior: variances must be positive");
        ArmPrior y;
        y.family = Family::kGaussian;
        y.mean = mean;
        y.variance = variance;
        y.noise_variance = noise_variance;
        return y;
    }
};

using BeliefVector = std::vector<ArmPrior>;

// Posterior mean of the unknown mean-reward parameter under the belief.
inline double posterior_mean(const ArmPrior& y) {
    return y.family == Family::kBetaBernoulli ? y.alpha / (y.alpha + y.beta) : y.mean;
}

// Standard deviation of the unknown parameter under the belief.
inline double posterior_std(const ArmPrior& y) {
    if (y.family == Family::kBetaBernoulli) {
        const double s = y.alpha + y.beta;
        return std::sqrt(y.alpha * y.beta / (s * s * (s + 1.0)));
    }
    return std::sqrt(y.variance);
}

inline double noise_std(const ArmPrior& y) {
    return y.family == Family::kBetaBernoulli
               ? 0.5  // Bernoulli noise std is at most 1/2
               : std::sqrt(y.noise_variance);
}

// One-step conjugate update.
inline ArmPrior update(const ArmPrior& y, double reward) {
    ArmPrior out = y;
    if (y.family == Family::kBetaBernoulli) {
        if (reward != 0.0 && reward != 1.0)
            throw std::invalid_argument("update: Bernoulli reward must be 0 or 1");
        out.alpha = y.alpha + reward;
        out.beta = y.beta + 1.0 - reward;
    } else {
        const double prec = 1.0 / y.variance + 1.0 / y.noise_variance;
        out.mean = (y.mean / y.variance + reward / y.noise_variance) / prec;
        out.variance = 1.0 / prec;
    }
    return out;
}

// Belief after n observations with the given reward sum (sufficient statistic).
inline ArmPrior posterior_after(const ArmPrior& y, long n, double reward_sum) {
    if (n < 0) throw std::invalid_argument("posterior_after: n must be >= 0");
    ArmPrior out = y;
    if (y.family == Family::kBetaBernoulli) {
        out.alpha = y.alpha + reward_sum;
        out.beta = y.beta + static_cast<double>(n) - reward_sum;
    } else {
        const double prec = 1.0 / y.variance + static_cast<double>(n) / y.noise_variance;
        out.mean = (y.mean / y.variance + reward_sum / y.noise_variance) / prec;
        out.variance = 1.0 / prec;
    }
    return out;
}

inline double sample_parameter(const ArmPrior& y, RngStream& rng) {
    if (y.family == Family::kBetaBernoulli) return rng.beta(y.alpha, y.beta);
    return y.mean + std::sqrt(y.variance) * rng.normal();
}

inline double sample_reward(const ArmPrior& y, double theta, RngStream& rng) {
    if (y.family == Family::kBetaBernoulli) return rng.bernoulli(theta);
    return theta + std::sqrt(y.noise_variance) * rng.normal();
}

// CDF of the unknown parameter under the belief.
inline double param_cdf(const ArmPrior& y, double x) {
    if (y.family == Family::kBetaBernoulli) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return beta_cdf(x, y.alpha, y.beta);
    }
    return normal_cdf((x - y.mean) / std::sqrt(y.variance));
}

// Quantile of the unknown parameter under the belief.
inline double param_quantile(const ArmPrior& y, double q) {
    if (y.family == Family::kBetaBernoulli) return beta_quantile(q, y.alpha, y.beta);
    return y.mean + std::sqrt(y.variance) * normal_quantile(q);
}

inline void check_arm(const BeliefVector& belief, int arm) {
    if (arm < 0 || static_cast<std::size_t>(arm) >= belief.size())
        throw std::invalid_argument("arm index out of range");
}

inline BeliefVector update(const BeliefVector& belief, int arm, double reward) {
    check_arm(belief, arm);
    BeliefVector out = belief;
    out[arm] = update(belief[arm], reward);
    return out;
}

inline double posterior_mean(const BeliefVector& belief, int arm) {
    check_arm(belief, arm);
    return posterior_mean(belief[arm]);
}

// One sampled future: true parameters plus a K x T reward matrix where
// rewards(a, n) is the reward of the (n+1)-th pull of arm a.
struct Outcome {
    int num_arms = 0;
    int horizon = 0;
    std::vector<double> theta;    // K
    std::vector<double> rewards;  // K * T, row-major

    double reward(int a, int n) const { return rewards[static_cast<std::size_t>(a) * horizon + n]; }
};

inline Outcome sample_outcome(const BeliefVector& belief, int horizon, RngStream& rng) {
    if (belief.empty()) throw std::invalid_argument("sample_outcome: empty belief");
    if (horizon < 1) throw std::invalid_argument("sample_outcome: horizon must be >= 1");
    Outcome o;
    o.num_arms = static_cast<int>(belief.size());
    o.horizon = horizon;
    o.theta.resize(o.num_arms);
    o.rewards.resize(static_cast<std::size_t>(o.num_arms) * horizon);
    for (int a = 0; a < o.num_arms; ++a) o.theta[a] = sample_parameter(belief[a], rng);
    for (int a = 0; a < o.num_arms; ++a)
        for (int n = 0; n < horizon; ++n)
            o.rewards[static_cast<std::size_t>(a) * horizon + n] =
                sample_reward(belief[a], o.theta[a], rng);
    return o;
}

// Posterior-mean path per arm: at(a, n) is the posterior mean after the arm's
// first n rewards have been observed, n = 0..length-1.
struct MeanTrajectory {
    int num_arms = 0;
    int length = 0;  // entries per arm
    std::vector<double> mu;

    double at(int a, int n) const { return mu[static_cast<std::size_t>(a) * length + n]; }
};

inline std::vector<double> mean_trajectory_row(const ArmPrior& prior, const double* rewards,
                                               int num_rewards) {
    std::vector<double> mu(static_cast<std::size_t>(num_rewards) + 1);
    ArmPrior y = prior;
    mu[0] = posterior_mean(y);
    for (int n = 0; n < num_rewards; ++n) {
        y = update(y, rewards[n]);
        mu[n + 1] = posterior_mean(y);
    }
    return mu;
}

inline MeanTrajectory mean_trajectory(const BeliefVector& prior, const Outcome& outcome,
                                      int num_rewards) {
    if (static_cast<int>(prior.size()) != outcome.num_arms)
        throw std::invalid_argument("mean_trajectory: belief/outcome arm mismatch");
    if (num_rewards > outcome.horizon)
        throw std::invalid_argument("mean_trajectory: outcome holds too few rewards");
    MeanTrajectory t;
    t.num_arms = outcome.num_arms;
    t.length = num_rewards + 1;
    t.mu.resize(static_cast<std::size_t>(t.num_arms) * t.length);
    for (int a = 0; a < t.num_arms; ++a) {
        const auto row = mean_trajectory_row(
            prior[a], outcome.rewards.data() + static_cast<std::size_t>(a) * outcome.horizon,
            num_rewards);
        std::copy(row.begin(), row.end(), t.mu.begin() + static_cast<std::size_t>(a) * t.length);
    }
    return t;
}

// One draw of the posterior mean after n_obs future observations, using the
// sufficient statistic of the reward sum instead of a sequential fold.
inline double sample_fh_mean(const ArmPrior& y, long n_obs, RngStream& rng) {
    if (n_obs < 0) throw std::invalid_argument("sample_fh_mean: n_obs must be >= 0");
    if (n_obs == 0) return posterior_mean(y);
    const double theta = sample_parameter(y, rng);
    double sum;
    if (y.family == Family::kBetaBernoulli) {
        sum = static_cast<double>(rng.binomial(n_obs, theta));
    } else {
        sum = static_cast<double>(n_obs) * theta +
              std::sqrt(static_cast<double>(n_obs) * y.noise_variance) * rng.normal();
    }
    return posterior_mean(posterior_after(y, n_obs, sum));
}

namespace detail {

inline double max_cdf(const BeliefVector& belief, double x) {
    double p = 1.0;
    for (const auto& y : belief) {
        p *= param_cdf(y, x);
        if (p == 0.0) break;
    }
    return p;
}

}  // namespace detail

// E[max_a mu_a(theta_a)] under the joint belief, by deterministic quadrature.
// All-Beta vectors integrate the survival function of the max on [0,1];
// otherwise a tangent substitution over the real line is used.
inline double expected_max_mean(const BeliefVector& belief) {
    if (belief.empty()) throw std::invalid_argument("expected_max_mean: empty belief");
    if (belief.size() == 1) return posterior_mean(belief[0]);

    bool all_beta = true;
    for (const auto& y : belief)
        if (y.family != Family::kBetaBernoulli) all_beta = false;

    const GaussLegendre& gl = gauss_legendre_256();

    if (all_beta) {
        // E[max] = int_0^1 (1 - prod_a F_a(x)) dx
        CompensatedSum acc;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double x = 0.5 * (gl.nodes[i] + 1.0);
            acc.add(0.5 * gl.weights[i] * (1.0 - detail::max_cdf(belief, x)));
        }
        return acc.value();
    }

    double lo_mean = posterior_mean(belief[0]);
    double hi_mean = lo_mean;
    double max_std = posterior_std(belief[0]);
    for (const auto& y : belief) {
        const double m = posterior_mean(y);
        lo_mean = std::fmin(lo_mean, m);
        hi_mean = std::fmax(hi_mean, m);
        max_std = std::fmax(max_std, posterior_std(y));
    }
    const double center = 0.5 * (lo_mean + hi_mean);
    double scale = max_std + 0.5 * (hi_mean - lo_mean);
    if (!(scale > 0.0)) return hi_mean;  // all arms degenerate
    scale = std::fmax(scale, 1e-12 * (1.0 + std::fabs(center)));

    // E[max] = c + int_c^inf (1 - G) dx - int_-inf^c G dx with x = c + s*tan(u),
    // each half on 256 Gauss-Legendre nodes.
    CompensatedSum acc;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double u = 0.25 * kPi * (gl.nodes[i] + 1.0);  // (0, pi/2)
        const double w = 0.25 * kPi * gl.weights[i];
        const double tn = std::tan(u);
        const double sec2 = 1.0 + tn * tn;
        acc.add(w * scale * sec2 * (1.0 - detail::max_cdf(belief, center + scale * tn)));
        acc.add(-w * scale * sec2 * detail::max_cdf(belief, center - scale * tn));
    }
    const double result = center + acc.value();
    if (!std::isfinite(result)) throw std::runtime_error("expected_max_mean: quadrature failed");
    return result;
}

}  // namespace irs
