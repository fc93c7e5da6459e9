#include <doctest.h>

#include <cmath>
#include <vector>

#include "irs/bounds.hpp"
#include "irs/names.hpp"
#include "oracles.hpp"

using namespace irs;

namespace {

const BeliefVector kUniform2{ArmPrior::beta_bernoulli(1, 1), ArmPrior::beta_bernoulli(1, 1)};

std::vector<double> bound_samples(PenaltyKind z, int horizon, const BeliefVector& prior, long S,
                                  const RngStream& key, int sample_horizon = 0) {
    std::vector<double> v(S);
    const int sh = sample_horizon > 0 ? sample_horizon : horizon;
    for (long i = 0; i < S; ++i) {
        RngStream rng = key.derived(detail::kBoundSampleTag, i);
        const Outcome o = sample_outcome(prior, sh, rng);
        v[i] = inner_value(z, o, horizon, prior);
    }
    return v;
}

}  // namespace

TEST_CASE("TS bound approaches the analytic benchmark") {
    const RngStream key(111, 0);
    const BoundEstimate est = estimate_bound(PenaltyKind::kTs, 200, kUniform2, 20000, key);
    CHECK(est.samples == 20000);
    // E[200 * max(U, U')] = 400/3
    CHECK(std::fabs(est.mean - 400.0 / 3.0) < 3.0 * est.stderr_value);
    CHECK(est.stderr_value == doctest::Approx(0.33).epsilon(0.25));
}

TEST_CASE("single-arm bounds collapse to T times the prior mean") {
    const BeliefVector one{ArmPrior::beta_bernoulli(3, 2)};
    const RngStream key(112, 0);
    for (PenaltyKind z : {PenaltyKind::kTs, PenaltyKind::kIrsFh, PenaltyKind::kIrsVZero}) {
        const BoundEstimate est = estimate_bound(z, 12, one, 5000, key);
        CHECK(std::fabs(est.mean - 12.0 * 0.6) < 3.0 * est.stderr_value);
    }
}

TEST_CASE("T=1 bounds: FH and V-Zero are exact, TS matches E[max theta]") {
    const BeliefVector asym{ArmPrior::beta_bernoulli(2, 1), ArmPrior::beta_bernoulli(1, 3)};
    const RngStream key(113, 0);
    const double best_prior_mean = 2.0 / 3.0;
    for (PenaltyKind z : {PenaltyKind::kIrsFh, PenaltyKind::kIrsVZero}) {
        const BoundEstimate est = estimate_bound(z, 1, asym, 500, key);
        CHECK(est.mean == doctest::Approx(best_prior_mean).epsilon(1e-12));
        CHECK(est.stderr_value == doctest::Approx(0.0).epsilon(1e-12));
    }
    const BoundEstimate ts = estimate_bound(PenaltyKind::kTs, 1, asym, 20000, key);
    CHECK(std::fabs(ts.mean - expected_max_mean(asym)) < 3.0 * ts.stderr_value);
}

TEST_CASE("same key reproduces bit-identical estimates") {
    const RngStream key(114, 9);
    const BoundEstimate a = estimate_bound(PenaltyKind::kIrsVZero, 15, kUniform2, 500, key);
    const BoundEstimate b = estimate_bound(PenaltyKind::kIrsVZero, 15, kUniform2, 500, key);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_value == b.stderr_value);

    // thread count must not change the estimate
    BoundOptions par;
    par.jobs = 4;
    const BoundEstimate c = estimate_bound(PenaltyKind::kIrsVZero, 15, kUniform2, 500, key, par);
    CHECK(a.mean == c.mean);
    CHECK(a.stderr_value == c.stderr_value);
}

TEST_CASE("bound monotonicity chain on paired outcomes") {
    struct Instance {
        BeliefVector prior;
        int T;
    };
    const std::vector<Instance> instances{
        {kUniform2, 20},
        {{ArmPrior::beta_bernoulli(2, 1), ArmPrior::beta_bernoulli(1, 1),
          ArmPrior::beta_bernoulli(1, 3)},
         15},
        {{ArmPrior::gaussian(0, 1, 1), ArmPrior::gaussian(0, 1, 1)}, 20},
        {{ArmPrior::gaussian(0, 1, 0.25), ArmPrior::gaussian(0.2, 1, 4.0)}, 12},
    };
    const RngStream key(115, 0);
    for (const auto& inst : instances) {
        const long S = 3000;
        const auto ts = bound_samples(PenaltyKind::kTs, inst.T, inst.prior, S, key);
        const auto fh = bound_samples(PenaltyKind::kIrsFh, inst.T, inst.prior, S, key);
        const auto vz = bound_samples(PenaltyKind::kIrsVZero, inst.T, inst.prior, S, key);
        std::vector<double> d1(S), d2(S);
        for (long i = 0; i < S; ++i) {
            d1[i] = ts[i] - fh[i];
            d2[i] = fh[i] - vz[i];
        }
        const auto m1 = mean_and_stderr(d1);
        const auto m2 = mean_and_stderr(d2);
        CHECK(m1.mean > -3.0 * m1.stderr_value);
        CHECK(m2.mean > -3.0 * m2.stderr_value);

        // V-Zero >= V-EMax is observed empirically; report without failing
        const auto ve = bound_samples(PenaltyKind::kIrsVEmax, inst.T, inst.prior, 300, key);
        std::vector<double> d3(300);
        for (long i = 0; i < 300; ++i) d3[i] = vz[i] - ve[i];
        const auto m3 = mean_and_stderr(d3);
        WARN_MESSAGE(m3.mean > -3.0 * m3.stderr_value,
                     "W^V-Zero >= W^V-EMax not observed on this instance");
    }
}

TEST_CASE("outcomes sampled at T_max serve truncated horizons") {
    const RngStream key(116, 0);
    const long S = 400;
    // per-sample TS values at T=6 from outcomes drawn at horizon 10 equal
    // 6/10 of the T=10 values (same theta draws)
    const auto v10 = bound_samples(PenaltyKind::kTs, 10, kUniform2, S, key);
    const auto v6 = bound_samples(PenaltyKind::kTs, 6, kUniform2, S, key, 10);
    for (long i = 0; i < S; ++i) CHECK(v6[i] == doctest::Approx(0.6 * v10[i]).epsilon(1e-12));

    BoundOptions opts;
    opts.sample_horizon = 4;
    CHECK_THROWS_AS(estimate_bound(PenaltyKind::kTs, 10, kUniform2, 10, key, opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_bound(PenaltyKind::kTs, 10, kUniform2, 1, key),
                    std::invalid_argument);
}

TEST_CASE("regret benchmark is deterministic quadrature") {
    CHECK(regret_benchmark(200, kUniform2) == doctest::Approx(400.0 / 3.0).epsilon(1e-9));
    const BeliefVector g2{ArmPrior::gaussian(0, 1, 1), ArmPrior::gaussian(0, 1, 1)};
    CHECK(regret_benchmark(200, g2) ==
          doctest::Approx(200.0 / std::sqrt(kPi)).epsilon(1e-8));
    const BeliefVector one{ArmPrior::beta_bernoulli(2, 3)};
    CHECK(regret_benchmark(7, one) == doctest::Approx(7.0 * 0.4).epsilon(1e-14));
}
