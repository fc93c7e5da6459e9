// Command-line front end: run experiment grids, estimate bounds, inspect
// single decisions, solve the exact DP, and emit plot data.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irs/irs.hpp"

namespace {

struct ModelFlags {
    std::string family = "beta";
    int arms = 2;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> noise;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
    cmd->add_option("--model", m.family, "Model family: beta | gaussian")
        ->check(CLI::IsMember({"beta", "gaussian"}));
    cmd->add_option("--arms", m.arms, "Number of arms K");
    cmd->add_option("--alpha", m.alpha, "Beta prior alpha (scalar or one per arm)");
    cmd->add_option("--beta", m.beta, "Beta prior beta (scalar or one per arm)");
    cmd->add_option("--mean", m.mean, "Gaussian prior mean (scalar or one per arm)");
    cmd->add_option("--variance", m.variance, "Gaussian prior variance (scalar or one per arm)");
    cmd->add_option("--noise", m.noise, "Gaussian noise variance (scalar or one per arm)");
}

double pick(const std::vector<double>& v, int k, double fallback) {
    if (v.empty()) return fallback;
    if (v.size() == 1) return v[0];
    return v.at(k);
}

irs::BeliefVector build_model(const ModelFlags& m) {
    if (m.arms < 1) throw std::invalid_argument("--arms must be >= 1");
    const bool beta_flags = !m.alpha.empty() || !m.beta.empty();
    const bool gauss_flags = !m.mean.empty() || !m.variance.empty() || !m.noise.empty();
    if (m.family == "beta" && gauss_flags)
        throw std::invalid_argument("Gaussian flags given for a Beta model");
    if (m.family == "gaussian" && beta_flags)
        throw std::invalid_argument("Beta flags given for a Gaussian model");
    for (const auto* v : {&m.alpha, &m.beta, &m.mean, &m.variance, &m.noise})
        if (v->size() > 1 && static_cast<int>(v->size()) != m.arms)
            throw std::invalid_argument("per-arm flag lists must have length K");

    irs::BeliefVector prior;
    for (int k = 0; k < m.arms; ++k) {
        if (m.family == "beta")
            prior.push_back(
                irs::ArmPrior::beta_bernoulli(pick(m.alpha, k, 1.0), pick(m.beta, k, 1.0)));
        else
            prior.push_back(irs::ArmPrior::gaussian(pick(m.mean, k, 0.0), pick(m.variance, k, 1.0),
                                                    pick(m.noise, k, 1.0)));
    }
    return prior;
}

int env_jobs(int flag_jobs) {
    if (flag_jobs > 0) return flag_jobs;
    if (const char* env = std::getenv("IRS_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return flag_jobs;
}

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-relaxation sampling policies and bounds for finite-horizon "
                 "Bayesian bandits"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run an experiment grid from a config file");
    std::string sim_config, sim_out, sim_json;
    int sim_jobs = 0;
    sim->add_option("--config", sim_config, "JSON experiment config")->required();
    sim->add_option("--out", sim_out, "Write the CSV table here instead of stdout");
    sim->add_option("--json", sim_json, "Also write the JSON table here");
    sim->add_option("--jobs", sim_jobs, "Worker threads (0 = hardware)");

    // bound
    auto* bound = app.add_subcommand("bound", "Monte Carlo estimate of one performance bound");
    ModelFlags bound_model;
    add_model_flags(bound, bound_model);
    std::string bound_penalty = "ts";
    int bound_t = 0;
    long bound_s = 20000;
    std::uint64_t bound_seed = 0;
    int bound_jobs = 0;
    std::string bound_out;
    bound->add_option("--penalty", bound_penalty, "ts | irs-fh | irs-v-zero | irs-v-emax");
    bound->add_option("--T", bound_t, "Horizon")->required();
    bound->add_option("--S", bound_s, "Sample count");
    bound->add_option("--seed", bound_seed, "Master seed (required)")->required();
    bound->add_option("--jobs", bound_jobs, "Worker threads (0 = hardware)");
    bound->add_option("--out", bound_out, "Write the result line here instead of stdout");

    // decide
    auto* dec = app.add_subcommand("decide", "Print one decision of a policy");
    ModelFlags dec_model;
    add_model_flags(dec, dec_model);
    std::string dec_policy = "ts";
    int dec_t = 0;
    std::uint64_t dec_seed = 0;
    dec->add_option("--policy", dec_policy, "Policy name");
    dec->add_option("--T", dec_t, "Remaining horizon")->required();
    dec->add_option("--seed", dec_seed, "Master seed (required)")->required();

    // opt
    auto* opt = app.add_subcommand("opt", "Exact DP value for a Beta-Bernoulli instance");
    ModelFlags opt_model;
    add_model_flags(opt, opt_model);
    int opt_t = 0;
    opt->add_option("--T", opt_t, "Horizon")->required();

    // curves
    auto* curves = app.add_subcommand("curves", "Run a config and emit per-curve CSV files");
    std::string curves_config, curves_dir;
    int curves_jobs = 0;
    curves->add_option("--config", curves_config, "JSON experiment config")->required();
    curves->add_option("--out-dir", curves_dir, "Output directory")->required();
    curves->add_option("--jobs", curves_jobs, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (*sim) {
            irs::ExperimentConfig cfg = irs::load_config(sim_config);
            const int jobs = env_jobs(sim_jobs);
            if (jobs > 0) cfg.jobs = jobs;
            const irs::RegretTable table = irs::run_experiment(cfg);
            const std::string csv = irs::to_csv(table);
            if (!cfg.output_csv.empty()) write_or_print(csv, cfg.output_csv);
            if (!cfg.output_json.empty()) write_or_print(irs::to_json(table).dump(2) + "\n",
                                                         cfg.output_json);
            if (!sim_json.empty()) write_or_print(irs::to_json(table).dump(2) + "\n", sim_json);
            write_or_print(csv, sim_out);
        } else if (*bound) {
            const irs::BeliefVector prior = build_model(bound_model);
            const irs::PenaltyKind z = irs::parse_penalty(bound_penalty);
            irs::BoundOptions opts;
            opts.jobs = irs::resolve_jobs(env_jobs(bound_jobs));
            const irs::RngStream key(bound_seed, 0);
            const irs::BoundEstimate est = irs::estimate_bound(z, bound_t, prior, bound_s, key, opts);
            char buf[160];
            std::snprintf(buf, sizeof(buf), "W[%s] T=%d S=%ld seed=%llu: mean=%.6g stderr=%.6g\n",
                          bound_penalty.c_str(), bound_t, bound_s,
                          static_cast<unsigned long long>(bound_seed), est.mean,
                          est.stderr_value);
            write_or_print(buf, bound_out);
        } else if (*dec) {
            const irs::BeliefVector prior = build_model(dec_model);
            const irs::PolicyKind p = irs::parse_policy(dec_policy);
            irs::RngStream rng(dec_seed, irs::kPolicyTag);
            const int arm = irs::decide(p, dec_t, prior, rng);
            std::printf("arm=%d\n", arm + 1);
        } else if (*opt) {
            const irs::BeliefVector prior = build_model(opt_model);
            const irs::DpSolution sol = irs::opt_dp(opt_t, prior);
            std::printf("V*=%.6f\n", sol.value());
        } else if (*curves) {
            irs::ExperimentConfig cfg = irs::load_config(curves_config);
            const int jobs = env_jobs(curves_jobs);
            if (jobs > 0) cfg.jobs = jobs;
            const irs::RegretTable table = irs::run_experiment(cfg);
            irs::write_curves(table, curves_dir);
            std::printf("wrote curves to %s\n", curves_dir.c_str());
        }
    } catch (const irs::BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
