#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "irs/bayes.hpp"
#include "irs/bounds.hpp"
#include "irs/names.hpp"
#include "irs/parallel.hpp"
#include "irs/policies.hpp"

namespace irs {

// Role tags for deriving per-sample streams from the master seed.  Nature
// randomness is shared by every policy and horizon; each (policy, T) pair
// gets its own independent stream per sample.
inline constexpr std::uint64_t kNatureTag = 0x6e617475ULL;   // "natu"
inline constexpr std::uint64_t kPolicyTag = 0x706f6c69ULL;   // "poli"

struct ExperimentConfig {
    BeliefVector prior;
    std::vector<int> horizons;  // strictly increasing; last entry is T_max
    std::vector<PolicyKind> policies;
    std::vector<PenaltyKind> penalties;
    long samples = 20000;
    std::uint64_t seed = 0;
    int jobs = 0;  // 0 = hardware concurrency
    std::int64_t vemax_budget = 50'000'000;
    bool measure_runtime = true;
    std::string output_csv;
    std::string output_json;
};

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.prior.empty()) throw std::invalid_argument("config: model has no arms");
    const Family fam = cfg.prior.front().family;
    for (const auto& y : cfg.prior)
        if (y.family != fam) throw std::invalid_argument("config: mixed model families");
    for (std::size_t i = 1; i < cfg.horizons.size(); ++i)
        if (cfg.horizons[i] <= cfg.horizons[i - 1])
            throw std::invalid_argument("config: horizons must be strictly increasing");
    for (int t : cfg.horizons)
        if (t < 1) throw std::invalid_argument("config: horizons must be >= 1");
    if (cfg.samples < 2) throw std::invalid_argument("config: samples must be >= 2");
    for (PolicyKind p : cfg.policies)
        if (p == PolicyKind::kOptDp && fam != Family::kBetaBernoulli)
            throw std::invalid_argument("config: opt-dp requires a Beta-Bernoulli model");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& model = j.at("model");
    const std::string family = model.at("family").get<std::string>();
    if (family != "beta" && family != "gaussian")
        throw std::invalid_argument("config: family must be 'beta' or 'gaussian'");

    auto field = [&](const char* name, double fallback, bool has_fallback, int k,
                     int arms) -> double {
        if (!model.contains(name)) {
            if (!has_fallback) throw std::invalid_argument(std::string("config: missing ") + name);
            return fallback;
        }
        const auto& v = model.at(name);
        if (v.is_array()) {
            if (static_cast<int>(v.size()) != arms)
                throw std::invalid_argument(std::string("config: ") + name +
                                            " array length must equal arms");
            return v.at(k).get<double>();
        }
        return v.get<double>();
    };

    const auto& arms = model.at("arms");
    if (arms.is_array()) {
        for (const auto& a : arms) {
            if (family == "beta")
                cfg.prior.push_back(ArmPrior::beta_bernoulli(a.at("alpha").get<double>(),
                                                             a.at("beta").get<double>()));
            else
                cfg.prior.push_back(ArmPrior::gaussian(a.at("mean").get<double>(),
                                                       a.at("variance").get<double>(),
                                                       a.at("noise_variance").get<double>()));
        }
    } else {
        const int K = arms.get<int>();
        if (K < 1) throw std::invalid_argument("config: arms must be >= 1");
        for (int k = 0; k < K; ++k) {
            if (family == "beta")
                cfg.prior.push_back(ArmPrior::beta_bernoulli(field("alpha", 1.0, true, k, K),
                                                             field("beta", 1.0, true, k, K)));
            else
                cfg.prior.push_back(ArmPrior::gaussian(field("mean", 0.0, true, k, K),
                                                       field("variance", 1.0, true, k, K),
                                                       field("noise_variance", 1.0, true, k, K)));
        }
    }

    cfg.horizons = j.at("horizons").get<std::vector<int>>();
    if (j.contains("policies"))
        for (const auto& s : j.at("policies")) cfg.policies.push_back(parse_policy(s));
    if (j.contains("penalties"))
        for (const auto& s : j.at("penalties")) cfg.penalties.push_back(parse_penalty(s));
    cfg.samples = j.value("samples", 20000L);
    if (!j.contains("seed")) throw std::invalid_argument("config: seed is required");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.jobs = j.value("jobs", 0);
    cfg.vemax_budget = j.value("vemax_budget", std::int64_t{50'000'000});
    cfg.output_csv = j.value("output_csv", std::string{});
    cfg.output_json = j.value("output_json", std::string{});
    validate(cfg);
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

struct RegretRow {
    std::string kind;  // "policy" or "bound"
    std::string name;
    int horizon = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    double stderr_value = std::numeric_limits<double>::quiet_NaN();
    double regret = std::numeric_limits<double>::quiet_NaN();
    double regret_bound = std::numeric_limits<double>::quiet_NaN();
    double runtime_ms = std::numeric_limits<double>::quiet_NaN();
    bool skipped = false;
    std::string note;  // failure reason for skipped cells
};

struct RegretTable {
    std::vector<RegretRow> rows;
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

}  // namespace detail

// Runs the full policy x horizon x penalty grid under common random numbers:
// every policy at every horizon faces the same nature draw per sample, and
// the bound cells solve their inner problems on those same outcomes.
inline RegretTable run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const long S = cfg.samples;
    const int n_t = static_cast<int>(cfg.horizons.size());
    const int n_p = static_cast<int>(cfg.policies.size());
    const int n_z = static_cast<int>(cfg.penalties.size());
    RegretTable table;
    if (n_t == 0) return table;
    const int t_max = cfg.horizons.back();

    const int policy_cells = n_p * n_t;
    const int bound_cells = n_z * n_t;
    const int cells = policy_cells + bound_cells;

    std::vector<std::vector<double>> values(cells, std::vector<double>(S));
    std::vector<std::vector<double>> times(cells);
    if (cfg.measure_runtime)
        for (auto& v : times) v.resize(S);
    std::vector<std::vector<double>> bench(n_t, std::vector<double>(S));

    std::unique_ptr<std::atomic<char>[]> skipped(new std::atomic<char>[cells]);
    for (int c = 0; c < cells; ++c) skipped[c].store(0);
    std::vector<std::string> notes(cells);
    std::mutex note_mutex;

    auto mark_skipped = [&](int cell, const char* what) {
        char expected = 0;
        if (skipped[cell].compare_exchange_strong(expected, 1)) {
            std::lock_guard<std::mutex> lock(note_mutex);
            notes[cell] = what;
        }
    };

    // Exact-DP tables are identical across samples; solve once per horizon.
    std::vector<std::optional<DpSolution>> dp_by_t(n_t);
    const bool wants_opt_dp =
        std::find(cfg.policies.begin(), cfg.policies.end(), PolicyKind::kOptDp) !=
        cfg.policies.end();
    if (wants_opt_dp)
        for (int ti = 0; ti < n_t; ++ti) dp_by_t[ti].emplace(cfg.horizons[ti], cfg.prior, DpOptions{});

    VEmaxOptions vemax_opts{cfg.vemax_budget};
    using Clock = std::chrono::steady_clock;

    parallel_for(S, cfg.jobs, [&](long i) {
        RngStream nature_rng(cfg.seed, hash_combine(kNatureTag, static_cast<std::uint64_t>(i)));
        const Outcome nature = sample_outcome(cfg.prior, t_max, nature_rng);
        double max_theta = nature.theta[0];
        for (double th : nature.theta) max_theta = std::fmax(max_theta, th);

        for (int ti = 0; ti < n_t; ++ti)
            bench[ti][i] = static_cast<double>(cfg.horizons[ti]) * max_theta;

        for (int pi = 0; pi < n_p; ++pi) {
            for (int ti = 0; ti < n_t; ++ti) {
                const int cell = pi * n_t + ti;
                if (skipped[cell].load()) continue;
                const int T = cfg.horizons[ti];
                std::uint64_t sid = hash_combine(kPolicyTag, static_cast<std::uint64_t>(pi));
                sid = hash_combine(sid, static_cast<std::uint64_t>(T));
                sid = hash_combine(sid, static_cast<std::uint64_t>(i));
                RngStream rng(cfg.seed, sid);
                DecideOptions opts;
                opts.vemax = vemax_opts;
                if (cfg.policies[pi] == PolicyKind::kOptDp) opts.dp_solution = &*dp_by_t[ti];
                try {
                    const auto t0 = Clock::now();
                    const EpisodeRecord rec =
                        run_episode(cfg.policies[pi], T, cfg.prior, nature, rng, opts);
                    if (cfg.measure_runtime)
                        times[cell][i] =
                            std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
                    values[cell][i] = rec.realized_mean_payoff;
                } catch (const std::exception& e) {
                    mark_skipped(cell, e.what());
                }
            }
        }

        for (int zi = 0; zi < n_z; ++zi) {
            for (int ti = 0; ti < n_t; ++ti) {
                const int cell = policy_cells + zi * n_t + ti;
                if (skipped[cell].load()) continue;
                try {
                    const auto t0 = Clock::now();
                    const double v =
                        inner_value(cfg.penalties[zi], nature, cfg.horizons[ti], cfg.prior,
                                    vemax_opts);
                    if (cfg.measure_runtime)
                        times[cell][i] =
                            std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
                    values[cell][i] = v;
                } catch (const std::exception& e) {
                    mark_skipped(cell, e.what());
                }
            }
        }
    });

    std::vector<double> bench_mean(n_t);
    for (int ti = 0; ti < n_t; ++ti) bench_mean[ti] = pairwise_sum(bench[ti]) / S;

    auto emit = [&](const std::string& kind, const std::string& name, int ti, int cell) {
        RegretRow row;
        row.kind = kind;
        row.name = name;
        row.horizon = cfg.horizons[ti];
        if (skipped[cell].load()) {
            row.skipped = true;
            row.note = notes[cell];
        } else {
            const MeanStderr ms = mean_and_stderr(values[cell]);
            row.value = ms.mean;
            row.stderr_value = ms.stderr_value;
            const double gap = bench_mean[ti] - ms.mean;
            row.regret = gap;
            if (kind == "bound") row.regret_bound = gap;
            if (cfg.measure_runtime) row.runtime_ms = detail::median(times[cell]);
        }
        table.rows.push_back(std::move(row));
    };

    for (int pi = 0; pi < n_p; ++pi)
        for (int ti = 0; ti < n_t; ++ti)
            emit("policy", policy_name(cfg.policies[pi]), ti, pi * n_t + ti);
    for (int zi = 0; zi < n_z; ++zi)
        for (int ti = 0; ti < n_t; ++ti)
            emit("bound", penalty_name(cfg.penalties[zi]), ti, policy_cells + zi * n_t + ti);
    return table;
}

namespace detail {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace detail

// CSV with the fixed schema kind,name,T,value,stderr,regret,regret_bound,
// runtime_ms; numbers carry 6 significant digits, absent values are blank.
inline std::string to_csv(const RegretTable& table) {
    std::string out = "kind,name,T,value,stderr,regret,regret_bound,runtime_ms\n";
    for (const auto& r : table.rows) {
        out += r.kind + ',' + r.name + ',' + std::to_string(r.horizon) + ',';
        out += detail::format_number(r.value) + ',';
        out += detail::format_number(r.stderr_value) + ',';
        out += detail::format_number(r.regret) + ',';
        out += detail::format_number(r.regret_bound) + ',';
        out += detail::format_number(r.runtime_ms) + '\n';
    }
    return out;
}

inline nlohmann::json to_json(const RegretTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    auto put = [](nlohmann::json& j, const char* key, double v) {
        if (std::isnan(v))
            j[key] = nullptr;
        else
            j[key] = v;
    };
    for (const auto& r : table.rows) {
        nlohmann::json j;
        j["kind"] = r.kind;
        j["name"] = r.name;
        j["T"] = r.horizon;
        put(j, "value", r.value);
        put(j, "stderr", r.stderr_value);
        put(j, "regret", r.regret);
        put(j, "regret_bound", r.regret_bound);
        put(j, "runtime_ms", r.runtime_ms);
        j["skipped"] = r.skipped;
        if (!r.note.empty()) j["note"] = r.note;
        rows.push_back(std::move(j));
    }
    return nlohmann::json{{"rows", rows}};
}

inline RegretTable table_from_json(const nlohmann::json& j) {
    RegretTable table;
    auto get = [](const nlohmann::json& row, const char* key) {
        if (!row.contains(key) || row.at(key).is_null())
            return std::numeric_limits<double>::quiet_NaN();
        return row.at(key).get<double>();
    };
    for (const auto& row : j.at("rows")) {
        RegretRow r;
        r.kind = row.at("kind").get<std::string>();
        r.name = row.at("name").get<std::string>();
        r.horizon = row.at("T").get<int>();
        r.value = get(row, "value");
        r.stderr_value = get(row, "stderr");
        r.regret = get(row, "regret");
        r.regret_bound = get(row, "regret_bound");
        r.runtime_ms = get(row, "runtime_ms");
        r.skipped = row.value("skipped", false);
        r.note = row.value("note", std::string{});
        table.rows.push_back(std::move(r));
    }
    return table;
}

// One CSV per curve (policy regret or bound regret-bound) for external
// plotting tools.
inline void write_curves(const RegretTable& table, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, std::string>> seen;
    for (const auto& r : table.rows) {
        const auto key = std::make_pair(r.kind, r.name);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        const std::string path = dir + "/" + r.kind + "_" + r.name + ".csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("write_curves: cannot open " + path);
        const bool is_bound = r.kind == "bound";
        out << "T," << (is_bound ? "regret_bound" : "regret") << "\n";
        for (const auto& row : table.rows) {
            if (row.kind != r.kind || row.name != r.name || row.skipped) continue;
            out << row.horizon << ','
                << detail::format_number(is_bound ? row.regret_bound : row.regret) << "\n";
        }
    }
}

}  // namespace irs
