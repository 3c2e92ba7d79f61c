#pragma once

// Experiment runner: seeded trials, parallel execution, aggregation into
// regret curves, theoretical-shape overlays, slope fits, CSV/JSON output.

#include "environments.hpp"
#include "policies.hpp"
#include "random.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace ftpl_lab {

struct ExperimentConfig {
    EnvironmentConfig env;
    std::vector<PolicyConfig> policies;
    long long horizon = 1000;
    int trials = 1;
    std::uint64_t master_seed = 0;
    long long record_every = 0; // extra checkpoints every this many rounds (0: none)
    std::string output_path;
    bool overlays = true;

    void validate() const
    {
        env.validate();
        if (horizon < 0)
            throw SpecError("horizon must be >= 0");
        if (trials < 1)
            throw SpecError("trials must be >= 1");
        if (record_every < 0)
            throw SpecError("record_every must be >= 0");
        if (policies.empty())
            throw SpecError("experiment needs at least one policy");
        std::set<std::string> labels;
        for (const auto& p : policies) {
            p.validate();
            if (!labels.insert(p.effective_label()).second)
                throw SpecError("duplicate policy label '" + p.effective_label() + "'");
            if (p.kind == PolicyKind::FTPL_ExactWeight && env.K > 8)
                throw SpecError("ftpl_exact_weight supports K <= 8");
        }
        if (env.kind == EnvKind::AdversarialSequence && horizon > static_cast<long long>(env.matrix->size()))
            throw SpecError("horizon exceeds the adversarial loss matrix length");
    }
};

inline ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::string& base_dir = {})
{
    if (!j.is_object())
        throw SpecError("experiment config must be a JSON object");
    ExperimentConfig c;
    try {
        c.env = environment_from_json(j.at("env"), base_dir);
        for (const auto& p : j.at("policies"))
            c.policies.push_back(policy_from_json(p));
        c.horizon = j.at("horizon").get<long long>();
        c.trials = j.value("trials", 1);
        c.master_seed = j.value("master_seed", std::uint64_t{0});
        c.record_every = j.value("record_every", 0LL);
        c.output_path = j.value("output", std::string{});
        c.overlays = j.value("overlays", true);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::json experiment_to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["env"] = c.env;
    j["policies"] = c.policies;
    j["horizon"] = c.horizon;
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["record_every"] = c.record_every;
    j["overlays"] = c.overlays;
    return j;
}

/// Powers of two up to T, multiples of record_every, and T itself.
inline std::vector<long long> checkpoints(long long T, long long record_every)
{
    std::set<long long> s;
    for (long long p = 1; p <= T; p *= 2)
        s.insert(p);
    if (record_every > 0)
        for (long long t = record_every; t <= T; t += record_every)
            s.insert(t);
    if (T >= 1)
        s.insert(T);
    return {s.begin(), s.end()};
}

/// Seed of the policy's own stream. The environment stream is keyed by
/// (master_seed, trial) only, so all policies face the same losses.
inline std::uint64_t policy_seed(std::uint64_t master, long long trial, const std::string& label)
{
    return mix_seed(master, static_cast<std::uint64_t>(trial), hash_label(label));
}

inline std::uint64_t environment_seed(std::uint64_t master, long long trial)
{
    return mix_seed(master, static_cast<std::uint64_t>(trial), 0x656e76ULL);
}

/// select -> observe -> resample -> update for T rounds.
inline Trace run_trial(const ExperimentConfig& cfg, const PolicyConfig& policy, long long trial_index)
{
    Trace tr;
    const long long T = cfg.horizon;
    Environment env(cfg.env, environment_seed(cfg.master_seed, trial_index));
    PolicyState state(policy, cfg.env.K, policy_seed(cfg.master_seed, trial_index, policy.effective_label()));
    const auto gaps = cfg.env.gaps();
    const bool adversarial = cfg.env.kind == EnvKind::AdversarialSequence;
    tr.arms.reserve(T);
    tr.losses.reserve(T);
    tr.resample_counts.reserve(T);
    if (!adversarial)
        tr.gap_increments.reserve(T);
    for (long long t = 1; t <= T; ++t) {
        const auto lv = env.loss_vector(t);
        const auto o = play_round(state, [&](std::size_t arm) { return lv[arm]; });
        tr.arms.push_back(o.arm);
        tr.losses.push_back(o.loss_observed);
        tr.resample_counts.push_back(o.resample_count);
        tr.cum_incurred += o.loss_observed;
        if (o.capped)
            ++tr.capped_rounds;
        if (adversarial) {
            tr.loss_vectors.push_back(lv);
        } else {
            tr.cum_optimal += lv[cfg.env.optimal_arm()];
            // expected gap under the round's law when the policy knows it
            double g = 0.0;
            if (!o.weights.empty())
                for (std::size_t i = 0; i < gaps.size(); ++i)
                    g += o.weights[i] * gaps[i];
            else
                g = gaps[o.arm];
            tr.gap_increments.push_back(g);
        }
    }
    return tr;
}

struct Overlay {
    std::string name;
    std::vector<double> values;
    double scale = 1.0; // least-squares factor applied to the raw shape
};

struct RegretCurve {
    std::string policy_label;
    std::vector<long long> checkpoints;
    std::vector<double> mean;
    std::vector<double> std;       // across-trial sample standard deviation
    std::vector<double> std_error; // std / sqrt(trials)
    std::vector<Overlay> overlays;
    long long capped_rounds = 0;
    int trials = 0;
};

/// Aggregates per-trial regret samples (trial-major) at fixed checkpoints.
inline RegretCurve aggregate(const std::string& label, const std::vector<long long>& cps,
                             const std::vector<std::vector<double>>& per_trial)
{
    RegretCurve c;
    c.policy_label = label;
    c.checkpoints = cps;
    c.trials = static_cast<int>(per_trial.size());
    const double n = static_cast<double>(per_trial.size());
    for (std::size_t k = 0; k < cps.size(); ++k) {
        double s = 0.0;
        for (const auto& tr : per_trial)
            s += tr[k];
        const double mean = s / n;
        double ss = 0.0;
        for (const auto& tr : per_trial)
            ss += (tr[k] - mean) * (tr[k] - mean);
        const double sd = per_trial.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        c.mean.push_back(mean);
        c.std.push_back(sd);
        c.std_error.push_back(sd / std::sqrt(n));
    }
    return c;
}

/// Exponent of the intermediate-regime power law: (alpha-2)/(2(alpha-1))
/// above 2, 1 - alpha/2 below, 0 (logarithmic) at 2.
inline double theorem3_exponent(double alpha)
{
    if (alpha > 2.0)
        return (alpha - 2.0) / (2.0 * (alpha - 1.0));
    if (alpha < 2.0)
        return 1.0 - alpha / 2.0;
    return 0.0;
}

inline double shape_sqrt_Kt(double t, int K) { return std::sqrt(K * t); }

inline double shape_log_over_gaps(double t, const std::vector<double>& gaps)
{
    double acc = 0.0;
    for (double g : gaps)
        if (g > 0.0)
            acc += std::log(t) / g;
    return acc;
}

/// Least-squares scale of `shape` onto `curve` over the final third of the checkpoints.
inline double fit_scale(const std::vector<double>& curve, const std::vector<double>& shape)
{
    const std::size_t n = curve.size();
    const std::size_t from = n - (n + 2) / 3;
    double num = 0.0, den = 0.0;
    for (std::size_t k = from; k < n; ++k) {
        num += curve[k] * shape[k];
        den += shape[k] * shape[k];
    }
    return den > 0.0 ? num / den : 0.0;
}

/// Attaches sqrt(Kt), sum ln(t)/Delta_i (stochastic kinds) and, for FTPL with
/// tail index != 2, the t^{e(alpha)} power law; each scaled by fit_scale.
inline void overlay_bounds(RegretCurve& curve, const EnvironmentConfig& env, const PolicyConfig& policy)
{
    if (curve.checkpoints.empty())
        return;
    auto add = [&](const std::string& name, auto&& shape) {
        Overlay o;
        o.name = name;
        std::vector<double> raw;
        for (long long t : curve.checkpoints)
            raw.push_back(shape(static_cast<double>(t)));
        o.scale = fit_scale(curve.mean, raw);
        for (double r : raw)
            o.values.push_back(o.scale * r);
        curve.overlays.push_back(std::move(o));
    };
    add("sqrt_Kt", [&](double t) { return shape_sqrt_Kt(t, env.K); });
    const auto gaps = env.gaps();
    if (!gaps.empty())
        add("log_over_gaps", [&](double t) { return shape_log_over_gaps(t, gaps); });
    if (policy.uses_perturbation() && policy.spec->tail_index() != 2.0) {
        const double e = theorem3_exponent(policy.spec->tail_index());
        add("power_law", [&](double t) { return std::pow(t, e); });
    }
}

/// OLS slope of ln(value) on ln(t) over checkpoints with t >= (1 - window) * t_last.
inline double slope_fit(const std::vector<long long>& ts, const std::vector<double>& values, double window)
{
    if (ts.empty() || ts.size() != values.size())
        throw std::invalid_argument("slope_fit: empty or mismatched curve");
    if (!(window > 0.0 && window <= 1.0))
        throw std::invalid_argument("slope_fit: window must lie in (0, 1]");
    const double from = (1.0 - window) * static_cast<double>(ts.back());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (static_cast<double>(ts[k]) < from)
            continue;
        if (!(values[k] > 0.0))
            throw std::domain_error("slope_fit: nonpositive value at t = " + std::to_string(ts[k]));
        const double x = std::log(static_cast<double>(ts[k])), y = std::log(values[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        throw std::invalid_argument("slope_fit: fewer than two points in the window");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double slope_fit(const RegretCurve& c, double window) { return slope_fit(c.checkpoints, c.mean, window); }

inline int default_threads()
{
    if (const char* env = std::getenv("FTPL_LAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1)
                return n;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

/// All (policy, trial) pairs, spread over `threads` workers. Results are
/// stored by index and aggregated in trial order, so the output does not
/// depend on scheduling.
inline std::vector<RegretCurve> run_experiment(const ExperimentConfig& cfg, int threads = 1)
{
    cfg.validate();
    const auto cps = checkpoints(cfg.horizon, cfg.record_every);
    const std::size_t P = cfg.policies.size();
    const std::size_t N = static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<std::vector<double>>> samples(P, std::vector<std::vector<double>>(N));
    std::vector<std::vector<long long>> capped(P, std::vector<long long>(N, 0));

    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    std::size_t error_job = SIZE_MAX;

    auto worker = [&] {
        while (true) {
            const std::size_t job = next.fetch_add(1);
            if (job >= P * N)
                return;
            const std::size_t p = job / N, k = job % N;
            try {
                const auto tr = run_trial(cfg, cfg.policies[p], static_cast<long long>(k));
                const auto reg = pseudo_regret(tr, cfg.env);
                auto& out = samples[p][k];
                out.reserve(cps.size());
                for (long long t : cps)
                    out.push_back(reg[t - 1]);
                capped[p][k] = tr.capped_rounds;
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (job < error_job) {
                    error_job = job;
                    first_error = std::current_exception();
                }
                next.store(P * N);
            }
        }
    };
    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (first_error) {
        const std::size_t p = error_job / N, k = error_job % N;
        try {
            std::rethrow_exception(first_error);
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(k) + " of policy '" +
                                     cfg.policies[p].effective_label() + "' failed: " + e.what());
        }
    }

    std::vector<RegretCurve> curves;
    for (std::size_t p = 0; p < P; ++p) {
        auto c = aggregate(cfg.policies[p].effective_label(), cps, samples[p]);
        for (long long v : capped[p])
            c.capped_rounds += v;
        if (cfg.overlays)
            overlay_bounds(c, cfg.env, cfg.policies[p]);
        curves.push_back(std::move(c));
    }
    return curves;
}

// ---------------------------------------------------------------------------
// output

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace detail

inline std::string to_csv(const std::vector<RegretCurve>& curves)
{
    std::string out = "policy,t,mean_regret,std_regret,overlay_name,overlay_value\n";
    for (const auto& c : curves) {
        const std::string label = detail::csv_field(c.policy_label);
        for (std::size_t k = 0; k < c.checkpoints.size(); ++k)
            out += label + "," + std::to_string(c.checkpoints[k]) + "," + detail::num(c.mean[k]) + "," +
                   detail::num(c.std[k]) + ",,\n";
        for (const auto& o : c.overlays)
            for (std::size_t k = 0; k < c.checkpoints.size(); ++k)
                out += label + "," + std::to_string(c.checkpoints[k]) + "," + detail::num(c.mean[k]) + "," +
                       detail::num(c.std[k]) + "," + detail::csv_field(o.name) + "," + detail::num(o.values[k]) +
                       "\n";
    }
    return out;
}

inline nlohmann::json curves_to_json(const std::vector<RegretCurve>& curves)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json overlays = nlohmann::json::array();
        for (const auto& o : c.overlays)
            overlays.push_back({{"name", o.name}, {"scale", o.scale}, {"values", o.values}});
        arr.push_back({{"policy", c.policy_label},
                       {"trials", c.trials},
                       {"checkpoints", c.checkpoints},
                       {"mean", c.mean},
                       {"std", c.std},
                       {"stderr", c.std_error},
                       {"capped_rounds", c.capped_rounds},
                       {"overlays", overlays}});
    }
    return nlohmann::json{{"curves", arr}};
}

inline std::vector<RegretCurve> curves_from_json(const nlohmann::json& j)
{
    std::vector<RegretCurve> out;
    for (const auto& c : j.at("curves")) {
        RegretCurve r;
        r.policy_label = c.at("policy").get<std::string>();
        r.trials = c.at("trials").get<int>();
        r.checkpoints = c.at("checkpoints").get<std::vector<long long>>();
        r.mean = c.at("mean").get<std::vector<double>>();
        r.std = c.at("std").get<std::vector<double>>();
        r.std_error = c.at("stderr").get<std::vector<double>>();
        r.capped_rounds = c.at("capped_rounds").get<long long>();
        for (const auto& o : c.at("overlays"))
            r.overlays.push_back(
                {o.at("name").get<std::string>(), o.at("values").get<std::vector<double>>(), o.at("scale").get<double>()});
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string to_json_text(const std::vector<RegretCurve>& curves) { return curves_to_json(curves).dump(2) + "\n"; }

enum class OutputFormat { Csv, Json };

/// Writes the curves; the file content is a pure function of the curves.
inline void emit(const std::vector<RegretCurve>& curves, const std::string& path, OutputFormat fmt)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << (fmt == OutputFormat::Csv ? to_csv(curves) : to_json_text(curves));
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace ftpl_lab
