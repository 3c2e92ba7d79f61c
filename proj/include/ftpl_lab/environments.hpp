#pragma once

// Loss generators (stochastic Bernoulli, oblivious adversarial matrix,
// stochastically constrained adversarial) and pseudo-regret accounting.

#include "distributions.hpp"
#include "random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftpl_lab {

enum class EnvKind { StochasticBernoulli, AdversarialSequence, StochConstrainedAdversarial };

inline std::string to_string(EnvKind k)
{
    switch (k) {
    case EnvKind::StochasticBernoulli: return "stochastic";
    case EnvKind::AdversarialSequence: return "adversarial";
    case EnvKind::StochConstrainedAdversarial: return "stoch_constrained";
    }
    return "unknown";
}

using LossMatrix = std::vector<std::vector<double>>;

/// Row-major CSV, one row per round.
inline LossMatrix read_loss_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open loss matrix '" + path + "'");
    LossMatrix m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw SpecError("loss matrix '" + path + "': bad value '" + cell + "'");
            }
            if (!(v >= 0.0 && v <= 1.0))
                throw SpecError("loss matrix '" + path + "': losses must lie in [0,1]");
            row.push_back(v);
        }
        if (!m.empty() && row.size() != m.front().size())
            throw SpecError("loss matrix '" + path + "': ragged rows");
        m.push_back(std::move(row));
    }
    if (m.empty())
        throw SpecError("loss matrix '" + path + "' is empty");
    return m;
}

struct EnvironmentConfig {
    EnvKind kind = EnvKind::StochasticBernoulli;
    int K = 0;
    std::vector<double> means;                // stochastic
    std::string file;                         // adversarial, for provenance
    std::shared_ptr<const LossMatrix> matrix; // adversarial
    double delta = 0.25;                      // constrained
    double phase_growth = 1.6;                // constrained
    int best_arm = 0;                         // constrained

    static EnvironmentConfig stochastic(std::vector<double> means)
    {
        EnvironmentConfig e;
        e.kind = EnvKind::StochasticBernoulli;
        e.K = static_cast<int>(means.size());
        e.means = std::move(means);
        e.validate();
        return e;
    }

    static EnvironmentConfig constrained(int K, double delta, double phase_growth = 1.6, int best_arm = 0)
    {
        EnvironmentConfig e;
        e.kind = EnvKind::StochConstrainedAdversarial;
        e.K = K;
        e.delta = delta;
        e.phase_growth = phase_growth;
        e.best_arm = best_arm;
        e.validate();
        return e;
    }

    static EnvironmentConfig adversarial(LossMatrix m, std::string file = {})
    {
        EnvironmentConfig e;
        e.kind = EnvKind::AdversarialSequence;
        e.K = m.empty() ? 0 : static_cast<int>(m.front().size());
        e.file = std::move(file);
        e.matrix = std::make_shared<const LossMatrix>(std::move(m));
        e.validate();
        return e;
    }

    void validate() const
    {
        if (K < 2)
            throw SpecError("environment needs K >= 2 arms");
        switch (kind) {
        case EnvKind::StochasticBernoulli: {
            if (static_cast<int>(means.size()) != K)
                throw SpecError("stochastic environment: means must have K entries");
            for (double m : means)
                if (!(m >= 0.0 && m <= 1.0))
                    throw SpecError("stochastic environment: means must lie in [0,1]");
            const double lo = *std::min_element(means.begin(), means.end());
            if (std::count(means.begin(), means.end(), lo) != 1)
                throw SpecError("stochastic environment: the best mean must be unique");
            break;
        }
        case EnvKind::AdversarialSequence:
            if (!matrix || matrix->empty())
                throw SpecError("adversarial environment: empty loss matrix");
            break;
        case EnvKind::StochConstrainedAdversarial:
            if (!(delta > 0.0 && delta < 1.0))
                throw SpecError("constrained environment: delta must lie in (0,1)");
            if (!(phase_growth > 1.0))
                throw SpecError("constrained environment: phase_growth must exceed 1");
            if (best_arm < 0 || best_arm >= K)
                throw SpecError("constrained environment: best_arm out of range");
            break;
        }
    }

    /// Index of the comparator arm for the stochastic kinds.
    int optimal_arm() const
    {
        if (kind == EnvKind::StochasticBernoulli)
            return static_cast<int>(std::min_element(means.begin(), means.end()) - means.begin());
        if (kind == EnvKind::StochConstrainedAdversarial)
            return best_arm;
        return -1;
    }

    /// Per-arm gaps; empty for the adversarial matrix.
    std::vector<double> gaps() const
    {
        std::vector<double> g;
        if (kind == EnvKind::StochasticBernoulli) {
            const double lo = *std::min_element(means.begin(), means.end());
            for (double m : means)
                g.push_back(m - lo);
        } else if (kind == EnvKind::StochConstrainedAdversarial) {
            g.assign(K, delta);
            g[best_arm] = 0.0;
        }
        return g;
    }
};

/// Relative paths in "file" are resolved against base_dir.
inline EnvironmentConfig environment_from_json(const nlohmann::json& j, const std::string& base_dir = {})
{
    if (!j.is_object())
        throw SpecError("environment config must be a JSON object");
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "stochastic")
            return EnvironmentConfig::stochastic(j.at("means").get<std::vector<double>>());
        if (kind == "stoch_constrained")
            return EnvironmentConfig::constrained(j.at("K").get<int>(), j.value("delta", 0.25),
                                                  j.value("phase_growth", 1.6), j.value("best_arm", 0));
        if (kind == "adversarial") {
            std::string file = j.at("file").get<std::string>();
            std::string path = file;
            if (!base_dir.empty() && !file.empty() && file.front() != '/')
                path = base_dir + "/" + file;
            return EnvironmentConfig::adversarial(read_loss_csv(path), file);
        }
        throw SpecError("unknown environment kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("environment config: ") + e.what());
    }
}

inline void to_json(nlohmann::json& j, const EnvironmentConfig& e)
{
    j = nlohmann::json{{"kind", to_string(e.kind)}, {"K", e.K}};
    switch (e.kind) {
    case EnvKind::StochasticBernoulli: j["means"] = e.means; break;
    case EnvKind::AdversarialSequence: j["file"] = e.file; break;
    case EnvKind::StochConstrainedAdversarial:
        j["delta"] = e.delta;
        j["phase_growth"] = e.phase_growth;
        j["best_arm"] = e.best_arm;
        break;
    }
}

/// Running instance of an environment for one trial.
class Environment {
public:
    Environment(EnvironmentConfig cfg, std::uint64_t seed)
        : cfg_(std::move(cfg))
        , gen_(seed)
    {
        cfg_.validate();
    }

    const EnvironmentConfig& config() const noexcept { return cfg_; }
    int K() const noexcept { return cfg_.K; }

    /// Phase index (0-based) containing round t; phase p lasts ceil(growth^p) rounds.
    long long phase_of(long long t) const
    {
        long long p = 0, end = 0;
        while (true) {
            end += static_cast<long long>(std::ceil(std::pow(cfg_.phase_growth, static_cast<double>(p))));
            if (t <= end)
                return p;
            ++p;
        }
    }

    /// Expected loss vector of round t.
    std::vector<double> mean_vector(long long t) const
    {
        switch (cfg_.kind) {
        case EnvKind::StochasticBernoulli: return cfg_.means;
        case EnvKind::AdversarialSequence: return row(t);
        case EnvKind::StochConstrainedAdversarial: {
            const bool regime_a = phase_of(t) % 2 == 0;
            const double best = regime_a ? 0.5 - cfg_.delta / 2.0 : 0.0;
            std::vector<double> m(cfg_.K, best + cfg_.delta);
            m[cfg_.best_arm] = best;
            return m;
        }
        }
        return {};
    }

    /// Loss vector of round t (t >= 1). Rounds must be requested in order
    /// for the random kinds to be reproducible.
    std::vector<double> loss_vector(long long t)
    {
        if (t < 1)
            throw std::invalid_argument("loss_vector: t must be >= 1");
        if (cfg_.kind == EnvKind::AdversarialSequence)
            return row(t);
        auto m = mean_vector(t);
        for (double& x : m)
            x = uniform_open(gen_) < x ? 1.0 : 0.0;
        return m;
    }

private:
    std::vector<double> row(long long t) const
    {
        if (t < 1 || t > static_cast<long long>(cfg_.matrix->size()))
            throw std::out_of_range("adversarial loss matrix exhausted at round " + std::to_string(t));
        return (*cfg_.matrix)[t - 1];
    }

    EnvironmentConfig cfg_;
    Rng gen_;
};

struct Trace {
    std::vector<std::size_t> arms;
    std::vector<double> losses; // observed loss of the played arm
    std::vector<double> resample_counts;
    std::vector<double> gap_increments; // gap accounting term per round (stochastic kinds)
    std::vector<std::vector<double>> loss_vectors; // kept for adversarial accounting
    double cum_incurred = 0.0;
    double cum_optimal = 0.0;
    long long capped_rounds = 0;

    std::size_t rounds() const { return arms.size(); }
};

/// Cumulative pseudo-regret after each round. Stochastic kinds sum the
/// recorded gap terms; the adversarial matrix uses incurred loss minus the
/// best fixed arm's loss up to that round.
inline std::vector<double> pseudo_regret(const Trace& tr, const EnvironmentConfig& env)
{
    std::vector<double> out(tr.rounds());
    if (env.kind != EnvKind::AdversarialSequence) {
        double acc = 0.0;
        for (std::size_t t = 0; t < tr.rounds(); ++t)
            out[t] = acc += tr.gap_increments[t];
        return out;
    }
    std::vector<double> cum(env.K, 0.0);
    double incurred = 0.0;
    for (std::size_t t = 0; t < tr.rounds(); ++t) {
        const auto& lv = tr.loss_vectors.empty() ? (*env.matrix)[t] : tr.loss_vectors[t];
        for (int i = 0; i < env.K; ++i)
            cum[i] += lv[i];
        incurred += lv[tr.arms[t]];
        out[t] = incurred - *std::min_element(cum.begin(), cum.end());
    }
    return out;
}

} // namespace ftpl_lab
