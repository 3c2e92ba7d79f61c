#pragma once

// Bandit policies: FTPL with geometric resampling (and its averaged GR-m
// variant), an exact-weight FTPL ablation, Tsallis-INF and a uniform control.

#include "distributions.hpp"
#include "oracle.hpp"
#include "perturbation.hpp"
#include "random.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ftpl_lab {

enum class PolicyKind { FTPL, FTPL_ExactWeight, TsallisInf, Uniform };
enum class RateMode { Adversarial, Stochastic };

inline std::string to_string(PolicyKind k)
{
    switch (k) {
    case PolicyKind::FTPL: return "ftpl";
    case PolicyKind::FTPL_ExactWeight: return "ftpl_exact_weight";
    case PolicyKind::TsallisInf: return "tsallis_inf";
    case PolicyKind::Uniform: return "uniform";
    }
    return "unknown";
}

inline std::string to_string(RateMode m) { return m == RateMode::Adversarial ? "adversarial" : "stochastic"; }

struct PolicyConfig {
    PolicyKind kind = PolicyKind::FTPL;
    std::optional<DistributionSpec> spec;
    double c = 1.0;
    RateMode rate_mode = RateMode::Adversarial;
    bool denormalize = false;
    int gr_repeats = 1;
    long long resample_cap = 1000000;
    std::string label; // empty: derived from the other fields

    bool uses_perturbation() const { return kind == PolicyKind::FTPL || kind == PolicyKind::FTPL_ExactWeight; }

    std::string effective_label() const
    {
        if (!label.empty())
            return label;
        std::ostringstream os;
        os << to_string(kind);
        if (uses_perturbation()) {
            os << '[' << spec->label() << "]/c=" << c << '/' << to_string(rate_mode);
            if (kind == PolicyKind::FTPL)
                os << "/gr" << gr_repeats;
            if (denormalize)
                os << "/denorm";
        }
        return os.str();
    }

    void validate() const
    {
        if (uses_perturbation()) {
            if (!spec)
                throw SpecError("policy " + to_string(kind) + " needs a perturbation spec");
            if (!(spec->tail_index() > 1.0))
                throw SpecError("policy perturbation needs tail index > 1");
        }
        if (!(c > 0.0) || !std::isfinite(c))
            throw SpecError("policy c must be positive");
        if (gr_repeats < 1)
            throw SpecError("gr_repeats must be >= 1");
        if (resample_cap < 1000)
            throw SpecError("resample_cap must be >= 1000");
    }
};

inline void to_json(nlohmann::json& j, const PolicyConfig& p)
{
    j = nlohmann::json{{"kind", to_string(p.kind)},
                       {"c", p.c},
                       {"rate_mode", to_string(p.rate_mode)},
                       {"denormalize", p.denormalize},
                       {"gr_repeats", p.gr_repeats},
                       {"resample_cap", p.resample_cap},
                       {"label", p.effective_label()}};
    if (p.spec)
        j["spec"] = *p.spec;
}

inline PolicyConfig policy_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw SpecError("policy config must be a JSON object");
    PolicyConfig p;
    try {
        const std::string kind = j.value("kind", "ftpl");
        if (kind == "ftpl")
            p.kind = PolicyKind::FTPL;
        else if (kind == "ftpl_exact_weight")
            p.kind = PolicyKind::FTPL_ExactWeight;
        else if (kind == "tsallis_inf")
            p.kind = PolicyKind::TsallisInf;
        else if (kind == "uniform")
            p.kind = PolicyKind::Uniform;
        else
            throw SpecError("unknown policy kind '" + kind + "'");
        if (j.contains("spec"))
            p.spec = spec_from_json(j.at("spec"));
        p.c = j.value("c", 1.0);
        const std::string mode = j.value("rate_mode", "adversarial");
        if (mode == "adversarial")
            p.rate_mode = RateMode::Adversarial;
        else if (mode == "stochastic")
            p.rate_mode = RateMode::Stochastic;
        else
            throw SpecError("unknown rate_mode '" + mode + "'");
        p.denormalize = j.value("denormalize", false);
        p.gr_repeats = j.value("gr_repeats", 1);
        p.resample_cap = j.value("resample_cap", 1000000LL);
        p.label = j.value("label", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("policy config: ") + e.what());
    }
    p.validate();
    return p;
}

/// Adversarial: c K^{1/alpha - 1/2} / sqrt(t). Stochastic: c / sqrt(t).
inline double learning_rate(long long t, double c, int K, double alpha, RateMode mode)
{
    if (t < 1 || !(c > 0.0) || K < 2 || !(alpha > 1.0))
        throw std::invalid_argument("learning_rate: need t >= 1, c > 0, K >= 2, alpha > 1");
    const double base = c / std::sqrt(static_cast<double>(t));
    if (mode == RateMode::Stochastic)
        return base;
    return base * std::pow(static_cast<double>(K), 1.0 / alpha - 0.5);
}

struct RoundOutcome {
    std::size_t arm = 0;
    double resample_count = 1.0; // 0 when the loss was zero and no estimate was needed
    double loss_observed = 0.0;
    bool capped = false;
    std::vector<double> weights; // selection law this round, when known exactly
};

struct PolicyState {
    PolicyConfig config;
    int K = 0;
    std::vector<double> cum_loss_est;
    long long round = 1;
    Rng gen;
    double scale = 1.0; // perturbation multiplier: 1/a_K when denormalized
    std::vector<double> lambda;
    std::vector<double> scratch;

    PolicyState(PolicyConfig cfg, int arms, std::uint64_t seed)
        : config(std::move(cfg))
        , K(arms)
        , cum_loss_est(arms, 0.0)
        , gen(seed)
    {
        config.validate();
        if (K < 2)
            throw SpecError("policies need K >= 2 arms");
        if (config.kind == PolicyKind::FTPL_ExactWeight && K > 8)
            throw SpecError("ftpl_exact_weight supports K <= 8");
        // X = r / a_K, so that the largest of K perturbations is O(1) for every law
        if (config.denormalize && config.uses_perturbation())
            scale = 1.0 / tail_quantile_a_k(*config.spec, static_cast<double>(K));
    }

    double eta() const
    {
        if (config.kind == PolicyKind::TsallisInf)
            return 2.0 / std::sqrt(static_cast<double>(round));
        const double alpha = config.spec ? config.spec->tail_index() : 2.0;
        return learning_rate(round, config.c, K, alpha, config.rate_mode);
    }

    /// eta * L / scale, the vector the perturbation competes against.
    void refresh_lambda()
    {
        const double f = eta() / scale;
        lambda.resize(K);
        for (int i = 0; i < K; ++i)
            lambda[i] = f * cum_loss_est[i];
    }
};

/// Plays argmin_i L_i - scale * r_i / eta for a fresh perturbation r.
/// Denormalized with c is the same policy as plain with c * a_K.
inline std::size_t ftpl_select(PolicyState& s)
{
    s.refresh_lambda();
    return perturbed_leader(*s.config.spec, s.lambda, s.gen, s.scratch);
}

/// gr_repeats independent resampling loops for `arm` at the current lambda;
/// reports the mean count.
inline RoundOutcome geometric_resample(PolicyState& s, std::size_t arm, double loss)
{
    RoundOutcome out;
    out.arm = arm;
    out.loss_observed = loss;
    const auto order = challenger_order(s.lambda);
    double total = 0.0;
    for (int r = 0; r < s.config.gr_repeats; ++r) {
        const auto c = geometric_count(*s.config.spec, s.lambda, order, arm, s.config.resample_cap, s.gen);
        total += static_cast<double>(c.count);
        out.capped = out.capped || c.capped;
    }
    out.resample_count = total / s.config.gr_repeats;
    return out;
}

/// L_arm += loss * m; advances the round.
inline void ftpl_update(PolicyState& s, const RoundOutcome& o)
{
    s.cum_loss_est[o.arm] += o.loss_observed * o.resample_count;
    ++s.round;
}

namespace detail {

template <class URBG>
std::size_t sample_from(std::span<const double> w, URBG& gen)
{
    double total = 0.0;
    for (double x : w)
        total += x;
    const double u = uniform_open(gen) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        acc += w[i];
        if (u < acc)
            return i;
    }
    return w.size() - 1;
}

} // namespace detail

template <class LossFn>
RoundOutcome ftpl_step(PolicyState& s, LossFn&& loss_of)
{
    const std::size_t arm = ftpl_select(s);
    const double loss = loss_of(arm);
    RoundOutcome o;
    if (loss == 0.0) {
        // zero increment whatever m is, so the redraws are skipped
        o.arm = arm;
        o.loss_observed = 0.0;
        o.resample_count = 0.0;
    } else {
        o = geometric_resample(s, arm, loss);
    }
    ftpl_update(s, o);
    return o;
}

/// Samples from the quadrature phi and updates with loss / phi_arm.
template <class LossFn>
RoundOutcome exact_weight_select_update(PolicyState& s, LossFn&& loss_of)
{
    s.refresh_lambda();
    RoundOutcome o;
    o.weights = phi(*s.config.spec, s.lambda).values;
    o.arm = detail::sample_from(o.weights, s.gen);
    o.loss_observed = loss_of(o.arm);
    o.resample_count = 1.0 / o.weights[o.arm];
    s.cum_loss_est[o.arm] += o.loss_observed / o.weights[o.arm];
    ++s.round;
    return o;
}

/// 1/2-Tsallis-INF weights w_i = 4 / (eta (L_i - x))^2 with sum 1.
/// Newton from x0 = min L - 2/eta approaches the root from the right;
/// bisection on [min L - 2 sqrt(K)/eta, x0] is the fallback.
inline std::vector<double> tsallis_weights(std::span<const double> L, double eta)
{
    const double lo_L = *std::min_element(L.begin(), L.end());
    auto sum_and_slope = [&](double x, double& slope) {
        double s = 0.0;
        slope = 0.0;
        for (double l : L) {
            const double d = eta * (l - x);
            s += 4.0 / (d * d);
            slope += 8.0 * eta / (d * d * d);
        }
        return s;
    };
    auto weights_at = [&](double x) {
        std::vector<double> w(L.size());
        for (std::size_t i = 0; i < L.size(); ++i) {
            const double d = eta * (L[i] - x);
            w[i] = 4.0 / (d * d);
        }
        return w;
    };
    double x = lo_L - 2.0 / eta;
    for (int it = 0; it < 200; ++it) {
        double slope;
        const double f = sum_and_slope(x, slope) - 1.0;
        if (std::fabs(f) <= 1e-12)
            return weights_at(x);
        const double nx = x - f / slope;
        if (!std::isfinite(nx) || nx >= lo_L)
            break;
        x = nx;
    }
    double a = lo_L - 2.0 * std::sqrt(static_cast<double>(L.size())) / eta, b = lo_L - 2.0 / eta;
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        double slope;
        const double f = sum_and_slope(m, slope) - 1.0;
        if (std::fabs(f) <= 1e-12)
            return weights_at(m);
        (f > 0.0 ? b : a) = m;
        if (!(m > a && m < b))
            break;
    }
    throw std::runtime_error("tsallis_weights: normalization did not converge");
}

template <class LossFn>
RoundOutcome tsallis_inf_step(PolicyState& s, LossFn&& loss_of)
{
    RoundOutcome o;
    o.weights = tsallis_weights(s.cum_loss_est, s.eta());
    o.arm = detail::sample_from(o.weights, s.gen);
    o.loss_observed = loss_of(o.arm);
    o.resample_count = 1.0 / o.weights[o.arm];
    s.cum_loss_est[o.arm] += o.loss_observed / o.weights[o.arm];
    ++s.round;
    return o;
}

template <class LossFn>
RoundOutcome uniform_step(PolicyState& s, LossFn&& loss_of)
{
    RoundOutcome o;
    o.weights.assign(s.K, 1.0 / s.K);
    o.arm = static_cast<std::size_t>(uniform_open(s.gen) * s.K);
    if (o.arm >= static_cast<std::size_t>(s.K))
        o.arm = s.K - 1;
    o.loss_observed = loss_of(o.arm);
    ++s.round;
    return o;
}

/// One round of whichever policy the state is configured for.
template <class LossFn>
RoundOutcome play_round(PolicyState& s, LossFn&& loss_of)
{
    switch (s.config.kind) {
    case PolicyKind::FTPL: return ftpl_step(s, loss_of);
    case PolicyKind::FTPL_ExactWeight: return exact_weight_select_update(s, loss_of);
    case PolicyKind::TsallisInf: return tsallis_inf_step(s, loss_of);
    case PolicyKind::Uniform: return uniform_step(s, loss_of);
    }
    throw std::logic_error("unknown policy kind");
}

} // namespace ftpl_lab
