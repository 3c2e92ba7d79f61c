#pragma once

// Perturbation laws with Frechet-type tails and their tail analytics.
//
// Each law is described by an immutable DistributionSpec. The TruncShift
// wrapper replaces F by G(x) = (F(x) - F(1)) / (1 - F(1)) on x >= 1, which
// keeps the tail (S_G = S_F / (1 - F(1))) and moves the left endpoint to 1.

#include "random.hpp"
#include "special_functions.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftpl_lab {

enum class Family { Frechet, Pareto, GeneralizedPareto, StudentT, SnedecorF };
enum class Wrapper { None, TruncShift };

/// Invalid parameters or malformed configuration.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A closed form is not available for the requested family.
class NotAvailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string to_string(Family f)
{
    switch (f) {
    case Family::Frechet: return "frechet";
    case Family::Pareto: return "pareto";
    case Family::GeneralizedPareto: return "generalized_pareto";
    case Family::StudentT: return "student_t";
    case Family::SnedecorF: return "snedecor_f";
    }
    return "unknown";
}

inline Family family_from_string(const std::string& s)
{
    if (s == "frechet") return Family::Frechet;
    if (s == "pareto") return Family::Pareto;
    if (s == "generalized_pareto" || s == "gp") return Family::GeneralizedPareto;
    if (s == "student_t" || s == "t") return Family::StudentT;
    if (s == "snedecor_f" || s == "f") return Family::SnedecorF;
    throw SpecError("unknown distribution family '" + s + "'");
}

class DistributionSpec {
public:
    static DistributionSpec frechet(double alpha) { return {Family::Frechet, alpha, 0.0}; }
    static DistributionSpec pareto(double alpha) { return {Family::Pareto, alpha, 0.0}; }
    static DistributionSpec generalized_pareto(double alpha, double beta)
    {
        return {Family::GeneralizedPareto, alpha, beta};
    }
    static DistributionSpec student_t(double n) { return {Family::StudentT, n, 0.0}; }
    static DistributionSpec snedecor_f(double m, double n) { return {Family::SnedecorF, m, n}; }

    /// Same law after the conditioning-and-shift trick; idempotent.
    DistributionSpec trunc_shift() const
    {
        DistributionSpec out = *this;
        if (wrapper_ == Wrapper::TruncShift)
            return out;
        out.wrapper_ = Wrapper::TruncShift;
        out.sf_at_one_ = base_sf(1.0);
        if (!(out.sf_at_one_ > 0.0))
            throw SpecError("trunc_shift: base law has no mass above 1");
        return out;
    }

    DistributionSpec unwrapped() const
    {
        DistributionSpec out = *this;
        out.wrapper_ = Wrapper::None;
        out.sf_at_one_ = 1.0;
        return out;
    }

    Family family() const noexcept { return family_; }
    Wrapper wrapper() const noexcept { return wrapper_; }
    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }

    /// Regular-variation index alpha of the tail 1 - F.
    double tail_index() const noexcept
    {
        switch (family_) {
        case Family::StudentT: return p1_;
        case Family::SnedecorF: return p2_ / 2.0;
        default: return p1_;
        }
    }

    /// Left endpoint nu of the support (-inf for Student-t on the real line).
    double left_endpoint() const noexcept
    {
        if (wrapper_ == Wrapper::TruncShift)
            return 1.0;
        switch (family_) {
        case Family::Pareto: return 1.0;
        case Family::StudentT: return -std::numeric_limits<double>::infinity();
        default: return 0.0;
        }
    }

    /// 1 - F(1) of the unwrapped law; 1 when no wrapper is applied.
    double base_sf_at_one() const noexcept { return sf_at_one_; }

    std::string label() const
    {
        std::ostringstream os;
        os.precision(12);
        os << to_string(family_) << '(';
        switch (family_) {
        case Family::Frechet:
        case Family::Pareto: os << "alpha=" << p1_; break;
        case Family::GeneralizedPareto: os << "alpha=" << p1_ << ",beta=" << p2_; break;
        case Family::StudentT: os << "n=" << p1_; break;
        case Family::SnedecorF: os << "m=" << p1_ << ",n=" << p2_; break;
        }
        os << ')';
        if (wrapper_ == Wrapper::TruncShift)
            os << "+trunc_shift";
        return os.str();
    }

    bool operator==(const DistributionSpec& o) const
    {
        return family_ == o.family_ && wrapper_ == o.wrapper_ && p1_ == o.p1_ && p2_ == o.p2_;
    }

    // Unwrapped-law primitives. Public because the wrapper math and the
    // audit need them; most callers want the free functions below.
    double base_sf(double x) const;
    double base_cdf(double x) const;
    double base_log_pdf(double x) const;
    double base_tail_quantile(double q) const;

private:
    DistributionSpec(Family f, double p1, double p2)
        : family_(f)
        , p1_(p1)
        , p2_(p2)
    {
        const bool two = f == Family::GeneralizedPareto || f == Family::SnedecorF;
        if (!(p1 > 0.0) || !std::isfinite(p1) || (two && (!(p2 > 0.0) || !std::isfinite(p2))))
            throw SpecError("distribution parameters must be finite and strictly positive");
    }

    double numeric_tail_quantile(double q) const;

    Family family_;
    Wrapper wrapper_ = Wrapper::None;
    double p1_;
    double p2_;
    double sf_at_one_ = 1.0;
};

// ---------------------------------------------------------------------------
// Unwrapped law primitives

inline double DistributionSpec::base_sf(double x) const
{
    const double a = p1_;
    switch (family_) {
    case Family::Frechet:
        if (x <= 0.0)
            return 1.0;
        return -std::expm1(-std::pow(x, -a));
    case Family::Pareto:
        if (x <= 1.0)
            return 1.0;
        return std::pow(x, -a);
    case Family::GeneralizedPareto:
        if (x <= 0.0)
            return 1.0;
        return std::exp(-a * std::log1p(x / (a * p2_)));
    case Family::StudentT: {
        if (x < 0.0)
            return 1.0 - base_sf(-x);
        if (std::isinf(x))
            return 0.0;
        if (a == 2.0) {
            const double r = std::sqrt(2.0 + x * x);
            return 1.0 / (r * (r + x));
        }
        const double t = x * x / a;
        return 0.5 * special::ibeta(a / 2.0, 0.5, 1.0 / (1.0 + t), t / (1.0 + t));
    }
    case Family::SnedecorF: {
        if (x <= 0.0)
            return 1.0;
        if (std::isinf(x))
            return 0.0;
        const double m = p1_, n = p2_;
        const double u = m * x / n;
        if (m == 2.0)
            return std::exp(-(n / 2.0) * std::log1p(u));
        return special::ibeta(n / 2.0, m / 2.0, 1.0 / (1.0 + u), u / (1.0 + u));
    }
    }
    return 1.0;
}

inline double DistributionSpec::base_cdf(double x) const
{
    const double a = p1_;
    switch (family_) {
    case Family::Frechet:
        if (x <= 0.0)
            return 0.0;
        return std::exp(-std::pow(x, -a));
    case Family::Pareto:
        if (x <= 1.0)
            return 0.0;
        return -std::expm1(-a * std::log(x));
    case Family::GeneralizedPareto:
        if (x <= 0.0)
            return 0.0;
        return -std::expm1(-a * std::log1p(x / (a * p2_)));
    case Family::StudentT:
        return base_sf(-x);
    case Family::SnedecorF: {
        if (x <= 0.0)
            return 0.0;
        if (std::isinf(x))
            return 1.0;
        const double m = p1_, n = p2_;
        const double u = m * x / n;
        if (m == 2.0)
            return -std::expm1(-(n / 2.0) * std::log1p(u));
        return special::ibeta(m / 2.0, n / 2.0, u / (1.0 + u), 1.0 / (1.0 + u));
    }
    }
    return 0.0;
}

inline double DistributionSpec::base_log_pdf(double x) const
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const double a = p1_;
    switch (family_) {
    case Family::Frechet:
        if (x <= 0.0)
            return neg_inf;
        return std::log(a) - (a + 1.0) * std::log(x) - std::pow(x, -a);
    case Family::Pareto:
        if (x < 1.0)
            return neg_inf;
        return std::log(a) - (a + 1.0) * std::log(x);
    case Family::GeneralizedPareto:
        if (x < 0.0)
            return neg_inf;
        return -std::log(p2_) - (a + 1.0) * std::log1p(x / (a * p2_));
    case Family::StudentT:
        return -0.5 * std::log(a) - special::lbeta(a / 2.0, 0.5) - 0.5 * (a + 1.0) * std::log1p(x * x / a);
    case Family::SnedecorF: {
        const double m = p1_, n = p2_;
        if (x < 0.0)
            return neg_inf;
        const double front = 0.5 * m * std::log(m / n) - special::lbeta(m / 2.0, n / 2.0);
        if (x == 0.0) {
            if (m < 2.0)
                return std::numeric_limits<double>::infinity();
            if (m > 2.0)
                return neg_inf;
            return front;
        }
        return front + (0.5 * m - 1.0) * std::log(x) - 0.5 * (m + n) * std::log1p(m * x / n);
    }
    }
    return neg_inf;
}

inline double DistributionSpec::base_tail_quantile(double q) const
{
    const double a = p1_;
    switch (family_) {
    case Family::Frechet:
        if (q >= 1.0)
            return 0.0;
        return std::pow(-std::log1p(-q), -1.0 / a);
    case Family::Pareto:
        if (q >= 1.0)
            return 1.0;
        return std::pow(q, -1.0 / a);
    case Family::GeneralizedPareto:
        if (q >= 1.0)
            return 0.0;
        return a * p2_ * std::expm1(-std::log(q) / a);
    case Family::StudentT:
        if (q >= 1.0)
            return -std::numeric_limits<double>::infinity();
        if (q == 0.5)
            return 0.0;
        if (a == 2.0)
            return (1.0 - 2.0 * q) / std::sqrt(2.0 * q * (1.0 - q));
        if (q > 0.5)
            return -base_tail_quantile(1.0 - q);
        return numeric_tail_quantile(q);
    case Family::SnedecorF:
        if (q >= 1.0)
            return 0.0;
        if (p1_ == 2.0)
            return (p2_ / 2.0) * std::expm1(-(2.0 / p2_) * std::log(q));
        return numeric_tail_quantile(q);
    }
    return 0.0;
}

// Solves base_sf(x) = q for x > 0: bisection on a doubling bracket, then
// Newton steps in (log x, log sf) coordinates, kept inside the bracket.
inline double DistributionSpec::numeric_tail_quantile(double q) const
{
    const double log_q = std::log(q);
    double lo = 0.0;
    double hi = 1.0;
    while (base_sf(hi) > q) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi))
            return hi;
    }
    auto mid = [&] { return lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi; };
    for (int i = 0; i < 8 && (lo == 0.0 || hi / lo > 1.01); ++i) {
        const double m = mid();
        (base_sf(m) > q ? lo : hi) = m;
    }
    double x = mid();
    for (int it = 0; it < 200; ++it) {
        const double s = base_sf(x);
        if (s > q)
            lo = x;
        else
            hi = x;
        const double rho = x * std::exp(base_log_pdf(x)) / s;
        double next = x * std::exp((std::log(s) - log_q) / rho);
        if (!(next > lo && next < hi) || !std::isfinite(next))
            next = mid();
        if (std::fabs(next - x) <= 4e-16 * x || hi - lo <= 4e-16 * hi)
            return next;
        x = next;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Wrapped-law API

inline double sf(const DistributionSpec& d, double x)
{
    if (d.wrapper() == Wrapper::TruncShift) {
        if (x <= 1.0)
            return 1.0;
        return d.base_sf(x) / d.base_sf_at_one();
    }
    return d.base_sf(x);
}

inline double cdf(const DistributionSpec& d, double x)
{
    if (d.wrapper() == Wrapper::TruncShift) {
        if (x <= 1.0)
            return 0.0;
        const double s1 = d.base_sf_at_one();
        const double s = d.base_sf(x);
        return std::clamp((s1 - s) / s1, 0.0, 1.0);
    }
    return d.base_cdf(x);
}

/// log F(x), accurate in both tails.
inline double log_cdf(const DistributionSpec& d, double x)
{
    if (d.family() == Family::Frechet && d.wrapper() == Wrapper::None)
        return x > 0.0 ? -std::pow(x, -d.p1()) : -std::numeric_limits<double>::infinity();
    const double s = sf(d, x);
    if (s < 0.5)
        return std::log1p(-s);
    return std::log(cdf(d, x));
}

inline double log_pdf(const DistributionSpec& d, double x)
{
    if (d.wrapper() == Wrapper::TruncShift) {
        if (x < 1.0)
            return -std::numeric_limits<double>::infinity();
        return d.base_log_pdf(x) - std::log(d.base_sf_at_one());
    }
    return d.base_log_pdf(x);
}

/// Density; x below the left endpoint is a domain error.
inline double pdf(const DistributionSpec& d, double x)
{
    if (x < d.left_endpoint())
        throw std::domain_error("pdf: x below the left endpoint of the support");
    return std::exp(log_pdf(d, x));
}

/// Inverse survival function: the x with 1 - F(x) = q, for q in (0, 1].
inline double tail_quantile(const DistributionSpec& d, double q)
{
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("tail_quantile: q must lie in (0, 1]");
    if (d.wrapper() == Wrapper::TruncShift) {
        if (q >= 1.0)
            return 1.0;
        return std::max(1.0, d.base_tail_quantile(q * d.base_sf_at_one()));
    }
    return d.base_tail_quantile(q);
}

/// quantile(p) = U(1 / (1 - p)), p in [0, 1).
inline double quantile(const DistributionSpec& d, double p)
{
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("quantile: p must lie in [0, 1)");
    if (p == 0.0)
        return d.left_endpoint();
    // lower tail by symmetry: x = -U(1/p)
    if (d.family() == Family::StudentT && d.wrapper() == Wrapper::None && p < 0.5)
        return -tail_quantile(d, p);
    return tail_quantile(d, 1.0 - p);
}

/// One inverse-CDF draw. x = F^{-1}(1 - U) with U uniform on (0, 1).
template <class URBG>
inline double draw(const DistributionSpec& d, URBG& gen)
{
    return tail_quantile(d, uniform_open(gen));
}

template <class URBG>
std::vector<double> sample(const DistributionSpec& d, URBG& gen, std::size_t count)
{
    std::vector<double> out(count);
    for (auto& x : out)
        x = draw(d, gen);
    return out;
}

/// a_k = inf{x : F(x) >= 1 - 1/k}; a_1 is the left endpoint.
inline double tail_quantile_a_k(const DistributionSpec& d, double k)
{
    if (!(k >= 1.0))
        throw std::domain_error("a_k: k must be >= 1");
    return tail_quantile(d, 1.0 / k);
}

/// S_F(x) = x^alpha (1 - F(x)).
inline double slowly_varying_S_F(const DistributionSpec& d, double x)
{
    if (!(x > 0.0) || !(x >= d.left_endpoint()))
        throw std::domain_error("S_F: need x > 0 inside the support");
    return std::exp(d.tail_index() * std::log(x) + std::log(sf(d, x)));
}

/// von Mises ratio x f(x) / (1 - F(x)).
inline double von_mises_ratio(const DistributionSpec& d, double x)
{
    if (!(x >= d.left_endpoint()))
        throw std::domain_error("von_mises_ratio: x lies left of the support");
    const double s = sf(d, x);
    if (!(s >= 1e-300))
        throw std::range_error("von_mises_ratio: 1 - F(x) underflows at this x");
    return x * std::exp(log_pdf(d, x)) / s;
}

/// E[max of k draws] in closed form (Frechet via max-stability, Pareto via
/// the Beta integral).
inline double block_max_mean_closed(const DistributionSpec& d, long long k)
{
    if (k < 1)
        throw std::domain_error("block_max_mean_closed: k must be >= 1");
    const double a = d.tail_index();
    if (!(a > 1.0))
        throw std::domain_error("block_max_mean_closed: tail index must exceed 1");
    const bool pareto_law = d.family() == Family::Pareto; // TruncShift leaves Pareto unchanged
    if (d.family() == Family::Frechet && d.wrapper() == Wrapper::None)
        return std::pow(static_cast<double>(k), 1.0 / a) * special::tgamma(1.0 - 1.0 / a);
    if (pareto_law)
        return static_cast<double>(k) * special::beta_integer_second(1.0 - 1.0 / a, k);
    throw NotAvailable("block_max_mean_closed: no closed form for " + d.label() +
                       "; use the Monte-Carlo estimate");
}

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Draws the block maximum of k i.i.d. variates through the law F^k:
/// max = F^{-1}(V^{1/k}), i.e. tail probability 1 - V^{1/k}.
template <class URBG>
inline double draw_block_max(const DistributionSpec& d, long long k, URBG& gen)
{
    const double v = uniform_open(gen);
    const double q = -std::expm1(std::log(v) / static_cast<double>(k));
    return tail_quantile(d, std::max(q, std::numeric_limits<double>::min()));
}

/// Monte-Carlo mean of the maximum of k draws, with standard error.
template <class URBG>
McEstimate block_max_mean_mc(const DistributionSpec& d, long long k, long long n_reps, URBG& gen)
{
    if (n_reps < 100)
        throw std::domain_error("block_max_mean_mc: n_reps must be >= 100");
    if (k < 1)
        throw std::domain_error("block_max_mean_mc: k must be >= 1");
    double mean = 0.0, m2 = 0.0;
    for (long long r = 0; r < n_reps; ++r) {
        const double x = draw_block_max(d, k, gen);
        const double delta = x - mean;
        mean += delta / static_cast<double>(r + 1);
        m2 += delta * (x - mean);
    }
    const double var = m2 / static_cast<double>(n_reps - 1);
    return {mean, std::sqrt(var / static_cast<double>(n_reps))};
}

/// max over the grid of |F^k(a_k x) - exp(-x^{-alpha})|.
inline double fmda_convergence_gap(const DistributionSpec& d, double k, std::span<const double> grid)
{
    const double a_k = tail_quantile_a_k(d, k);
    const double alpha = d.tail_index();
    double worst = 0.0;
    for (double x : grid) {
        if (!(x > 0.0))
            throw std::domain_error("fmda_convergence_gap: grid points must be positive");
        const double lhs = std::exp(k * log_cdf(d, a_k * x));
        const double rhs = std::exp(-std::pow(x, -alpha));
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// JSON: {"family": "pareto", "params": {"alpha": 2.0}, "wrapper": "none"}

inline void to_json(nlohmann::json& j, const DistributionSpec& d)
{
    nlohmann::json params;
    switch (d.family()) {
    case Family::Frechet:
    case Family::Pareto: params["alpha"] = d.p1(); break;
    case Family::GeneralizedPareto:
        params["alpha"] = d.p1();
        params["beta"] = d.p2();
        break;
    case Family::StudentT: params["n"] = d.p1(); break;
    case Family::SnedecorF:
        params["m"] = d.p1();
        params["n"] = d.p2();
        break;
    }
    j = nlohmann::json{{"family", to_string(d.family())},
                       {"params", params},
                       {"wrapper", d.wrapper() == Wrapper::TruncShift ? "trunc_shift" : "none"}};
}

inline DistributionSpec spec_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("family"))
        throw SpecError("distribution spec must be an object with a 'family' field");
    const Family fam = family_from_string(j.at("family").get<std::string>());
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    auto get = [&](const char* key) {
        if (!params.contains(key) || !params.at(key).is_number())
            throw SpecError(std::string("distribution spec: missing numeric param '") + key + "'");
        return params.at(key).get<double>();
    };
    DistributionSpec d = [&] {
        switch (fam) {
        case Family::Frechet: return DistributionSpec::frechet(get("alpha"));
        case Family::Pareto: return DistributionSpec::pareto(get("alpha"));
        case Family::GeneralizedPareto: return DistributionSpec::generalized_pareto(get("alpha"), get("beta"));
        case Family::StudentT: return DistributionSpec::student_t(get("n"));
        case Family::SnedecorF: return DistributionSpec::snedecor_f(get("m"), get("n"));
        }
        throw SpecError("unreachable family");
    }();
    const std::string wrapper = j.value("wrapper", std::string("none"));
    if (wrapper == "trunc_shift")
        return d.trunc_shift();
    if (wrapper != "none")
        throw SpecError("unknown wrapper '" + wrapper + "'");
    return d;
}

} // namespace ftpl_lab
