#pragma once

// Quadrature ground truth for the arm-selection probabilities phi_i and the
// analysis integrals I_{i,n} (Frechet) and J_i (general), plus numeric checks
// of the two ratio lemmas and a Monte-Carlo probe of geometric resampling.

#include "audit.hpp"
#include "distributions.hpp"
#include "perturbation.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ftpl_lab {

/// lambda - min(lambda).
inline std::vector<double> underline(std::span<const double> lambda)
{
    if (lambda.empty())
        throw std::invalid_argument("gap vector must be nonempty");
    for (double v : lambda)
        if (!std::isfinite(v))
            throw std::invalid_argument("gap vector entries must be finite");
    const double lo = *std::min_element(lambda.begin(), lambda.end());
    std::vector<double> out(lambda.begin(), lambda.end());
    for (double& v : out)
        v -= lo;
    return out;
}

inline void validate_gaps(std::span<const double> gaps)
{
    if (gaps.empty())
        throw std::invalid_argument("gap vector must be nonempty");
    for (double v : gaps)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("gaps must be finite and nonnegative");
}

/// 1-based rank of gaps[i], ties broken lowest index first.
inline int stable_rank(std::span<const double> gaps, std::size_t i)
{
    int r = 1;
    for (std::size_t j = 0; j < gaps.size(); ++j)
        if (gaps[j] < gaps[i] || (gaps[j] == gaps[i] && j < i))
            ++r;
    return r;
}

struct OracleValues {
    std::vector<double> values;
    double error = 0.0; // summed quadrature error estimates
};

namespace detail {

// Integral over s = 1 - F(y) in (0, s_hi) of g(y) * prod_{j != i} F(y + shift_j),
// where y = tail_quantile(s) and shift_j = lambda_j - lambda_i.
template <class G>
QuadratureResult selection_integral(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                                    double s_hi, G&& g, const QuadratureConfig& cfg)
{
    const double nu = d.left_endpoint();
    std::vector<double> breaks;
    if (std::isfinite(nu))
        for (std::size_t j = 0; j < lambda.size(); ++j)
            if (lambda[j] < lambda[i]) {
                const double s = sf(d, nu + lambda[i] - lambda[j]);
                if (s > 0.0 && s < s_hi)
                    breaks.push_back(s);
            }
    auto integrand = [&](double s) {
        const double y = tail_quantile(d, s);
        double acc = g(y);
        for (std::size_t j = 0; j < lambda.size() && acc != 0.0; ++j)
            if (j != i)
                acc *= cdf(d, y + lambda[j] - lambda[i]);
        return acc;
    };
    return integrate(integrand, 0.0, s_hi, cfg, breaks);
}

inline double selection_upper_limit(const DistributionSpec& d, std::span<const double> lambda, std::size_t i)
{
    const double nu = d.left_endpoint();
    if (!std::isfinite(nu))
        return 1.0;
    const double lo = *std::min_element(lambda.begin(), lambda.end());
    return std::min(1.0, sf(d, nu + lambda[i] - lo));
}

} // namespace detail

/// Selection probabilities phi_i = P(argmin_j lambda_j - r_j = i).
/// Translation invariant; the vector is underlined internally.
inline OracleValues phi(const DistributionSpec& d, std::span<const double> lambda, const QuadratureConfig& cfg = {})
{
    const auto gaps = underline(lambda);
    OracleValues out;
    out.values.resize(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const double s_hi = detail::selection_upper_limit(d, gaps, i);
        if (!(s_hi > 0.0))
            continue;
        auto r = detail::selection_integral(d, gaps, i, s_hi, [](double) { return 1.0; }, cfg);
        out.values[i] = r.value;
        out.error += r.error;
    }
    return out;
}

/// I_{i,n}(lambda; alpha) = int_0^inf (z + lambda_i)^{-n} exp(-sum_j (z + lambda_j)^{-alpha}) dz,
/// evaluated after v = exp(-(z + min lambda)^{-alpha}).
inline QuadratureResult integral_I(std::span<const double> lambda, std::size_t i, double alpha, double n,
                                   const QuadratureConfig& cfg = {})
{
    validate_gaps(lambda);
    if (!(alpha > 0.0) || !(n > 1.0))
        throw std::invalid_argument("integral_I: need alpha > 0 and n > 1");
    if (i >= lambda.size())
        throw std::out_of_range("integral_I: arm index");
    const double lo = *std::min_element(lambda.begin(), lambda.end());
    const double v_lo = lo > 0.0 ? std::exp(-std::pow(lo, -alpha)) : 0.0;
    auto integrand = [&](double v) {
        if (!(v > 0.0) || !(v < 1.0))
            return 0.0;
        const double w = -std::log(v);
        const double y = std::pow(w, -1.0 / alpha); // z + min lambda
        const double z = y - lo;
        double expo = w;
        for (double l : lambda)
            expo -= std::pow(z + l, -alpha);
        return std::pow(w, -1.0 / alpha - 1.0) / alpha * std::pow(z + lambda[i], -n) * std::exp(expo);
    };
    return integrate(integrand, v_lo, 1.0, cfg);
}

/// J_i(lambda) = int_1^inf f(z + lambda_i) / (z + lambda_i) prod_{j != i} F(z + lambda_j) dz.
/// lambda is used as given (not underlined). Needs left endpoint >= 1.
inline QuadratureResult integral_J(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                                   const QuadratureConfig& cfg = {})
{
    validate_gaps(lambda);
    if (!(d.left_endpoint() >= 1.0))
        throw std::domain_error("integral_J needs a law with left endpoint >= 1 (apply trunc_shift)");
    if (i >= lambda.size())
        throw std::out_of_range("integral_J: arm index");
    // z >= 1  <=>  y = z + lambda_i >= 1 + lambda_i
    const double s_hi = std::min(detail::selection_upper_limit(d, lambda, i), sf(d, 1.0 + lambda[i]));
    if (!(s_hi > 0.0))
        return {};
    return detail::selection_integral(d, lambda, i, s_hi, [](double y) { return 1.0 / y; }, cfg);
}

/// The ratio tracked by the monotonicity lemma: I_{i,alpha+2} / I_{i,alpha+1}
/// for Frechet laws, J_i / phi_i otherwise. Both are taken on the
/// underlined vector.
inline double lemma_ratio(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                          const QuadratureConfig& cfg = {})
{
    const auto gaps = underline(lambda);
    if (d.family() == Family::Frechet && d.wrapper() == Wrapper::None) {
        const double a = d.tail_index();
        return integral_I(gaps, i, a, a + 2.0, cfg).value / integral_I(gaps, i, a, a + 1.0, cfg).value;
    }
    const double p = phi(d, gaps, cfg).values[i];
    return integral_J(d, gaps, i, cfg).value / p;
}

/// max(0, ratio(lambda) - ratio(lambda + step e_j)) for the tracked arm i.
/// The moved vector is underlined again before the ratio is taken.
inline double check_lemma4_monotonicity(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                                        std::size_t j, double step, const QuadratureConfig& cfg = {})
{
    if (i == j)
        throw std::invalid_argument("check_lemma4_monotonicity: j must differ from the tracked arm");
    if (!(step > 0.0))
        throw std::invalid_argument("check_lemma4_monotonicity: step must be positive");
    std::vector<double> moved(lambda.begin(), lambda.end());
    moved.at(j) += step;
    return std::max(0.0, lemma_ratio(d, lambda, i, cfg) - lemma_ratio(d, moved, i, cfg));
}

struct Lemma5Constants {
    double m;
    double A_l;
    double A_u;
};

/// Constants the bound lemma guarantees: m = Gamma(1 + 1/alpha), A_l = 1 for
/// Frechet; otherwise (when x f/(1-F) <= alpha, so S_F is nondecreasing)
/// m = 2 Gamma(1 + 1/alpha), A_l = S_F(nu)^{1/alpha} = nu, A_u = S_F(inf)^{1/alpha}.
inline Lemma5Constants lemma5_constants(const DistributionSpec& d)
{
    const double a = d.tail_index();
    if (d.family() == Family::Frechet && d.wrapper() == Wrapper::None)
        return {special::tgamma(1.0 + 1.0 / a), 1.0, 1.0};
    if (!(d.left_endpoint() >= 1.0))
        throw NotAvailable("lemma5_constants: need left endpoint >= 1");
    if (check_rho_leq_alpha(d).verdict != Verdict::Pass)
        throw NotAvailable("lemma5_constants: x f/(1-F) <= alpha does not hold");
    return {2.0 * special::tgamma(1.0 + 1.0 / a), d.left_endpoint(), std::pow(slowly_varying_S_F(d, 1e8), 1.0 / a)};
}

/// The bound of the lemma minus the tracked ratio (negative = violation).
/// lambda is underlined first.
inline double check_lemma5_bounds(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                                  const Lemma5Constants& c, const QuadratureConfig& cfg = {})
{
    const auto gaps = underline(lambda);
    const double a = d.tail_index();
    const double sigma = stable_rank(gaps, i);
    const bool frechet = d.family() == Family::Frechet && d.wrapper() == Wrapper::None;
    double bound = frechet ? c.m / std::pow(sigma, 1.0 / a) : (c.m / c.A_l) * std::pow(sigma, -1.0 / a);
    if (gaps[i] > 0.0) {
        const double inv = frechet ? a / ((a + 1.0) * gaps[i])
                                   : (a / (a + 1.0)) * std::numbers::e * c.A_u / (c.A_l * gaps[i]);
        bound = std::min(bound, inv);
    }
    return bound - lemma_ratio(d, gaps, i, cfg);
}

struct ProbeResult {
    double mean = 0.0;
    double std_error = 0.0;
    long long capped = 0; // reps that hit the cap, excluded from the mean
};

/// Repeats the resampling loop conditioned on arm i having been played.
/// Meant for phi_i > 1e-6; smaller values make reps very long.
template <class URBG>
ProbeResult resampling_unbiasedness_probe(const DistributionSpec& d, std::span<const double> lambda, std::size_t i,
                                          long long reps, URBG& gen, long long cap = 1000000)
{
    const auto order = challenger_order(lambda);
    ProbeResult out;
    double mean = 0.0, m2 = 0.0;
    long long n = 0;
    for (long long r = 0; r < reps; ++r) {
        const auto c = geometric_count(d, lambda, order, i, cap, gen);
        if (c.capped) {
            ++out.capped;
            continue;
        }
        ++n;
        const double x = static_cast<double>(c.count);
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    out.mean = mean;
    out.std_error = n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0;
    return out;
}

/// Argmin frequencies of lambda - r over `draws` fresh perturbations.
template <class URBG>
std::vector<double> mc_selection_frequencies(const DistributionSpec& d, std::span<const double> lambda,
                                             long long draws, URBG& gen)
{
    std::vector<double> freq(lambda.size(), 0.0);
    std::vector<double> scratch;
    for (long long r = 0; r < draws; ++r)
        freq[perturbed_leader(d, lambda, gen, scratch)] += 1.0;
    for (double& f : freq)
        f /= static_cast<double>(draws);
    return freq;
}

} // namespace ftpl_lab
