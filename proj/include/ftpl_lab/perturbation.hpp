#pragma once

// Perturbed-leader primitives shared by the policies and the oracle's
// Monte-Carlo probes. Throughout, `lambda` is the scaled loss vector
// eta * L (divided by a_K when perturbations are denormalized), so that
// the played arm is argmin_i lambda_i - r_i.

#include "distributions.hpp"
#include "random.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace ftpl_lab {

/// argmin of v with the lowest index winning ties.
inline std::size_t argmin_lowest(std::span<const double> v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best])
            best = i;
    return best;
}

/// Fresh perturbation vector, then argmin of lambda - r.
template <class URBG>
std::size_t perturbed_leader(const DistributionSpec& d, std::span<const double> lambda, URBG& gen,
                             std::vector<double>& scratch)
{
    scratch.resize(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j)
        scratch[j] = lambda[j] - draw(d, gen);
    return argmin_lowest(scratch);
}

/// Arm indices sorted by (lambda, index); the strongest competitors first.
inline std::vector<std::size_t> challenger_order(std::span<const double> lambda)
{
    std::vector<std::size_t> order(lambda.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambda[a] < lambda[b]; });
    return order;
}

/// One Bernoulli(w_i) trial: does a fresh perturbation select arm i?
/// Competitors are drawn in `order` and drawing stops at the first one
/// that beats i. The outcome has the same law as a full redraw.
template <class URBG>
bool perturbation_selects(const DistributionSpec& d, std::span<const double> lambda,
                          std::span<const std::size_t> order, std::size_t i, URBG& gen)
{
    const double vi = lambda[i] - draw(d, gen);
    for (std::size_t j : order) {
        if (j == i)
            continue;
        const double vj = lambda[j] - draw(d, gen);
        if (vj < vi || (vj == vi && j < i))
            return false;
    }
    return true;
}

struct ResampleCount {
    long long count = 0;
    bool capped = false;
};

/// Geometric resampling: number of fresh perturbations until arm i is
/// selected again, stopping at `cap`.
template <class URBG>
ResampleCount geometric_count(const DistributionSpec& d, std::span<const double> lambda,
                              std::span<const std::size_t> order, std::size_t i, long long cap, URBG& gen)
{
    ResampleCount out;
    while (out.count < cap) {
        ++out.count;
        if (perturbation_selects(d, lambda, order, i, gen))
            return out;
    }
    out.capped = true;
    return out;
}

} // namespace ftpl_lab
