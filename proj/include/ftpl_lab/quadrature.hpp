#pragma once

// Globally adaptive composite Gauss-Legendre quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftpl_lab {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    long max_panels = 1L << 20;

    void validate() const
    {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-4))
            throw std::invalid_argument("QuadratureConfig: rel_tol must lie in (0, 1e-4]");
        if (max_panels < 64)
            throw std::invalid_argument("QuadratureConfig: max_panels must be >= 64");
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    long panels = 0;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved abs error " + std::to_string(achieved) + ")")
        , achieved_(achieved)
    {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

namespace detail {

template <int N>
struct GaussLegendre {
    std::array<double, N> nodes{};
    std::array<double, N> weights{};

    GaussLegendre()
    {
        for (int i = 0; i < N; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16)
                    break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre<15>& gl15()
{
    static const GaussLegendre<15> rule;
    return rule;
}

template <class F>
double gl15_panel(F& f, double a, double b)
{
    const auto& rule = gl15();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

struct Panel {
    double a, b;
    double value; // sum of the two half-panel estimates
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel make_panel(F& f, double a, double b)
{
    const double whole = gl15_panel(f, a, b);
    const double m = 0.5 * (a + b);
    const double halves = gl15_panel(f, a, m) + gl15_panel(f, m, b);
    return {a, b, halves, std::fabs(halves - whole)};
}

} // namespace detail

/// Integrates f over [a, b], pre-split at the sorted `breaks` inside (a, b).
/// Panels are bisected worst-first until the summed error estimate is below
/// rel_tol * |integral| (or exactly zero).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                           std::vector<double> breaks = {})
{
    cfg.validate();
    QuadratureResult out;
    if (!(b > a))
        return out;

    std::vector<double> cuts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double c : breaks)
        if (c > cuts.back() && c < b)
            cuts.push_back(c);
    cuts.push_back(b);

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::make_panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    long panels = static_cast<long>(heap.size());

    auto converged = [&] { return err <= cfg.rel_tol * std::fabs(total) || err == 0.0; };
    int resum = 0;
    while (!converged()) {
        if (panels >= cfg.max_panels)
            throw QuadratureError("quadrature did not converge within max_panels", err);
        const auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            // interval collapsed to adjacent doubles; accept as is
            heap.push({worst.a, worst.b, worst.value, 0.0});
            err -= worst.error;
            continue;
        }
        auto left = detail::make_panel(f, worst.a, m);
        auto right = detail::make_panel(f, m, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
        if (++resum == 256) {
            // refresh the running sums to stop drift from the incremental updates
            resum = 0;
            auto copy = heap;
            total = err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }

    // final summation in interval order for determinism
    std::vector<detail::Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (const auto& p : all) {
        out.value += p.value;
        out.error += p.error;
    }
    out.panels = panels;
    return out;
}

} // namespace ftpl_lab
