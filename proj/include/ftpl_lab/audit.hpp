#pragma once

// Numeric verification of the five regularity assumptions a perturbation
// law must satisfy, plus the estimates of the constants (rho_1, rho_2, M,
// m, A_l, A_u) that enter the regret bounds.
//
// Every check evaluates the law on a log-spaced probe grid reaching 1e8
// ("grid infinity"); limits are read off at 1e8 and confirmed against the
// value at 1e7.

#include "distributions.hpp"
#include "random.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ftpl_lab {

enum class Verdict { Pass, Fail, PassAfterTruncShift, NotApplicable };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::PassAfterTruncShift: return "pass_after_trunc_shift";
    case Verdict::NotApplicable: return "not_applicable";
    }
    return "unknown";
}

/// Matrix glyphs: pass, fail, pass after truncation and shift, not applicable.
inline std::string glyph(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "✓";
    case Verdict::Fail: return "✗";
    case Verdict::PassAfterTruncShift: return "✗(*)";
    case Verdict::NotApplicable: return "-";
    }
    return "?";
}

struct AuditConfig {
    int grid_points = 4096;
    double grid_min = 1e-3;
    double grid_max = 1e8;
    double mono_tol = 1e-9;         // relative slack on monotonicity steps
    double limit_tol = 1e-2;        // agreement of limits at 1e7 vs 1e8
    double growth_slope_tol = 0.05; // log-log slope that counts as blow-up
    double rho_tol = 1e-9;          // slack on x f / (1 - F) <= alpha
    long long mc_reps = 100000;
    int k_max_exp = 16; // block sizes k = 2^1 .. 2^k_max_exp
    std::uint64_t seed = 0x5eed;
    bool family_sweep = true;
};

struct CheckResult {
    Verdict verdict = Verdict::Pass;
    std::optional<double> witness; // x where the property is violated
    std::string note;
    std::map<std::string, double> values;
};

struct TailConstants {
    std::optional<double> rho1_hat;
    std::optional<double> rho2_hat;
    std::optional<double> M_hat;
    std::optional<double> m_hat;
    std::optional<double> A_l_hat;
    std::optional<double> A_u_hat;
};

// ---------------------------------------------------------------------------
// probe grid

/// 4096 (by default) log-spaced points on [max(nu, 1e-3)(1 + 1e-9), 1e8].
/// Laws supported on the whole line get the mirrored negative half and 0.
inline std::vector<double> probe_grid(const DistributionSpec& d, const AuditConfig& cfg)
{
    const double nu = d.left_endpoint();
    auto logspace = [](double lo, double hi, int n) {
        std::vector<double> g(n);
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < n; ++i)
            g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
        g.front() = lo;
        g.back() = hi;
        return g;
    };
    if (std::isfinite(nu))
        return logspace(std::max(nu, cfg.grid_min) * (1.0 + 1e-9), cfg.grid_max, cfg.grid_points);
    const int half = cfg.grid_points / 2;
    auto pos = logspace(cfg.grid_min, cfg.grid_max, half);
    std::vector<double> g;
    g.reserve(2 * half + 1);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it)
        g.push_back(-*it);
    g.push_back(0.0);
    g.insert(g.end(), pos.begin(), pos.end());
    return g;
}

namespace detail {

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// OLS slope of log y against log x over grid points with x in [lo, hi].
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& log_ys, double lo,
                           double hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < lo || xs[i] > hi || !(xs[i] > 0.0))
            continue;
        const double lx = std::log(xs[i]);
        sx += lx;
        sy += log_ys[i];
        sxx += lx * lx;
        sxy += lx * log_ys[i];
        ++n;
    }
    if (n < 2)
        return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Smallest index z such that seq is nonincreasing (within tol) from z on.
inline std::size_t nonincreasing_suffix(const std::vector<double>& seq, double tol)
{
    std::size_t z = seq.size() - 1;
    while (z > 0 && seq[z] <= seq[z - 1] + tol)
        --z;
    return z;
}

} // namespace detail

// ---------------------------------------------------------------------------
// individual checks

/// Assumption 1: the density is eventually nonincreasing.
inline CheckResult check_density_decreasing(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    const auto grid = probe_grid(d, cfg);
    std::vector<double> lp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        lp[i] = log_pdf(d, grid[i]);
    CheckResult r;
    const std::size_t z = detail::nonincreasing_suffix(lp, cfg.mono_tol);
    const double z0 = z == 0 ? d.left_endpoint() : grid[z];
    r.values["z0_hat"] = z0;
    if (grid[z] > cfg.grid_max / 10.0) {
        r.verdict = Verdict::Fail;
        r.witness = grid[z - 1];
        r.note = "density still increasing in the last decade of the grid";
    } else {
        r.note = "density nonincreasing from z0 = " + detail::fmt(z0);
    }
    return r;
}

/// Assumption 2: support on [nu, inf) with nu >= 0 and bounded hazard.
/// "Bounded" means finite everywhere on the grid with no power-law growth
/// toward either end of it.
inline CheckResult check_hazard_bounded(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    CheckResult r;
    const auto grid = probe_grid(d, cfg);
    const double nu = d.left_endpoint();
    if (!(nu >= 0.0)) {
        r.verdict = Verdict::Fail;
        r.witness = grid.front();
        r.note = "support extends below 0 (left endpoint " + detail::fmt(nu) + ")";
        return r;
    }
    std::vector<double> log_h(grid.size());
    double rho_sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = sf(d, grid[i]);
        log_h[i] = log_pdf(d, grid[i]) - std::log(s);
        if (!std::isfinite(log_h[i]) && log_h[i] > 0) {
            r.verdict = Verdict::Fail;
            r.witness = grid[i];
            r.note = "hazard is not finite";
            return r;
        }
        rho_sup = std::max(rho_sup, grid[i] * std::exp(log_h[i]));
    }
    r.values["rho1_hat"] = rho_sup;
    const double lo = grid.front();
    if (lo > nu * (1.0 + 1e-6) || nu == 0.0) {
        // grid does not touch the endpoint: look for blow-up approaching it
        const double slope = detail::loglog_slope(grid, log_h, lo, lo * 10.0);
        r.values["left_slope"] = slope;
        if (slope < -cfg.growth_slope_tol) {
            r.verdict = Verdict::Fail;
            r.witness = lo;
            r.note = "hazard grows like x^" + detail::fmt(slope) + " toward the left endpoint";
            return r;
        }
    }
    const double hi = grid.back();
    const double right = detail::loglog_slope(grid, log_h, hi / 10.0, hi);
    r.values["right_slope"] = right;
    if (right > cfg.growth_slope_tol) {
        r.verdict = Verdict::Fail;
        r.witness = hi;
        r.note = "hazard grows in the last decade of the grid";
        return r;
    }
    r.note = "hazard bounded on the grid";
    return r;
}

/// Assumption 3 through the sufficient condition 0 < liminf S_F <= limsup S_F < inf,
/// with Monte-Carlo estimates of M, m and the extremes of a_k / k^{1/alpha}.
inline CheckResult check_block_constants(const DistributionSpec& d, const AuditConfig& cfg = {},
                                         bool estimate_constants = true)
{
    CheckResult r;
    const double nu = d.left_endpoint();
    if (!(nu >= 0.0)) {
        r.verdict = Verdict::Fail;
        r.witness = 0.0;
        r.note = "S_F undefined for x <= 0 and the block maximum has positive density at 0, "
                 "so E[a_k / max] diverges";
        return r;
    }
    const auto grid = probe_grid(d, cfg);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : grid) {
        if (x < cfg.grid_max / 10.0)
            continue;
        const double s = slowly_varying_S_F(d, x);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double s8 = slowly_varying_S_F(d, cfg.grid_max);
    const double s7 = slowly_varying_S_F(d, cfg.grid_max / 10.0);
    r.values["S_F_liminf_hat"] = lo;
    r.values["S_F_limsup_hat"] = hi;
    if (!(lo > 0.0) || !std::isfinite(hi)) {
        r.verdict = Verdict::Fail;
        r.witness = cfg.grid_max;
        r.note = "S_F degenerates at grid infinity";
        return r;
    }
    if (std::fabs(s8 - s7) > cfg.limit_tol * s8) {
        r.verdict = Verdict::Fail;
        r.witness = cfg.grid_max;
        r.note = "S_F has not settled: S_F(1e7) = " + detail::fmt(s7) + ", S_F(1e8) = " + detail::fmt(s8);
        return r;
    }
    r.note = "S_F bounded away from 0 and infinity in the tail";
    if (!estimate_constants)
        return r;

    const double alpha = d.tail_index();
    double A_l = std::numeric_limits<double>::infinity(), A_u = 0.0;
    double M = 0.0, m = 0.0, M_se = 0.0, m_se = 0.0;
    for (int e = 1; e <= cfg.k_max_exp; ++e) {
        const long long k = 1LL << e;
        const double a_k = tail_quantile_a_k(d, static_cast<double>(k));
        const double ratio = a_k / std::pow(static_cast<double>(k), 1.0 / alpha);
        A_l = std::min(A_l, ratio);
        A_u = std::max(A_u, ratio);

        Rng gen(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        double s_up = 0, s_up2 = 0, s_dn = 0, s_dn2 = 0;
        for (long long rep = 0; rep < cfg.mc_reps; ++rep) {
            const double y = draw_block_max(d, k, gen) / a_k;
            s_up += y;
            s_up2 += y * y;
            s_dn += 1.0 / y;
            s_dn2 += 1.0 / (y * y);
        }
        const double n = static_cast<double>(cfg.mc_reps);
        const double mu_up = s_up / n, mu_dn = s_dn / n;
        if (mu_up > M) {
            M = mu_up;
            M_se = std::sqrt(std::max(0.0, s_up2 / n - mu_up * mu_up) / n);
        }
        if (mu_dn > m) {
            m = mu_dn;
            m_se = std::sqrt(std::max(0.0, s_dn2 / n - mu_dn * mu_dn) / n);
        }
    }
    r.values["A_l_hat"] = A_l;
    r.values["A_u_hat"] = A_u;
    r.values["m_hat"] = m;
    r.values["m_stderr"] = m_se;
    if (alpha > 1.0) {
        r.values["M_hat"] = M;
        r.values["M_stderr"] = M_se;
    } else {
        r.note += "; M check not applicable for tail index <= 1 (infinite Frechet mean)";
    }
    return r;
}

/// -x f'(x) / f(x) by central differences of log f, relative step 1e-4.
inline double derivative_ratio_at(const DistributionSpec& d, double x)
{
    if (x == 0.0)
        return 0.0;
    const double h = 1e-4 * std::fabs(x);
    return -x * (log_pdf(d, x + h) - log_pdf(d, x - h)) / (2.0 * h);
}

/// Assumption 4: -x f'/f -> alpha + 1 and stays bounded.
inline CheckResult check_derivative_ratio(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    CheckResult r;
    const auto grid = probe_grid(d, cfg);
    const double nu = d.left_endpoint();
    double sup = -std::numeric_limits<double>::infinity();
    for (double x : grid) {
        if (std::isfinite(nu) && !(x - 1e-4 * std::fabs(x) > nu))
            continue;
        const double v = derivative_ratio_at(d, x);
        if (std::isnan(v) || (std::isinf(v) && v > 0)) {
            r.verdict = Verdict::Fail;
            r.witness = x;
            r.note = "-x f'/f is not finite";
            return r;
        }
        sup = std::max(sup, v);
    }
    const double target = d.tail_index() + 1.0;
    const double v8 = derivative_ratio_at(d, cfg.grid_max);
    const double v7 = derivative_ratio_at(d, cfg.grid_max / 10.0);
    r.values["rho2_hat"] = sup;
    r.values["limit_hat"] = v8;
    if (std::fabs(v8 - target) > cfg.limit_tol || std::fabs(v7 - v8) > cfg.limit_tol) {
        r.verdict = Verdict::Fail;
        r.witness = cfg.grid_max;
        r.note = "-x f'/f at grid infinity is " + detail::fmt(v8) + ", expected " + detail::fmt(target);
        return r;
    }
    r.note = "-x f'/f -> " + detail::fmt(v8);
    return r;
}

/// Assumption 5: f / F nonincreasing on the whole support. Also reports the
/// smallest z1 beyond which it is nonincreasing.
inline CheckResult check_f_over_F_decreasing(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    CheckResult r;
    const auto grid = probe_grid(d, cfg);
    std::vector<double> lr(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        lr[i] = log_pdf(d, grid[i]) - log_cdf(d, grid[i]);
    const std::size_t z = detail::nonincreasing_suffix(lr, cfg.mono_tol);
    r.values["z1_hat"] = z == 0 ? d.left_endpoint() : grid[z];
    if (z > 0) {
        r.verdict = Verdict::Fail;
        r.witness = grid[z];
        r.note = "f/F increases up to x = " + detail::fmt(grid[z]);
        return r;
    }
    r.note = "f/F nonincreasing on the grid";
    return r;
}

/// x f(x) / (1 - F(x)) <= alpha on the grid; on success S_F must be
/// nondecreasing there as well.
inline CheckResult check_rho_leq_alpha(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    CheckResult r;
    const auto grid = probe_grid(d, cfg);
    const double alpha = d.tail_index();
    double sup = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    for (double x : grid) {
        if (!(x > 0.0))
            continue;
        const double rho = x * std::exp(log_pdf(d, x)) / sf(d, x);
        if (rho > sup) {
            sup = rho;
            arg = x;
        }
    }
    r.values["rho_sup"] = sup;
    if (sup > alpha + cfg.rho_tol) {
        r.verdict = Verdict::Fail;
        r.witness = arg;
        r.note = "x f/(1-F) reaches " + detail::fmt(sup) + " > alpha";
        return r;
    }
    double prev = 0.0;
    for (double x : grid) {
        if (!(x > 0.0))
            continue;
        const double s = slowly_varying_S_F(d, x);
        if (s < prev * (1.0 - cfg.mono_tol)) {
            r.verdict = Verdict::Fail;
            r.witness = x;
            r.note = "S_F decreases although x f/(1-F) <= alpha";
            return r;
        }
        prev = s;
    }
    r.note = "x f/(1-F) <= alpha; S_F nondecreasing";
    return r;
}

// ---------------------------------------------------------------------------
// full audit

/// Parameter points probed alongside the audited law when verdicts are
/// meant to hold for the whole family.
inline std::vector<DistributionSpec> family_sweep(const DistributionSpec& d)
{
    std::vector<DistributionSpec> out;
    switch (d.family()) {
    case Family::Frechet:
        for (double a : {1.5, 2.0, 3.0, 5.0})
            out.push_back(DistributionSpec::frechet(a));
        break;
    case Family::Pareto:
        for (double a : {1.5, 2.0, 3.0, 5.0})
            out.push_back(DistributionSpec::pareto(a));
        break;
    case Family::GeneralizedPareto:
        for (double a : {1.5, 2.0, 3.0})
            for (double b : {0.5, 1.0, 2.0})
                out.push_back(DistributionSpec::generalized_pareto(a, b));
        break;
    case Family::StudentT:
        for (double n : {2.0, 3.0, 5.0})
            out.push_back(DistributionSpec::student_t(n));
        break;
    case Family::SnedecorF:
        for (double m : {1.0, 2.0, 4.0})
            for (double n : {3.0, 4.0, 8.0})
                out.push_back(DistributionSpec::snedecor_f(m, n));
        break;
    }
    if (d.wrapper() == Wrapper::TruncShift)
        for (auto& s : out)
            s = s.trunc_shift();
    std::erase_if(out, [&](const DistributionSpec& s) { return s == d; });
    return out;
}

inline constexpr std::array<const char*, 5> assumption_names = {
    "density_decreasing", "hazard_bounded", "block_constants", "derivative_ratio", "f_over_F_decreasing"};

struct AssumptionOutcome {
    Verdict verdict = Verdict::Pass;
    CheckResult primary;                    // on the audited law
    std::optional<CheckResult> trunc_shift; // on its TruncShift version, when needed
    std::string sweep_note;
};

struct AuditReport {
    DistributionSpec spec;
    std::array<AssumptionOutcome, 5> assumptions;
    CheckResult rho_leq_alpha;
    TailConstants constants;
    std::vector<double> probe_grid;
    AuditConfig config;
    std::vector<std::string> notes;

    std::array<Verdict, 5> verdicts() const
    {
        std::array<Verdict, 5> v{};
        for (int i = 0; i < 5; ++i)
            v[i] = assumptions[i].verdict;
        return v;
    }
};

namespace detail {

inline CheckResult run_check(int which, const DistributionSpec& d, const AuditConfig& cfg, bool with_constants)
{
    switch (which) {
    case 0: return check_density_decreasing(d, cfg);
    case 1: return check_hazard_bounded(d, cfg);
    case 2: return check_block_constants(d, cfg, with_constants);
    case 3: return check_derivative_ratio(d, cfg);
    default: return check_f_over_F_decreasing(d, cfg);
    }
}

// Verdict for `d` alone or, with the sweep enabled, for every family member;
// returns the first failing member's label in `who`.
inline bool passes_uniformly(int which, const DistributionSpec& d, const AuditConfig& cfg, std::string& who,
                             CheckResult& witness)
{
    if (!cfg.family_sweep)
        return true;
    for (const auto& s : family_sweep(d)) {
        auto r = run_check(which, s, cfg, false);
        if (r.verdict == Verdict::Fail) {
            who = s.label();
            witness = r;
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Runs all checks on the law and, for the failing ones, on its TruncShift
/// version. A cell reads PassAfterTruncShift when only the truncated law
/// passes. With cfg.family_sweep the verdicts must hold for the family's
/// sweep parameters too, mirroring the parameter-free reading of the table.
inline AuditReport audit(const DistributionSpec& d, const AuditConfig& cfg = {})
{
    AuditReport rep{d, {}, {}, {}, probe_grid(d, cfg), cfg, {}};
    const DistributionSpec truncated = d.trunc_shift();

    std::array<std::optional<CheckResult>, 5> passing_law_result;
    std::array<bool, 5> from_trunc{};
    for (int a = 0; a < 5; ++a) {
        auto& out = rep.assumptions[a];
        out.primary = detail::run_check(a, d, cfg, a == 2);
        std::string who;
        CheckResult sweep_fail;
        bool ok = out.primary.verdict != Verdict::Fail;
        if (ok && !detail::passes_uniformly(a, d, cfg, who, sweep_fail)) {
            ok = false;
            out.sweep_note = "fails for family member " + who + ": " + sweep_fail.note + " (x = " +
                             detail::fmt(sweep_fail.witness.value_or(NAN)) + ")";
            out.primary.verdict = Verdict::Fail;
            out.primary.witness = sweep_fail.witness;
            out.primary.note += "; " + out.sweep_note;
        }
        if (ok) {
            out.verdict = Verdict::Pass;
            passing_law_result[a] = out.primary;
            continue;
        }
        if (d.wrapper() == Wrapper::TruncShift) {
            out.verdict = Verdict::Fail;
            continue;
        }
        auto tr = detail::run_check(a, truncated, cfg, a == 2);
        bool tr_ok = tr.verdict != Verdict::Fail;
        if (tr_ok && !detail::passes_uniformly(a, truncated, cfg, who, sweep_fail)) {
            tr_ok = false;
            tr.verdict = Verdict::Fail;
            tr.witness = sweep_fail.witness;
            tr.note += "; fails for family member " + who;
        }
        out.trunc_shift = tr;
        out.verdict = tr_ok ? Verdict::PassAfterTruncShift : Verdict::Fail;
        if (tr_ok) {
            passing_law_result[a] = tr;
            from_trunc[a] = true;
        }
    }

    auto value = [&](int a, const char* key) -> std::optional<double> {
        if (!passing_law_result[a])
            return std::nullopt;
        const auto& vals = passing_law_result[a]->values;
        auto it = vals.find(key);
        if (it == vals.end())
            return std::nullopt;
        return it->second;
    };
    rep.constants.rho1_hat = value(1, "rho1_hat");
    rep.constants.rho2_hat = value(3, "rho2_hat");
    rep.constants.M_hat = value(2, "M_hat");
    rep.constants.m_hat = value(2, "m_hat");
    rep.constants.A_l_hat = value(2, "A_l_hat");
    rep.constants.A_u_hat = value(2, "A_u_hat");
    if (from_trunc[2])
        rep.notes.push_back("block constants estimated on the TruncShift law");

    const bool use_trunc = from_trunc[1] || from_trunc[2];
    rep.rho_leq_alpha = check_rho_leq_alpha(use_trunc ? truncated : d, cfg);
    const auto& z1 = rep.assumptions[4].primary.values;
    if (auto it = z1.find("z1_hat"); it != z1.end())
        rep.notes.push_back("f/F nonincreasing beyond z1 = " + detail::fmt(it->second));
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json check_to_json(const CheckResult& c)
{
    nlohmann::json j{{"verdict", to_string(c.verdict)}, {"note", c.note}, {"values", c.values}};
    j["witness"] = c.witness ? nlohmann::json(*c.witness) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json report_to_json(const AuditReport& r)
{
    nlohmann::json j;
    j["spec"] = r.spec;
    nlohmann::json checks = nlohmann::json::array();
    nlohmann::json verdicts = nlohmann::json::object();
    for (int a = 0; a < 5; ++a) {
        const auto& o = r.assumptions[a];
        nlohmann::json c{{"assumption", a + 1},
                         {"name", assumption_names[a]},
                         {"verdict", to_string(o.verdict)},
                         {"primary", check_to_json(o.primary)}};
        if (o.trunc_shift)
            c["trunc_shift"] = check_to_json(*o.trunc_shift);
        checks.push_back(c);
        verdicts[std::string("assumption") + std::to_string(a + 1)] = to_string(o.verdict);
    }
    j["verdicts"] = verdicts;
    j["checks"] = checks;
    j["rho_leq_alpha"] = check_to_json(r.rho_leq_alpha);
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j["constants"] = {{"rho1_hat", opt(r.constants.rho1_hat)}, {"rho2_hat", opt(r.constants.rho2_hat)},
                      {"M_hat", opt(r.constants.M_hat)},       {"m_hat", opt(r.constants.m_hat)},
                      {"A_l_hat", opt(r.constants.A_l_hat)},   {"A_u_hat", opt(r.constants.A_u_hat)}};
    j["probe_grid"] = {{"points", r.probe_grid.size()},
                       {"min", r.probe_grid.front()},
                       {"max", r.probe_grid.back()},
                       {"spacing", "log"},
                       {"mirrored", r.probe_grid.front() < 0.0}};
    j["tolerance"] = r.config.mono_tol;
    j["family_sweep"] = r.config.family_sweep;
    j["seed"] = r.config.seed;
    j["notes"] = r.notes;
    return j;
}

/// The five laws of the verification table with their reference parameters.
inline std::vector<DistributionSpec> table2_laws()
{
    return {DistributionSpec::frechet(2.0), DistributionSpec::pareto(2.0),
            DistributionSpec::generalized_pareto(2.0, 1.0), DistributionSpec::student_t(3.0),
            DistributionSpec::snedecor_f(2.0, 4.0)};
}

/// Assumption-by-law matrix of glyphs, one row per assumption.
inline std::string format_table2(const std::vector<AuditReport>& reports)
{
    std::ostringstream os;
    os << "assumption";
    for (const auto& r : reports)
        os << '\t' << r.spec.label();
    os << '\n';
    for (int a = 0; a < 5; ++a) {
        os << "A" << (a + 1);
        for (const auto& r : reports)
            os << '\t' << glyph(r.assumptions[a].verdict);
        os << '\n';
    }
    return os.str();
}

} // namespace ftpl_lab
