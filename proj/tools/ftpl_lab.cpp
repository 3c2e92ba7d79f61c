// Command-line front end: dist, audit, oracle and run subcommands.
// Exit codes: 0 success, 2 invalid input/config, 3 runtime failure.

#include <ftpl_lab/audit.hpp>
#include <ftpl_lab/distributions.hpp>
#include <ftpl_lab/harness.hpp>
#include <ftpl_lab/oracle.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ftpl_lab;
using nlohmann::json;

namespace {

json load_json(const std::string& path_or_text)
{
    if (!path_or_text.empty() && path_or_text.front() == '{')
        return json::parse(path_or_text);
    std::ifstream in(path_or_text);
    if (!in)
        throw SpecError("cannot open '" + path_or_text + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SpecError("'" + path_or_text + "': " + e.what());
    }
}

DistributionSpec load_spec(const std::string& arg)
{
    try {
        return spec_from_json(load_json(arg));
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec: ") + e.what());
    }
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw SpecError("bad number '" + cell + "' in list '" + s + "'");
        }
    }
    if (out.empty())
        throw SpecError("empty list");
    return out;
}

void write_out(const json& j, const std::string& out)
{
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open '" + out + "' for writing");
    f << text;
}

// ---------------------------------------------------------------------------

struct DistArgs {
    std::string op, spec, out;
    double x = 1.0, p = 0.5;
    long long k = 2, count = 10, reps = 100000;
    std::uint64_t seed = 1;
    std::string grid = "0.5,1,2,4";
};

int run_dist(const DistArgs& a)
{
    const auto d = load_spec(a.spec);
    json r{{"spec", d}, {"op", a.op}};
    if (a.op == "cdf")
        r["value"] = cdf(d, a.x);
    else if (a.op == "sf")
        r["value"] = sf(d, a.x);
    else if (a.op == "pdf")
        r["value"] = pdf(d, a.x);
    else if (a.op == "quantile")
        r["value"] = quantile(d, a.p);
    else if (a.op == "sample") {
        Rng gen(a.seed);
        r["values"] = sample(d, gen, a.count);
    } else if (a.op == "a-k")
        r["value"] = tail_quantile_a_k(d, static_cast<double>(a.k));
    else if (a.op == "s-f")
        r["value"] = slowly_varying_S_F(d, a.x);
    else if (a.op == "von-mises")
        r["value"] = von_mises_ratio(d, a.x);
    else if (a.op == "blockmax") {
        try {
            r["closed_form"] = block_max_mean_closed(d, a.k);
        } catch (const NotAvailable&) {
            r["closed_form"] = nullptr;
        }
        Rng gen(a.seed);
        const auto mc = block_max_mean_mc(d, a.k, a.reps, gen);
        r["mc_estimate"] = mc.estimate;
        r["mc_stderr"] = mc.std_error;
    } else if (a.op == "fmda-gap") {
        const auto g = parse_list(a.grid);
        r["value"] = fmda_convergence_gap(d, static_cast<double>(a.k), g);
    } else
        throw SpecError("unknown dist op '" + a.op + "'");
    write_out(r, a.out);
    return 0;
}

struct AuditArgs {
    std::string spec, out;
    int grid_points = 4096;
    std::uint64_t seed = AuditConfig{}.seed;
    long long mc_reps = AuditConfig{}.mc_reps;
    bool table2 = false, no_sweep = false;
};

int run_audit(const AuditArgs& a)
{
    AuditConfig cfg;
    cfg.grid_points = a.grid_points;
    cfg.seed = a.seed;
    cfg.mc_reps = a.mc_reps;
    cfg.family_sweep = !a.no_sweep;
    if (cfg.grid_points < 16)
        throw SpecError("--grid-points must be >= 16");
    if (a.table2) {
        std::vector<AuditReport> reps;
        json all = json::array();
        for (const auto& d : table2_laws()) {
            reps.push_back(audit(d, cfg));
            all.push_back(report_to_json(reps.back()));
        }
        std::cout << format_table2(reps);
        if (!a.out.empty())
            write_out(all, a.out);
        return 0;
    }
    if (a.spec.empty())
        throw SpecError("audit needs --spec or --table2");
    write_out(report_to_json(audit(load_spec(a.spec), cfg)), a.out);
    return 0;
}

struct OracleArgs {
    std::string op, spec, gaps, out;
    std::size_t arm = 0, j = 1;
    double step = 0.5, alpha = 2.0, n = 3.0;
    long long reps = 100000;
    std::uint64_t seed = 1;
    double rel_tol = 1e-10;
};

int run_oracle(const OracleArgs& a)
{
    QuadratureConfig q;
    q.rel_tol = a.rel_tol;
    q.validate();
    const auto gaps = parse_list(a.gaps);
    json r{{"op", a.op}, {"gaps", gaps}};
    auto spec = [&] {
        auto d = load_spec(a.spec);
        r["spec"] = d;
        return d;
    };
    if (a.op == "phi") {
        const auto v = phi(spec(), gaps, q);
        r["values"] = v.values;
        r["tolerance_achieved"] = v.error;
    } else if (a.op == "integral-i") {
        const auto v = integral_I(gaps, a.arm, a.alpha, a.n, q);
        r["values"] = {v.value};
        r["tolerance_achieved"] = v.error;
    } else if (a.op == "integral-j") {
        const auto v = integral_J(spec(), gaps, a.arm, q);
        r["values"] = {v.value};
        r["tolerance_achieved"] = v.error;
    } else if (a.op == "check-lemma4") {
        r["values"] = {check_lemma4_monotonicity(spec(), gaps, a.arm, a.j, a.step, q)};
        r["tolerance_achieved"] = q.rel_tol;
    } else if (a.op == "check-lemma5") {
        const auto d = spec();
        r["values"] = {check_lemma5_bounds(d, gaps, a.arm, lemma5_constants(d), q)};
        r["tolerance_achieved"] = q.rel_tol;
    } else if (a.op == "resample") {
        Rng gen(a.seed);
        const auto p = resampling_unbiasedness_probe(spec(), gaps, a.arm, a.reps, gen);
        r["values"] = {p.mean};
        r["stderr"] = p.std_error;
        r["capped"] = p.capped;
    } else
        throw SpecError("unknown oracle op '" + a.op + "'");
    write_out(r, a.out);
    return 0;
}

struct RunArgs {
    std::string config, format = "csv", out;
    int threads = 0;
};

int run_run(const RunArgs& a)
{
    const auto j = load_json(a.config);
    const std::string base = std::filesystem::path(a.config).parent_path().string();
    const auto cfg = experiment_from_json(j, base);
    const int threads = a.threads > 0 ? a.threads : default_threads();
    const auto curves = run_experiment(cfg, threads);
    const auto fmt = a.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    const std::string out = !a.out.empty() ? a.out : cfg.output_path;
    if (out.empty() || out == "-")
        std::cout << (fmt == OutputFormat::Csv ? to_csv(curves) : to_json_text(curves));
    else
        emit(curves, out, fmt);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"FTPL bandit laboratory"};
    app.require_subcommand(1);

    DistArgs da;
    auto* dist = app.add_subcommand("dist", "distribution analytics");
    dist->add_option("op", da.op, "cdf | sf | pdf | quantile | sample | a-k | s-f | von-mises | blockmax | fmda-gap")
        ->required();
    dist->add_option("--spec", da.spec, "spec JSON file or inline JSON")->required();
    dist->add_option("--x", da.x);
    dist->add_option("--p", da.p);
    dist->add_option("--k", da.k);
    dist->add_option("--count", da.count);
    dist->add_option("--reps", da.reps);
    dist->add_option("--seed", da.seed);
    dist->add_option("--grid", da.grid, "comma-separated grid for fmda-gap");
    dist->add_option("--out", da.out);

    AuditArgs aa;
    auto* aud = app.add_subcommand("audit", "assumption audit");
    aud->add_option("--spec", aa.spec);
    aud->add_option("--grid-points", aa.grid_points);
    aud->add_option("--seed", aa.seed);
    aud->add_option("--mc-reps", aa.mc_reps);
    aud->add_flag("--table2", aa.table2, "audit the five reference laws and print the matrix");
    aud->add_flag("--no-sweep", aa.no_sweep, "judge only the given parameters");
    aud->add_option("--out", aa.out);

    OracleArgs oa;
    auto* ora = app.add_subcommand("oracle", "selection-probability oracle");
    ora->add_option("op", oa.op, "phi | integral-i | integral-j | check-lemma4 | check-lemma5 | resample")
        ->required();
    ora->add_option("--spec", oa.spec);
    ora->add_option("--gaps", oa.gaps)->required();
    ora->add_option("--arm", oa.arm);
    ora->add_option("--j", oa.j);
    ora->add_option("--step", oa.step);
    ora->add_option("--alpha", oa.alpha);
    ora->add_option("--n", oa.n);
    ora->add_option("--reps", oa.reps);
    ora->add_option("--seed", oa.seed);
    ora->add_option("--rel-tol", oa.rel_tol);
    ora->add_option("--out", oa.out);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", ra.config)->required();
    run->add_option("--threads", ra.threads, "worker threads (default: FTPL_LAB_THREADS or 1)");
    run->add_option("--format", ra.format)->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--out", ra.out, "output path (default: config 'output', else stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*dist)
            return run_dist(da);
        if (*aud)
            return run_audit(aa);
        if (*ora)
            return run_oracle(oa);
        if (*run)
            return run_run(ra);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
