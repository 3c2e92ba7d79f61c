#include <ftpl_lab/harness.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace ftpl_lab;

namespace {

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST(Stochastic, EmpiricalMeans)
{
    Environment env(EnvironmentConfig::stochastic({0.1, 0.5}), 3);
    const long long n = 100000;
    double s0 = 0, s1 = 0;
    for (long long t = 1; t <= n; ++t) {
        const auto l = env.loss_vector(t);
        s0 += l[0];
        s1 += l[1];
    }
    EXPECT_NEAR(s0 / n, 0.1, 3 * std::sqrt(0.09 / n));
    EXPECT_NEAR(s1 / n, 0.5, 3 * std::sqrt(0.25 / n));
}

TEST(Stochastic, Validation)
{
    EXPECT_THROW(EnvironmentConfig::stochastic({0.2, 0.2}), SpecError);
    EXPECT_THROW(EnvironmentConfig::stochastic({0.2, 1.2}), SpecError);
    EXPECT_THROW(EnvironmentConfig::stochastic({0.2}), SpecError);
    EXPECT_THROW(Environment(EnvironmentConfig::stochastic({0.2, 0.4}), 1).loss_vector(0), std::invalid_argument);
}

TEST(Constrained, GapPreservedEveryRound)
{
    const auto cfg = EnvironmentConfig::constrained(8, 0.25, 1.6, 3);
    Environment env(cfg, 1);
    std::set<long long> phases_seen;
    for (long long t = 1; t <= 5000; ++t) {
        const auto m = env.mean_vector(t);
        phases_seen.insert(env.phase_of(t) % 2);
        for (int i = 0; i < 8; ++i) {
            EXPECT_GE(m[i], 0.0);
            EXPECT_LE(m[i], 1.0);
            if (i != 3) {
                EXPECT_DOUBLE_EQ(m[i] - m[3], 0.25);
            }
        }
    }
    EXPECT_EQ(phases_seen.size(), 2u);
}

TEST(Constrained, PhaseLengths)
{
    Environment env(EnvironmentConfig::constrained(2, 0.25), 1);
    // ceil(1.6^p): 1, 2, 3, 5, 7
    const std::vector<long long> ends{1, 3, 6, 11, 18};
    for (std::size_t p = 0; p < ends.size(); ++p) {
        EXPECT_EQ(env.phase_of(ends[p]), static_cast<long long>(p));
        EXPECT_EQ(env.phase_of(ends[p] + 1), static_cast<long long>(p + 1));
    }
    EXPECT_DOUBLE_EQ(env.mean_vector(1)[0], 0.375);
    EXPECT_DOUBLE_EQ(env.mean_vector(2)[0], 0.0);
    EXPECT_DOUBLE_EQ(env.mean_vector(2)[1], 0.25);
}

TEST(Constrained, EmittedLossesAreBinary)
{
    Environment env(EnvironmentConfig::constrained(4, 0.5), 9);
    for (long long t = 1; t <= 2000; ++t)
        for (double x : env.loss_vector(t))
            EXPECT_TRUE(x == 0.0 || x == 1.0);
}

TEST(Adversarial, RowsVerbatimAndExhaustion)
{
    const auto path = write_temp("ftpl_lab_losses.csv", "0,1,0.5\n0.25,0.75,1\n");
    const auto m = read_loss_csv(path);
    Environment env(EnvironmentConfig::adversarial(m, path), 0);
    EXPECT_EQ(env.loss_vector(1), (std::vector<double>{0, 1, 0.5}));
    EXPECT_EQ(env.loss_vector(2), (std::vector<double>{0.25, 0.75, 1}));
    EXPECT_THROW(env.loss_vector(3), std::out_of_range);
}

TEST(Adversarial, BadFiles)
{
    EXPECT_THROW(read_loss_csv(write_temp("ftpl_lab_ragged.csv", "0,1\n0,1,1\n")), SpecError);
    EXPECT_THROW(read_loss_csv(write_temp("ftpl_lab_range.csv", "0,1.5\n")), SpecError);
    EXPECT_THROW(read_loss_csv(write_temp("ftpl_lab_text.csv", "0,x\n")), SpecError);
    EXPECT_THROW(read_loss_csv("/nonexistent/ftpl_lab.csv"), std::runtime_error);
}

TEST(EnvironmentJson, ParsesAllKinds)
{
    const auto s = environment_from_json(nlohmann::json::parse(R"({"kind":"stochastic","means":[0.5,0.75]})"));
    EXPECT_EQ(s.K, 2);
    const auto c = environment_from_json(
        nlohmann::json::parse(R"({"kind":"stoch_constrained","K":8,"delta":0.25,"phase_growth":1.6})"));
    EXPECT_EQ(c.kind, EnvKind::StochConstrainedAdversarial);
    EXPECT_EQ(c.gaps(), (std::vector<double>{0, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25, 0.25}));
    const auto dir = std::filesystem::temp_directory_path();
    write_temp("ftpl_lab_rel.csv", "0,1\n1,0\n");
    const auto a =
        environment_from_json(nlohmann::json::parse(R"({"kind":"adversarial","file":"ftpl_lab_rel.csv"})"), dir);
    EXPECT_EQ(a.matrix->size(), 2u);
    EXPECT_THROW(environment_from_json(nlohmann::json::parse(R"({"kind":"markov"})")), SpecError);
    EXPECT_THROW(environment_from_json(nlohmann::json::parse(R"({"kind":"stochastic"})")), SpecError);
}

TEST(PseudoRegret, AlwaysOptimalIsZero)
{
    const auto env = EnvironmentConfig::stochastic({0.3, 0.1, 0.6});
    Trace tr;
    for (int t = 0; t < 100; ++t) {
        tr.arms.push_back(1);
        tr.gap_increments.push_back(env.gaps()[1]);
    }
    for (double r : pseudo_regret(tr, env))
        EXPECT_EQ(r, 0.0);
}

TEST(PseudoRegret, UniformPolicyExact)
{
    ExperimentConfig cfg;
    cfg.env = EnvironmentConfig::stochastic({0.4, 0.6});
    cfg.horizon = 1000;
    PolicyConfig u;
    u.kind = PolicyKind::Uniform;
    cfg.policies = {u};
    const auto tr = run_trial(cfg, u, 0);
    EXPECT_NEAR(pseudo_regret(tr, cfg.env).back(), 100.0, 1e-9);
}

TEST(PseudoRegret, AdversarialBestFixedArm)
{
    const auto env = EnvironmentConfig::adversarial({{1, 0}, {1, 0}, {0, 1}});
    Trace tr;
    tr.arms = {0, 1, 1};
    const auto r = pseudo_regret(tr, env);
    // incurred 1, 1, 2; best fixed arm cumulative 0, 0, 1
    EXPECT_EQ(r, (std::vector<double>{1, 1, 1}));
}

TEST(PseudoRegret, FtplCurveNonnegativeNondecreasing)
{
    ExperimentConfig cfg;
    cfg.env = EnvironmentConfig::stochastic({0.5, 0.75});
    cfg.horizon = 5000;
    PolicyConfig p;
    p.spec = DistributionSpec::frechet(2.0);
    cfg.policies = {p};
    const auto r = pseudo_regret(run_trial(cfg, p, 3), cfg.env);
    double prev = 0.0;
    for (double x : r) {
        EXPECT_GE(x, prev);
        prev = x;
    }
}

TEST(Environment, Deterministic)
{
    Environment a(EnvironmentConfig::constrained(4, 0.25), 77), b(EnvironmentConfig::constrained(4, 0.25), 77);
    for (long long t = 1; t <= 500; ++t)
        ASSERT_EQ(a.loss_vector(t), b.loss_vector(t));
}
