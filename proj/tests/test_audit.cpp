#include <ftpl_lab/audit.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace ftpl_lab;

namespace {

AuditConfig quick()
{
    AuditConfig c;
    c.mc_reps = 4000;
    c.k_max_exp = 8;
    return c;
}

double value(const CheckResult& r, const std::string& key) { return r.values.at(key); }

} // namespace

TEST(ProbeGrid, Layout)
{
    AuditConfig c;
    const auto g = probe_grid(DistributionSpec::pareto(2.0), c);
    ASSERT_EQ(g.size(), 4096u);
    EXPECT_DOUBLE_EQ(g.front(), 1.0 + 1e-9);
    EXPECT_DOUBLE_EQ(g.back(), 1e8);
    EXPECT_DOUBLE_EQ(probe_grid(DistributionSpec::frechet(2.0), c).front(), 1e-3 * (1 + 1e-9));
    const auto t = probe_grid(DistributionSpec::student_t(3.0), c);
    EXPECT_DOUBLE_EQ(t.front(), -1e8);
    EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
}

TEST(DensityDecreasing, Examples)
{
    const auto p = check_density_decreasing(DistributionSpec::pareto(2.0));
    EXPECT_EQ(p.verdict, Verdict::Pass);
    EXPECT_EQ(value(p, "z0_hat"), 1.0);
    const auto t = check_density_decreasing(DistributionSpec::student_t(3.0));
    EXPECT_EQ(t.verdict, Verdict::Pass);
    EXPECT_EQ(value(t, "z0_hat"), 0.0);
    const auto f = check_density_decreasing(DistributionSpec::frechet(2.0));
    EXPECT_EQ(f.verdict, Verdict::Pass);
    // mode (alpha/(1+alpha))^{1/alpha}; grid spacing is ~0.6% in log
    EXPECT_NEAR(value(f, "z0_hat"), std::sqrt(2.0 / 3.0), 0.01);
}

TEST(HazardBounded, Examples)
{
    const auto t = check_hazard_bounded(DistributionSpec::student_t(3.0));
    EXPECT_EQ(t.verdict, Verdict::Fail);
    ASSERT_TRUE(t.witness.has_value());
    EXPECT_LT(*t.witness, 0.0);
    EXPECT_EQ(check_hazard_bounded(DistributionSpec::student_t(3.0).trunc_shift()).verdict, Verdict::Pass);
    const auto p = check_hazard_bounded(DistributionSpec::pareto(2.0));
    EXPECT_EQ(p.verdict, Verdict::Pass);
    EXPECT_NEAR(value(p, "rho1_hat"), 2.0, 1e-12);
    // hazard of F(1, n) grows like x^{-1/2} at 0
    const auto f1 = check_hazard_bounded(DistributionSpec::snedecor_f(1.0, 4.0));
    EXPECT_EQ(f1.verdict, Verdict::Fail);
    EXPECT_TRUE(f1.witness.has_value());
}

TEST(HazardBounded, SupAtLeastTailIndex)
{
    for (const auto& d : table2_laws()) {
        const auto r = check_hazard_bounded(d.trunc_shift());
        EXPECT_GE(value(r, "rho1_hat"), d.tail_index() - 1e-2) << d.label();
    }
}

TEST(BlockConstants, Examples)
{
    const auto cfg = quick();
    EXPECT_EQ(check_block_constants(DistributionSpec::snedecor_f(2.0, 4.0), cfg).verdict, Verdict::Pass);
    const auto t = check_block_constants(DistributionSpec::student_t(3.0), cfg);
    EXPECT_EQ(t.verdict, Verdict::Fail);
    EXPECT_EQ(t.witness, 0.0);
    EXPECT_EQ(check_block_constants(DistributionSpec::student_t(3.0).trunc_shift(), cfg).verdict, Verdict::Pass);

    const auto f = check_block_constants(DistributionSpec::frechet(2.0), cfg);
    ASSERT_EQ(f.verdict, Verdict::Pass);
    EXPECT_LE(value(f, "m_hat"), std::tgamma(1.5) + 3 * value(f, "m_stderr"));
    // a_k / sqrt(k) = (k (-log(1 - 1/k)))^{-1/2}, smallest at k = 2, increasing to 1
    EXPECT_NEAR(value(f, "A_l_hat"), 1.0 / std::sqrt(2.0 * std::log(2.0)), 1e-10);
    EXPECT_LE(value(f, "A_u_hat"), 1.0);

    const auto p = check_block_constants(DistributionSpec::pareto(2.0), cfg);
    EXPECT_NEAR(value(p, "A_l_hat"), 1.0, 1e-9);
    EXPECT_NEAR(value(p, "A_u_hat"), 1.0, 1e-9);
}

TEST(BlockConstants, MNotApplicableAtOrBelowIndexOne)
{
    auto cfg = quick();
    const auto r = check_block_constants(DistributionSpec::pareto(0.9), cfg);
    EXPECT_EQ(r.values.count("M_hat"), 0u);
    EXPECT_NE(r.note.find("not applicable"), std::string::npos);
}

TEST(DerivativeRatio, Examples)
{
    const auto f = check_derivative_ratio(DistributionSpec::frechet(2.0));
    EXPECT_EQ(f.verdict, Verdict::Pass);
    EXPECT_NEAR(value(f, "limit_hat"), 3.0, 1e-6);
    EXPECT_NEAR(value(f, "rho2_hat"), 3.0, 1e-6);
    const auto p = check_derivative_ratio(DistributionSpec::pareto(2.0));
    EXPECT_NEAR(value(p, "rho2_hat"), 3.0, 1e-6);
    const auto t = check_derivative_ratio(DistributionSpec::student_t(3.0));
    EXPECT_EQ(t.verdict, Verdict::Pass);
    EXPECT_NEAR(value(t, "limit_hat"), 4.0, 1e-2);
}

TEST(FOverFDecreasing, Examples)
{
    const auto t = check_f_over_F_decreasing(DistributionSpec::student_t(3.0));
    EXPECT_EQ(t.verdict, Verdict::Fail);
    ASSERT_TRUE(t.witness.has_value());
    EXPECT_LT(*t.witness, 0.0);
    EXPECT_EQ(check_f_over_F_decreasing(DistributionSpec::student_t(3.0).trunc_shift()).verdict, Verdict::Pass);
    EXPECT_EQ(check_f_over_F_decreasing(DistributionSpec::snedecor_f(2.0, 4.0)).verdict, Verdict::Pass);
    EXPECT_EQ(check_f_over_F_decreasing(DistributionSpec::pareto(2.0)).verdict, Verdict::Pass);
}

TEST(RhoLeqAlpha, Examples)
{
    EXPECT_EQ(check_rho_leq_alpha(DistributionSpec::pareto(2.0)).verdict, Verdict::Pass);
    EXPECT_EQ(check_rho_leq_alpha(DistributionSpec::student_t(2.0).trunc_shift()).verdict, Verdict::Pass);
    EXPECT_EQ(check_rho_leq_alpha(DistributionSpec::frechet(2.0)).verdict, Verdict::Pass);
}

TEST(Audit, FailVerdictsCarryWitnesses)
{
    auto cfg = quick();
    for (const auto& d : table2_laws()) {
        const auto rep = audit(d, cfg);
        for (const auto& a : rep.assumptions) {
            if (a.primary.verdict == Verdict::Fail) {
                EXPECT_TRUE(a.primary.witness.has_value()) << d.label() << ": " << a.primary.note;
            }
            if (a.trunc_shift && a.trunc_shift->verdict == Verdict::Fail) {
                EXPECT_TRUE(a.trunc_shift->witness.has_value());
            }
        }
    }
}

TEST(Audit, StudentRow)
{
    const auto rep = audit(DistributionSpec::student_t(3.0), quick());
    const std::array<Verdict, 5> expect{Verdict::Pass, Verdict::PassAfterTruncShift, Verdict::PassAfterTruncShift,
                                        Verdict::Pass, Verdict::PassAfterTruncShift};
    EXPECT_EQ(rep.verdicts(), expect);
    EXPECT_TRUE(rep.constants.M_hat.has_value());
}

TEST(Audit, GeneralizedParetoAllPass)
{
    const auto rep = audit(DistributionSpec::generalized_pareto(2.0, 1.0), quick());
    for (auto v : rep.verdicts())
        EXPECT_EQ(v, Verdict::Pass);
}

TEST(Audit, SweepCanBeDisabled)
{
    auto cfg = quick();
    cfg.family_sweep = false;
    const auto rep = audit(DistributionSpec::snedecor_f(2.0, 4.0), cfg);
    EXPECT_EQ(rep.assumptions[1].verdict, Verdict::Pass);
    cfg.family_sweep = true;
    EXPECT_EQ(audit(DistributionSpec::snedecor_f(2.0, 4.0), cfg).assumptions[1].verdict,
              Verdict::PassAfterTruncShift);
}

TEST(Audit, ReportJson)
{
    const auto rep = audit(DistributionSpec::pareto(2.0), quick());
    const auto j = report_to_json(rep);
    EXPECT_EQ(j["verdicts"]["assumption1"], "pass");
    EXPECT_EQ(j["probe_grid"]["points"], 4096);
    EXPECT_EQ(j["checks"].size(), 5u);
    EXPECT_NEAR(j["constants"]["rho1_hat"].get<double>(), 2.0, 1e-12);
}
