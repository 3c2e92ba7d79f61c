#include <ftpl_lab/oracle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace ftpl_lab;

namespace {

const double kPhi0 = 5.0 - 6.0 * std::log(2.0);
const double kPhi1 = 6.0 * std::log(2.0) - 4.0;

std::vector<double> random_gaps(Rng& gen, int K, double hi)
{
    std::vector<double> g(K);
    for (double& x : g)
        x = hi * uniform_open(gen);
    g[gen() % K] = 0.0;
    return g;
}

} // namespace

TEST(Phi, EqualGapsAreUniform)
{
    for (const auto& d : {DistributionSpec::frechet(2.0), DistributionSpec::pareto(2.0),
                          DistributionSpec::student_t(3.0), DistributionSpec::snedecor_f(2.0, 4.0)}) {
        const auto p = phi(d, std::vector<double>(5, 0.0));
        for (double v : p.values)
            EXPECT_NEAR(v, 0.2, 1e-9) << d.label();
    }
}

TEST(Phi, ParetoTwoArmClosedForm)
{
    // phi_2 = int_1^inf 2 z^{-3} (1 - (z+1)^{-2}) dz by partial fractions
    const auto p = phi(DistributionSpec::pareto(2.0), std::vector<double>{0.0, 1.0});
    EXPECT_NEAR(p.values[0], kPhi0, 1e-10);
    EXPECT_NEAR(p.values[1], kPhi1, 1e-10);
}

TEST(Phi, SumsToOneAndPermutes)
{
    Rng gen(9);
    for (const auto& d : {DistributionSpec::frechet(2.0), DistributionSpec::pareto(3.0),
                          DistributionSpec::student_t(2.0).trunc_shift(), DistributionSpec::student_t(3.0)}) {
        for (int c = 0; c < 6; ++c) {
            const int K = 2 + c % 5;
            auto g = random_gaps(gen, K, 6.0);
            const auto p = phi(d, g).values;
            EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, K * 1e-9) << d.label();
            std::vector<std::size_t> perm(K);
            std::iota(perm.begin(), perm.end(), 0);
            std::rotate(perm.begin(), perm.begin() + 1, perm.end());
            std::vector<double> gp(K);
            for (int i = 0; i < K; ++i)
                gp[i] = g[perm[i]];
            const auto pp = phi(d, gp).values;
            for (int i = 0; i < K; ++i)
                EXPECT_NEAR(pp[i], p[perm[i]], 1e-9);
        }
    }
}

TEST(Phi, MonotoneInGaps)
{
    const auto d = DistributionSpec::frechet(2.0);
    std::vector<double> g{0.0, 0.7, 1.5};
    const auto base = phi(d, g).values;
    auto up = g;
    up[1] += 0.1;
    const auto moved = phi(d, up).values;
    EXPECT_LT(moved[1], base[1]);
    EXPECT_GT(moved[0], base[0]);
    EXPECT_GT(moved[2], base[2]);
}

TEST(Phi, TranslationInvariant)
{
    const auto d = DistributionSpec::pareto(2.0);
    const auto a = phi(d, std::vector<double>{0.0, 1.0}).values;
    const auto b = phi(d, std::vector<double>{3.0, 4.0}).values;
    EXPECT_NEAR(a[0], b[0], 1e-14);
}

TEST(Phi, FrechetAgreesWithMonteCarlo)
{
    const auto d = DistributionSpec::frechet(2.0);
    const std::vector<double> g{0.0, 3.0};
    const auto p = phi(d, g).values;
    Rng gen(17);
    const long long n = 400000;
    const auto f = mc_selection_frequencies(d, g, n, gen);
    for (int i = 0; i < 2; ++i)
        EXPECT_NEAR(f[i], p[i], 4 * std::sqrt(p[i] * (1 - p[i]) / n));
}

TEST(IntegralI, TrivialCases)
{
    EXPECT_NEAR(integral_I(std::vector<double>{0.0}, 0, 2.0, 3.0).value, 0.5, 1e-12);
    EXPECT_NEAR(integral_I(std::vector<double>{0.0}, 0, 3.0, 4.0).value, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(integral_I(std::vector<double>{0.0, 0.0}, 0, 2.0, 3.0).value, 0.25, 1e-12);
    EXPECT_THROW(integral_I(std::vector<double>{0.0}, 0, 2.0, 1.0), std::invalid_argument);
}

TEST(IntegralI, MatchesPhiForFrechet)
{
    Rng gen(4);
    for (double alpha : {1.5, 2.0, 3.0}) {
        const auto d = DistributionSpec::frechet(alpha);
        for (int c = 0; c < 5; ++c) {
            const auto g = random_gaps(gen, 2 + c, 5.0);
            const auto p = phi(d, g).values;
            for (std::size_t i = 0; i < g.size(); ++i)
                EXPECT_NEAR(p[i], alpha * integral_I(g, i, alpha, alpha + 1.0).value, 1e-8);
        }
    }
}

TEST(IntegralI, MatchesMonteCarloExpectation)
{
    // z = E^{-1/2} with E ~ Exp(1): I = E[ (z+l_i)^{-n} exp(-sum (z+l_j)^{-2} + z^{-2}) * dz/dE-weight ]
    // Use z-density 2 z^{-3} e^{-z^{-2}}: I = E[(z+l_i)^{-3} exp(-sum_{j!=0}(z+l_j)^{-2}) z^3 / 2]
    const std::vector<double> g{0.0, 1.0, 2.0};
    Rng gen(21);
    const long long n = 400000;
    double s = 0, s2 = 0;
    for (long long r = 0; r < n; ++r) {
        const double z = std::pow(-std::log(uniform_open(gen)), -0.5);
        const double v = std::pow(z + g[1], -3.0) * std::exp(-std::pow(z + 1.0, -2.0) - std::pow(z + 2.0, -2.0)) *
                         z * z * z / 2.0;
        s += v;
        s2 += v * v;
    }
    const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(integral_I(g, 1, 2.0, 3.0).value, mean, 4 * se);
}

TEST(IntegralJ, Examples)
{
    const auto p = DistributionSpec::pareto(2.0);
    EXPECT_NEAR(integral_J(p, std::vector<double>{0.0}, 0).value, 2.0 / 3.0, 1e-10);
    const std::vector<double> g{0.0, 5.0};
    for (std::size_t i = 0; i < 2; ++i)
        EXPECT_LE(integral_J(p, g, i).value, phi(p, g).values[i] + 1e-12);
    EXPECT_THROW(integral_J(DistributionSpec::frechet(2.0), g, 0), std::domain_error);

    // E[1{arm 1 selected} / r_1]
    Rng gen(8);
    const long long n = 400000;
    double s = 0, s2 = 0;
    for (long long r = 0; r < n; ++r) {
        const double r0 = draw(p, gen), r1 = draw(p, gen);
        const double v = (g[1] - r1 < g[0] - r0) ? 1.0 / r1 : 0.0;
        s += v;
        s2 += v * v;
    }
    const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(integral_J(p, g, 1).value, mean, 4 * se);
}

TEST(IntegralJ, EqualGapsRatio)
{
    const auto p = DistributionSpec::pareto(2.0);
    const std::vector<double> g{0.0, 0.0};
    const double ratio = integral_J(p, g, 1).value / phi(p, g).values[1];
    // E[1 / max of two Pareto(2)] = int_0^1 (1-u^2)^2 du = 8/15
    EXPECT_NEAR(ratio, 8.0 / 15.0, 1e-10);
    const auto c = lemma5_constants(p);
    EXPECT_LE(ratio, c.m / c.A_l * std::pow(2.0, -0.5));
}

TEST(RatioMonotonicity, Examples)
{
    EXPECT_LE(check_lemma4_monotonicity(DistributionSpec::frechet(2.0), std::vector<double>{0, 1}, 0, 1, 0.5), 1e-8);
    EXPECT_LE(check_lemma4_monotonicity(DistributionSpec::pareto(2.0), std::vector<double>{0, 1, 2}, 0, 2, 1.0),
              1e-8);
    EXPECT_THROW(check_lemma4_monotonicity(DistributionSpec::pareto(2.0), std::vector<double>{0, 1}, 1, 1, 1.0),
                 std::invalid_argument);
}

TEST(RatioMonotonicity, RandomSweep)
{
    Rng gen(33);
    const std::vector<DistributionSpec> laws{DistributionSpec::frechet(2.0), DistributionSpec::pareto(2.0),
                                             DistributionSpec::student_t(2.0).trunc_shift()};
    for (int c = 0; c < 20; ++c) {
        const int K = 2 + gen() % 5;
        const auto g = random_gaps(gen, K, 20.0);
        const std::size_t i = gen() % K;
        const std::size_t j = (i + 1 + gen() % (K - 1)) % K;
        const double step = 0.1 + 2.9 * uniform_open(gen);
        for (const auto& d : laws)
            EXPECT_LE(check_lemma4_monotonicity(d, g, i, j, step), 1e-8) << d.label();
    }
}

TEST(RatioBound, Examples)
{
    const auto f = DistributionSpec::frechet(2.0);
    EXPECT_GE(check_lemma5_bounds(f, std::vector<double>{0, 4}, 1, lemma5_constants(f)), -1e-8);
    const auto p = DistributionSpec::pareto(2.0);
    const auto c = lemma5_constants(p);
    EXPECT_NEAR(c.m, 2.0 * std::tgamma(1.5), 1e-14);
    EXPECT_EQ(c.A_l, 1.0);
    EXPECT_GE(check_lemma5_bounds(p, std::vector<double>(4, 0.0), 3, c), -1e-8);
}

TEST(RatioBound, FrechetEqualGapsIsTight)
{
    // ratio = E[1 / max of K Frechet] = Gamma(1 + 1/alpha) K^{-1/alpha}, the sigma = K bound itself
    const auto f = DistributionSpec::frechet(2.0);
    const double slack = check_lemma5_bounds(f, std::vector<double>(3, 0.0), 2, lemma5_constants(f));
    EXPECT_NEAR(slack, 0.0, 1e-9);
}

TEST(RatioBound, StableRank)
{
    const std::vector<double> g{0.0, 2.0, 0.0, 1.0};
    EXPECT_EQ(stable_rank(g, 0), 1);
    EXPECT_EQ(stable_rank(g, 2), 2);
    EXPECT_EQ(stable_rank(g, 3), 3);
    EXPECT_EQ(stable_rank(g, 1), 4);
}

TEST(ResamplingProbe, UniformGapsGiveK)
{
    Rng gen(2);
    const auto r = resampling_unbiasedness_probe(DistributionSpec::frechet(2.0), std::vector<double>(4, 0.0), 2,
                                                 100000, gen);
    EXPECT_NEAR(r.mean, 4.0, 3 * r.std_error);
    EXPECT_EQ(r.capped, 0);
}

TEST(ResamplingProbe, MatchesOracle)
{
    Rng gen(6);
    const auto f = DistributionSpec::frechet(2.0);
    const std::vector<double> g{0.0, 2.0, 2.0};
    const auto r = resampling_unbiasedness_probe(f, g, 0, 100000, gen);
    EXPECT_NEAR(r.mean, 1.0 / phi(f, g).values[0], 3 * r.std_error);
    const auto q = resampling_unbiasedness_probe(DistributionSpec::pareto(2.0), std::vector<double>{0, 1}, 1, 100000,
                                                 gen);
    EXPECT_NEAR(q.mean, 1.0 / kPhi1, 3 * q.std_error);
}

TEST(ResamplingProbe, CapIsReported)
{
    Rng gen(1);
    const auto r = resampling_unbiasedness_probe(DistributionSpec::frechet(2.0), std::vector<double>{0, 50}, 1, 5,
                                                 gen, 1000);
    EXPECT_EQ(r.capped, 5);
}

TEST(Quadrature, ConfigValidation)
{
    QuadratureConfig q;
    q.rel_tol = 1e-3;
    EXPECT_THROW(q.validate(), std::invalid_argument);
    q.rel_tol = 1e-10;
    q.max_panels = 10;
    EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Quadrature, NonConvergenceReportsAchievedError)
{
    QuadratureConfig q;
    q.max_panels = 64;
    q.rel_tol = 1e-14;
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, q);
        FAIL() << "expected QuadratureError";
    } catch (const QuadratureError& e) {
        EXPECT_GT(e.achieved(), 0.0);
    }
}
