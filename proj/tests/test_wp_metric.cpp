#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "teich/random.hpp"
#include "teich/wp_metric.hpp"

using namespace teich;

namespace {

const double kConstant = 1.0 / (12.0 * pi);

TangentVector random_tangent(Rng& rng, int band)
{
    std::vector<cplx> c(static_cast<std::size_t>(band) + 1);
    for (int n = 2; n <= band; ++n)
        c[static_cast<std::size_t>(n)] = gaussian_complex(rng) / std::pow(n, 2.0);
    return TangentVector(VectorField(std::move(c)));
}

// J multiplies mode n by i sgn(n); on v_0..v_B that is a factor i.
TangentVector rotate_j(const TangentVector& u)
{
    std::vector<cplx> c(u.field().coeffs().begin(), u.field().coeffs().end());
    for (auto& x : c)
        x *= cplx(0.0, 1.0);
    return TangentVector(VectorField(std::move(c)));
}

// First-order period matrix of the flow of u: U_{mk} = -i sqrt(mk) u_{m+k}.
CMatrix first_order_period(const TangentVector& u, int N)
{
    CMatrix U(N, N);
    for (int m = 1; m <= N; ++m)
        for (int k = 1; k <= N; ++k)
            U(m - 1, k - 1) = cplx(0.0, -1.0) * std::sqrt(static_cast<double>(m * k)) * u[m + k];
    return U;
}

} // namespace

TEST(TangentVector, RejectsPsuModesAndProjects)
{
    EXPECT_THROW(TangentVector(VectorField::cosine(1)), PreconditionError);
    EXPECT_THROW(TangentVector(VectorField::constant(1.0)), PreconditionError);
    EXPECT_NO_THROW(TangentVector(VectorField::sine(3)));

    const VectorField v({cplx(1.0), cplx(0.5, 0.5), cplx(0.0, 0.25), cplx(0.1)});
    const auto p = project_psu11(v);
    EXPECT_EQ(p[0], cplx{});
    EXPECT_EQ(p[1], cplx{});
    EXPECT_EQ(p[-1], cplx{});
    EXPECT_EQ(p[2], cplx(0.0, 0.25));
    const auto pp = project_psu11(p.field());
    for (int n = -3; n <= 3; ++n)
        EXPECT_EQ(pp[n], p[n]);
}

TEST(WpForms, Examples)
{
    const TangentVector c2(VectorField::cosine(2));
    const TangentVector s2(VectorField::sine(2));
    const auto cc = wp_forms(c2, c2);
    EXPECT_NEAR(std::abs(cc.h - cplx(3.0 * pi)), 0.0, 1e-14);
    EXPECT_NEAR(cc.g, 3.0 * pi, 1e-14);
    EXPECT_NEAR(cc.omega, 0.0, 1e-15);

    const auto cs = wp_forms(c2, s2);
    EXPECT_NEAR(std::abs(cs.h - cplx(0.0, 3.0 * pi)), 0.0, 1e-14);
    EXPECT_NEAR(cs.g, 0.0, 1e-15);
    EXPECT_NEAR(cs.omega, 3.0 * pi, 1e-14);

    // n (n^2 - 1) weights: cos 3x has h = 2 pi 24 / 4.
    const TangentVector c3(VectorField::cosine(3));
    EXPECT_NEAR(wp_forms(c3, c3).h.real(), 12.0 * pi, 1e-13);
    EXPECT_NEAR(std::abs(wp_forms(c2, c3).h), 0.0, 0.0);
}

TEST(WpForms, Identities)
{
    Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const auto u = random_tangent(rng, 9);
        const auto v = random_tangent(rng, 7);
        const auto f = wp_forms(u, v);
        const auto r = wp_forms(v, u);
        const double s = 1.0 + std::abs(f.h);
        EXPECT_NEAR(std::abs(f.h - cplx(f.g, f.omega)), 0.0, 1e-12 * s);
        EXPECT_NEAR(f.g - r.g, 0.0, 1e-12 * s);
        EXPECT_NEAR(f.omega + r.omega, 0.0, 1e-12 * s);
        EXPECT_NEAR(f.omega - wp_forms(u, rotate_j(v)).g, 0.0, 1e-12 * s);
        EXPECT_GT(wp_forms(u, u).g, 0.0);
        EXPECT_NEAR(wp_forms(u, u).omega, 0.0, 1e-12 * s);
    }
}

TEST(Pullback, FirstOrderOracleGivesTheConstant)
{
    // sum_{m=1}^{p-1} m (p - m) = p (p^2 - 1) / 6, so Tr(conj(U) U) = h / (12 pi).
    Rng rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_tangent(rng, 10);
        const CMatrix U = first_order_period(u, 12);
        EXPECT_NEAR(metric_at_zero(U, U).real() / wp_forms(u, u).h.real(), kConstant, 1e-14);
    }
}

TEST(Pullback, TangentPeriodMatchesFirstOrderOracle)
{
    Rng rng(53);
    const auto u = random_tangent(rng, 5);
    const int N = 16;
    const CMatrix U = tangent_period(u, 1e-3, N, 64);
    const CMatrix oracle = first_order_period(u, N);
    EXPECT_LT((U - oracle).cwiseAbs().maxCoeff(), 1e-5 * oracle.cwiseAbs().maxCoeff());
    EXPECT_LT((U - U.transpose()).norm(), 1e-9 * U.norm());

    TangentPeriodOptions rich;
    rich.richardson = true;
    const CMatrix Ur = tangent_period(u, 1e-3, N, 64, rich);
    EXPECT_LE((Ur - oracle).norm(), (U - oracle).norm());
    EXPECT_THROW(tangent_period(u, 0.0, N, 64), PreconditionError);
}

TEST(Pullback, RatioIsScaleAndRotationInvariant)
{
    const TangentVector c3(VectorField::cosine(3));
    const double base = pullback_ratio(c3, 1e-3, 32, 128);
    EXPECT_NEAR(base, kConstant, 1e-5);
    EXPECT_NEAR(pullback_ratio(TangentVector(VectorField::cosine(3, 2.0)), 1e-3, 32, 128), base, 1e-5);
    // cos(3(x + theta)) = cos(3 theta) cos 3x - sin(3 theta) sin 3x.
    const double theta = 0.4;
    std::vector<cplx> c(4);
    c[3] = 0.5 * std::polar(1.0, 3 * theta);
    EXPECT_NEAR(pullback_ratio(TangentVector(VectorField(c)), 1e-3, 32, 128), base, 0.02 * base);
    EXPECT_THROW(pullback_ratio(TangentVector(VectorField::cosine(4, 0.0)), 1e-3, 32, 128), PreconditionError);
}

TEST(Pullback, ExperimentIsConsistentAndOrderIndependent)
{
    const auto seq = run_pullback_experiment({2, 3, 4}, 32, 128, 1e-3, 2, false);
    const auto par = run_pullback_experiment({2, 3, 4}, 32, 128, 1e-3, 2, true);
    ASSERT_EQ(seq.rows.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(seq.rows[i].mode, static_cast<int>(i) + 2);
        EXPECT_EQ(seq.rows[i].ratio, par.rows[i].ratio);
        EXPECT_NEAR(seq.rows[i].ratio, kConstant, 1e-4);
    }
    EXPECT_LT(seq.max_pairwise_deviation(), 0.02);
    EXPECT_LT(seq.step_halving_shift(), 0.01);
    EXPECT_NEAR(seq.richardson_constant, kConstant, 1e-5);
    EXPECT_THROW(run_pullback_experiment({}, 32, 128, 1e-3), PreconditionError);
    EXPECT_THROW(run_pullback_experiment({1}, 32, 128, 1e-3, 2, false), PreconditionError);
}
