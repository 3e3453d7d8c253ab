#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "teich/random.hpp"
#include "teich/siegel.hpp"

using namespace teich;

namespace {

// Exactly symplectic operator sending 0 to Z0: [[P, Z0 conj(P)], [conj(Z0) P, conj(P)]],
// P = (I - Z0 Z0*)^{-1/2}.
SymplecticBlockMatrix boost_to(const CMatrix& Z0)
{
    const auto n = Z0.rows();
    const CMatrix H = CMatrix::Identity(n, n) - Z0 * Z0.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(H);
    const CMatrix P = eig.operatorInverseSqrt();
    return SymplecticBlockMatrix::from_blocks(P, Z0 * P.conjugate());
}

SymplecticBlockMatrix unitary_block(const CMatrix& U)
{
    return SymplecticBlockMatrix::from_blocks(U, CMatrix::Zero(U.rows(), U.cols()));
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

TEST(DiscMembership, Examples)
{
    const auto d0 = disc_membership(SiegelPoint::origin(4));
    EXPECT_EQ(d0.min_eig, 1.0);
    EXPECT_TRUE(d0.inside());

    const auto d = disc_membership(CMatrix(0.5 * CMatrix::Identity(3, 3)));
    EXPECT_NEAR(d.min_eig, 0.75, 1e-15);
    EXPECT_NEAR(d.hs_norm, 0.5 * std::sqrt(3.0), 1e-15);
    EXPECT_EQ(d.symmetric_defect, 0.0);

    CMatrix Z = CMatrix::Zero(2, 2);
    Z(0, 1) = 0.1;
    const auto ns = disc_membership(Z);
    EXPECT_NEAR(ns.symmetric_defect, 0.1 * std::sqrt(2.0), 1e-15);

    EXPECT_FALSE(disc_membership(CMatrix(CMatrix::Identity(2, 2))).inside());
}

TEST(PeriodPoint, TrivialForIsometries)
{
    EXPECT_EQ(max_abs(period_point(SymplecticBlockMatrix::identity(8)).point.matrix()), 0.0);
    EXPECT_LT(max_abs(period_map(CircleMap::rotation(1.1), 16, 64).point.matrix()), 1e-14);
    Rng rng(41);
    // Strong maps need more than 4N samples before aliasing dies out.
    const auto [a, b] = random_su11(rng, 0.8);
    EXPECT_LT(max_abs(period_map(CircleMap::moebius(a, b), 16, 512).point.matrix()), 1e-12);
}

TEST(PeriodPoint, RecoversBoostTarget)
{
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix Z0 = random_symmetric(rng, 6, 0.9);
        const auto A = boost_to(Z0);
        for (auto formula : {PeriodFormula::symplectic, PeriodFormula::direct}) {
            PeriodPointOptions opt;
            opt.formula = formula;
            const auto pp = period_point(A, opt);
            EXPECT_LT(max_abs(pp.point.matrix() - Z0), 1e-12);
        }
        EXPECT_LT(max_abs(moebius_action(A, SiegelPoint::origin(6)).matrix() - Z0), 1e-12);
    }
}

TEST(PeriodPoint, FlowMapsLandInTheDisc)
{
    Rng rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = flow_map(random_smooth_field(rng), 1.0);
        const auto pp = period_map(f, 32, 128);
        EXPECT_EQ(pp.point.order(), 32);
        EXPECT_LT(pp.diagnostics.relative_symmetric_defect(), 1e-6);
        EXPECT_GT(pp.diagnostics.min_eig, 0.5);
        EXPECT_GT(pp.diagnostics.hs_norm, 1e-3);
    }
}

TEST(PeriodPoint, DirectFormulaAgreesAwayFromTheEdgeAndHonoursCap)
{
    Rng rng(44);
    const auto f = flow_map(random_smooth_field(rng, 8, 0.1), 1.0);
    const auto A = composition_matrix(f, 64, 256);
    PeriodPointOptions direct;
    direct.formula = PeriodFormula::direct;
    direct.out_order = 16;
    PeriodPointOptions sympl;
    sympl.out_order = 16;
    const auto zd = period_point(A, direct);
    const auto zs = period_point(A, sympl);
    EXPECT_GE(zd.g_condition, 1.0);
    EXPECT_TRUE(std::isnan(zs.g_condition));
    EXPECT_LT(max_abs(zd.point.matrix() - zs.point.matrix()), 1e-8);

    direct.condition_cap = 1.0;
    EXPECT_THROW(period_point(A, direct), IllConditionedError);
    sympl.out_order = 65;
    EXPECT_THROW(period_point(A, sympl), PreconditionError);
}

TEST(PeriodPoint, InvariantUnderPostComposedMoebius)
{
    // V_{m o phi} = V_phi V_m and V_m fixes 0.
    Rng rng(45);
    const auto f = flow_map(random_smooth_field(rng), 1.0);
    const auto [a, b] = random_su11(rng, 0.3);
    const auto z1 = period_map(f, 16, 64).point.matrix();
    const auto z2 = period_map(compose(CircleMap::moebius(a, b), f), 16, 64).point.matrix();
    EXPECT_LT(max_abs(z1 - z2), 1e-6);
}

TEST(PeriodPoint, PreRotationConjugatesByPhases)
{
    // V_{phi o R} = V_R V_phi and V_R acts by Z_{mn} -> e^{i(m+n) theta} Z_{mn}.
    Rng rng(46);
    const auto f = flow_map(random_smooth_field(rng), 1.0);
    // Grid-commensurate angle, so the samples of phi o R are a shift of those of phi.
    const double theta = two_pi * 5 / 128.0;
    const auto z = period_map(f, 16, 64).point.matrix();
    const auto zr = period_map(compose(f, CircleMap::rotation(theta)), 16, 64).point.matrix();
    double worst = 0.0;
    for (int m = 1; m <= 16; ++m)
        for (int n = 1; n <= 16; ++n)
            worst = std::max(worst, std::abs(zr(m - 1, n - 1) - std::polar(1.0, (m + n) * theta) * z(m - 1, n - 1)));
    EXPECT_LT(worst, 1e-10);
}

TEST(MoebiusAction, GroupLawAndUnitaryConjugation)
{
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const auto A1 = boost_to(random_symmetric(rng, 5, 0.7));
        const auto A2 = boost_to(random_symmetric(rng, 5, 0.7));
        const SiegelPoint Z(random_symmetric(rng, 5, 0.5));
        const auto lhs = moebius_action(A1 * A2, Z).matrix();
        const auto rhs = moebius_action(A1, moebius_action(A2, Z)).matrix();
        EXPECT_LT(max_abs(lhs - rhs), 1e-12);
        const auto d = disc_membership(lhs);
        EXPECT_LT(d.relative_symmetric_defect(), 1e-12);
        EXPECT_TRUE(d.inside());

        const CMatrix U = random_unitary(rng, 5);
        EXPECT_LT(max_abs(moebius_action(unitary_block(U), Z).matrix() - U * Z.matrix() * U.transpose()), 1e-13);
    }
    EXPECT_THROW(moebius_action(SymplecticBlockMatrix::identity(3), SiegelPoint::origin(4)), PreconditionError);
}

TEST(MoebiusAction, FormulasAgreeOnExactElements)
{
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const auto A = boost_to(random_symmetric(rng, 6, 0.8));
        const SiegelPoint Z(random_symmetric(rng, 6, 0.6));
        const auto s = moebius_action(A, Z, ActionFormula::symplectic).matrix();
        const auto d = moebius_action(A, Z, ActionFormula::direct).matrix();
        EXPECT_LT(max_abs(s - d), 1e-13);
    }
    EXPECT_THROW(moebius_action(SymplecticBlockMatrix::identity(2), SiegelPoint(CMatrix(CMatrix::Identity(2, 2)))),
                 DomainError);
}

TEST(MoebiusAction, CompositionOperatorsMovePeriodPoints)
{
    // V_psi . Z(phi) = Z(phi o psi). The truncated operator is only
    // symplectic away from the band edge, so ḡ is close to singular there.
    Rng rng(52);
    const auto phi = flow_map(random_smooth_field(rng), 1.0);
    const auto psi = flow_map(random_smooth_field(rng), 1.0);
    const int N = 128;
    const auto Z = period_map(phi, N, 4 * N).point;
    const auto A = composition_matrix(psi, N, 4 * N);
    const auto moved = moebius_action(A, Z).matrix();
    // Truncation error collects near the band edge; the leading block is clean.
    const CMatrix lead = moved.topLeftCorner(N / 2, N / 2);
    EXPECT_LT((lead - lead.transpose()).norm() / lead.norm(), 1e-8);
    EXPECT_TRUE(disc_membership(moved).inside());
    const auto direct = period_map(compose(phi, psi), N / 2, 2 * N).point.matrix();
    EXPECT_LT(max_abs(lead - direct), 1e-6);
}

TEST(MetricAtZero, ExamplesAndInvariance)
{
    const CMatrix I = CMatrix::Identity(4, 4);
    EXPECT_EQ(metric_at_zero(I, I), cplx(4.0));
    EXPECT_EQ(metric_at_zero(I, CMatrix(cplx(0.0, 1.0) * I)), cplx(0.0, -4.0));

    Rng rng(48);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix U = random_symmetric(rng, 6);
        const CMatrix V = random_symmetric(rng, 6);
        const CMatrix W = random_unitary(rng, 6);
        const cplx base = metric_at_zero(U, V);
        EXPECT_NEAR(std::abs(base - std::conj(metric_at_zero(V, U))), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(metric_at_zero(W * U * W.transpose(), W * V * W.transpose()) - base), 0.0, 1e-12);
        EXPECT_GT(metric_at_zero(U, U).real(), 0.0);
    }
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    EXPECT_THROW(metric_at_zero(bad, bad), SymmetryError);
    EXPECT_THROW(metric_at_zero(I, CMatrix::Identity(3, 3)), PreconditionError);
}

TEST(RankOne, DiscActionAndMetric)
{
    EXPECT_NEAR(std::abs(su11_orbit(1.0, 0.0, cplx(0.3, 0.2)) - cplx(0.3, 0.2)), 0.0, 0.0);
    const double t = 0.4;
    EXPECT_NEAR(std::abs(su11_orbit(std::cosh(t), std::sinh(t), 0.0) - std::tanh(t)), 0.0, 1e-15);
    EXPECT_NEAR(hyperbolic_metric(1.0 / std::sqrt(2.0), 1.0, 1.0).real(), 4.0, 1e-14);
    EXPECT_EQ(hyperbolic_metric(0.0, cplx(1.0, 1.0), 1.0), cplx(1.0, 1.0));
    EXPECT_THROW(su11_orbit(1.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(su11_orbit(2.0, 0.0, 0.1), PreconditionError);
    EXPECT_THROW(hyperbolic_metric(cplx(0.0, 1.0), 1.0, 1.0), DomainError);

    Rng rng(49);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [a, b] = random_su11(rng, 2.0);
        const cplx z = random_disc_point(rng);
        const auto A = SymplecticBlockMatrix::from_blocks(CMatrix::Constant(1, 1, a), CMatrix::Constant(1, 1, b));
        const cplx w = moebius_action(A, SiegelPoint(CMatrix::Constant(1, 1, z))).matrix()(0, 0);
        EXPECT_NEAR(std::abs(w - su11_orbit(a, b, z)), 0.0, 1e-12);
        // Pushforward of tangent vectors by the derivative 1/(conj(b) z + conj(a))^2.
        const cplx d = 1.0 / std::pow(std::conj(b) * z + std::conj(a), 2);
        const cplx u = gaussian_complex(rng);
        const cplx lhs = hyperbolic_metric(w, d * u, d * u);
        const cplx rhs = hyperbolic_metric(z, u, u);
        EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(SiegelPoint, CsvRoundTrip)
{
    Rng rng(50);
    const SiegelPoint Z(random_symmetric(rng, 4, 0.5));
    EXPECT_TRUE(SiegelPoint::from_csv(Z.to_csv()).matrix() == Z.matrix());
    EXPECT_THROW(SiegelPoint(CMatrix::Zero(2, 3)), PreconditionError);
}
