#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "teich/io.hpp"
#include "teich/random.hpp"
#include "teich/symplectic.hpp"

using namespace teich;

namespace {

// Coefficient of z^m in ((a z + b)/(conj(b) z + conj(a)))^n for n >= 1, m >= 1,
// from the binomial series of (1 + (conj b / conj a) z)^{-n}.
cplx moebius_power_coeff(cplx a, cplx b, int n, int m)
{
    std::vector<cplx> num(static_cast<std::size_t>(n) + 1);
    // (a z + b)^n = sum_k C(n,k) a^k b^{n-k} z^k
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        num[static_cast<std::size_t>(k)] = binom * std::pow(a, k) * std::pow(b, n - k);
        binom = binom * (n - k) / (k + 1);
    }
    const cplx q = std::conj(b) / std::conj(a);
    cplx acc{};
    cplx series = std::pow(std::conj(a), -n);  // coefficient of z^0 of (conj(b) z + conj(a))^{-n}
    for (int j = 0; j <= m; ++j) {
        const int k = m - j;
        if (k <= n)
            acc += num[static_cast<std::size_t>(k)] * series;
        series *= -q * static_cast<double>(n + j) / static_cast<double>(j + 1);
    }
    return acc;
}

SymplecticBlockMatrix matrix_of(const CircleMap& f, int N) { return composition_matrix(f, N, 4 * N); }

} // namespace

TEST(CompositionMatrix, IdentityAndRotation)
{
    const auto I = matrix_of(CircleMap::identity(), 8);
    EXPECT_NEAR((I.matrix() - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 0.0, 1e-14);

    const double theta = 0.7;
    const auto R = matrix_of(CircleMap::rotation(theta), 8);
    for (int m = -8; m <= 8; ++m)
        for (int n = -8; n <= 8; ++n) {
            if (m == 0 || n == 0)
                continue;
            const cplx expected = m == n ? std::polar(1.0, n * theta) : cplx{};
            ASSERT_NEAR(std::abs(R.entry(m, n) - expected), 0.0, 1e-14);
        }
}

TEST(CompositionMatrix, MoebiusEntriesMatchPowerSeries)
{
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const auto [a, b] = random_su11(rng, 0.5);
        const int N = 16;
        const auto A = composition_matrix(CircleMap::moebius(a, b), N, 512);
        for (int n = 1; n <= N; ++n)
            for (int m = 1; m <= N; ++m) {
                const cplx expected = moebius_power_coeff(a, b, n, m);
                ASSERT_NEAR(std::abs(A.raw_entry(m, n) - expected), 0.0, 1e-11) << "m=" << m << " n=" << n;
                ASSERT_NEAR(std::abs(A.raw_entry(-m, -n) - std::conj(expected)), 0.0, 1e-11);
                // Holomorphic in the disc: nothing lands in the opposite half.
                ASSERT_NEAR(std::abs(A.raw_entry(-m, n)), 0.0, 1e-12);
            }
        EXPECT_NEAR(hs_offdiag(A), 0.0, 1e-12);
    }
}

TEST(CompositionMatrix, BlocksAndRealityDefect)
{
    Rng rng(32);
    const auto f = flow_map(random_smooth_field(rng), 1.0);
    const auto A = matrix_of(f, 32);
    const auto d = block_decompose(A);
    EXPECT_LT(d.reality_defect, 1e-13);
    EXPECT_EQ(d.g, CMatrix(A.g()));
    EXPECT_EQ(d.h, CMatrix(A.h()));
    EXPECT_NEAR((A.lower_left() - A.h().conjugate()).cwiseAbs().maxCoeff(), 0.0, 1e-13);
    EXPECT_GT(hs_offdiag(A), 1e-3);

    const auto B = SymplecticBlockMatrix::from_blocks(d.g, d.h);
    EXPECT_NEAR((B.matrix() - A.matrix()).cwiseAbs().maxCoeff(), 0.0, 1e-13);
}

TEST(CompositionMatrix, SymplecticOnInteriorAndConverges)
{
    Rng rng(33);
    const auto f = flow_map(random_smooth_field(rng), 1.0);
    double prev = 1.0;
    for (int N : {16, 32, 64}) {
        const double defect = symplectic_defect(matrix_of(f, N), N / 4);
        EXPECT_LT(defect, prev);
        prev = defect;
    }
    EXPECT_LT(prev, 1e-6);
    // Sp identities on the interior: g g* - h h* = I, g h^T = h g^T.
    const auto A = matrix_of(f, 64);
    const CMatrix g = A.g(), h = A.h();
    const CMatrix gram = g * g.adjoint() - h * h.adjoint();
    const CMatrix sym = g * h.transpose() - h * g.transpose();
    EXPECT_NEAR((gram - CMatrix::Identity(64, 64)).topLeftCorner(16, 16).cwiseAbs().maxCoeff(), 0.0, 1e-6);
    EXPECT_NEAR(sym.topLeftCorner(16, 16).cwiseAbs().maxCoeff(), 0.0, 1e-6);
}

TEST(CompositionMatrix, ActionIsAntiHomomorphism)
{
    Rng rng(34);
    const auto [a1, b1] = random_su11(rng, 0.3);
    const auto [a2, b2] = random_su11(rng, 0.3);
    EXPECT_LT(action_composition_residual(CircleMap::moebius(a1, b1), CircleMap::moebius(a2, b2), 32, 128), 1e-12);

    const auto f = flow_map(random_smooth_field(rng), 1.0);
    const auto g = flow_map(random_smooth_field(rng), 1.0);
    EXPECT_LT(action_composition_residual(f, g, 64, 256), 1e-6);
}

TEST(CompositionMatrix, ThreadCountDoesNotChangeBits)
{
    Rng rng(35);
    const auto f = compose(CircleMap::moebius(std::cosh(0.3), std::sinh(0.3)), flow_map(random_smooth_field(rng), 1.0));
    const auto one = composition_matrix(f, 48, 192, 1);
    for (unsigned t : {2u, 3u, 4u, 7u})
        EXPECT_TRUE(composition_matrix(f, 48, 192, t).matrix() == one.matrix()) << t << " threads";
}

TEST(CompositionMatrix, Preconditions)
{
    EXPECT_THROW(composition_matrix(CircleMap::identity(), 8, 31), AliasingError);
    EXPECT_NO_THROW(composition_matrix(CircleMap::identity(), 8, 32));
    EXPECT_THROW(composition_matrix(CircleMap::identity(), 0, 32), PreconditionError);
    // An unchecked single RK4 step folds the circle.
    const CircleMap folded(FlowMap{VectorField::sine(4, 3.0), 1.0, 1});
    EXPECT_THROW(composition_matrix(folded, 16, 1024), MonotonicityError);
    EXPECT_THROW(symplectic_defect(SymplecticBlockMatrix::identity(8), 3), PreconditionError);
    EXPECT_THROW(symplectic_defect(SymplecticBlockMatrix::identity(8), 0), PreconditionError);
    EXPECT_THROW(SymplecticBlockMatrix(CMatrix::Identity(3, 3)), PreconditionError);
    EXPECT_THROW(SymplecticBlockMatrix::identity(4) * SymplecticBlockMatrix::identity(5), PreconditionError);
}

TEST(MatrixCsv, RoundTripIsExact)
{
    Rng rng(36);
    const auto A = matrix_of(flow_map(random_smooth_field(rng), 1.0), 8);
    const auto text = matrix_to_csv(A.matrix());
    EXPECT_TRUE(matrix_from_csv(text) == A.matrix());
    EXPECT_EQ(matrix_to_csv(matrix_from_csv(text)), text);
}
