#pragma once
//
// Truncated matrices of the composition operator V_phi f = f o phi - mean(f o phi).
//
// Matrices are expressed in the H^{1/2}-orthonormal basis e_n / sqrt|n|,
// with rows and columns in storage order [1..N, -1..-N]. In this basis the
// operator has the block form
//
//     | g     h    |      H_+
//     | h̄     ḡ    |      H_-
//
// and membership in Sp reads g g* - h h* = I, g h^T = h g^T.
//

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "teich/circle_maps.hpp"
#include "teich/error.hpp"
#include "teich/fourier.hpp"
#include "teich/io.hpp"

namespace teich {

namespace detail {

/// Splits [0, count) into contiguous chunks, one per worker. Each index is
/// handled by exactly one call, so results never depend on `threads`.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin < end)
            pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
}

} // namespace detail

class SymplecticBlockMatrix {
public:
    SymplecticBlockMatrix() = default;

    explicit SymplecticBlockMatrix(CMatrix matrix) : matrix_(std::move(matrix))
    {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() % 2 != 0 || matrix_.rows() == 0)
            throw PreconditionError("SymplecticBlockMatrix: expected a non-empty 2N x 2N matrix");
    }

    /// Assembles [[g, h], [conj(h), conj(g)]].
    static SymplecticBlockMatrix from_blocks(const CMatrix& g, const CMatrix& h)
    {
        const auto N = g.rows();
        if (g.cols() != N || h.rows() != N || h.cols() != N)
            throw PreconditionError("from_blocks: g and h must be square and the same size");
        CMatrix m(2 * N, 2 * N);
        m.topLeftCorner(N, N) = g;
        m.topRightCorner(N, N) = h;
        m.bottomLeftCorner(N, N) = h.conjugate();
        m.bottomRightCorner(N, N) = g.conjugate();
        return SymplecticBlockMatrix(std::move(m));
    }

    static SymplecticBlockMatrix identity(int N)
    {
        return SymplecticBlockMatrix(CMatrix::Identity(2 * N, 2 * N));
    }

    int order() const { return static_cast<int>(matrix_.rows() / 2); }
    const CMatrix& matrix() const { return matrix_; }

    /// Entry for modes (m, n) in the orthonormal basis.
    cplx entry(int m, int n) const
    {
        return matrix_(static_cast<Eigen::Index>(mode_slot(m, order())),
                       static_cast<Eigen::Index>(mode_slot(n, order())));
    }

    /// (1/2 pi) int e^{-imx} V_phi(e^{inx}) dx, i.e. the entry in the e^{inx} basis.
    cplx raw_entry(int m, int n) const
    {
        return entry(m, n) * std::sqrt(static_cast<double>(std::abs(n)) / std::abs(m));
    }

    auto g() const { return matrix_.topLeftCorner(order(), order()); }
    auto h() const { return matrix_.topRightCorner(order(), order()); }
    auto lower_left() const { return matrix_.bottomLeftCorner(order(), order()); }
    auto lower_right() const { return matrix_.bottomRightCorner(order(), order()); }

    friend SymplecticBlockMatrix operator*(const SymplecticBlockMatrix& a, const SymplecticBlockMatrix& b)
    {
        if (a.order() != b.order())
            throw PreconditionError("SymplecticBlockMatrix product: truncation orders differ");
        return SymplecticBlockMatrix(a.matrix_ * b.matrix_);
    }

private:
    CMatrix matrix_;
};

/// Matrix of V_phi at truncation N from M uniform samples of phi (M >= 4N).
/// Column n holds the orthonormal coefficients of e^{in phi(x)} minus its mean.
inline SymplecticBlockMatrix composition_matrix(const CircleMap& map, int N, std::size_t M, unsigned threads = 1)
{
    if (N < 1)
        throw PreconditionError("composition_matrix: truncation order must be positive");
    if (M < 4 * static_cast<std::size_t>(N))
        throw AliasingError("composition_matrix: need M >= 4N samples (N = " + std::to_string(N) +
                            ", M = " + std::to_string(M) + ")");

    const auto xs = uniform_grid(M);
    const auto d = map.displacements(xs);
    const double step = two_pi / static_cast<double>(M);
    std::vector<double> phase(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double next = j + 1 < M ? d[j + 1] : d[0];
        if (!(step + next - d[j] > 0.0))
            throw MonotonicityError("composition_matrix: sampled map is not increasing");
        phase[j] = xs[j] + d[j];
    }

    const auto dim = static_cast<std::size_t>(2 * N);
    CMatrix A(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const double inv_M = 1.0 / static_cast<double>(M);

    detail::parallel_for(dim, threads, [&](std::size_t begin, std::size_t end) {
        Eigen::FFT<double> fft;
        std::vector<cplx> samples(M);
        std::vector<cplx> spectrum(M);
        for (std::size_t col = begin; col < end; ++col) {
            const int n = slot_mode(col, N);
            for (std::size_t j = 0; j < M; ++j)
                samples[j] = std::polar(1.0, static_cast<double>(n) * phase[j]);
            fft.fwd(spectrum, samples);
            const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(std::abs(n)));
            for (std::size_t row = 0; row < dim; ++row) {
                const int m = slot_mode(row, N);
                const std::size_t k = m > 0 ? static_cast<std::size_t>(m) : M - static_cast<std::size_t>(-m);
                A(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                    spectrum[k] * (inv_M * std::sqrt(static_cast<double>(std::abs(m))) * inv_sqrt_n);
            }
        }
    });
    return SymplecticBlockMatrix(std::move(A));
}

struct BlockDecomposition {
    CMatrix g;
    CMatrix h;
    /// max |A_{-m,-n} - conj(A_{m,n})|
    double reality_defect = 0.0;
};

inline BlockDecomposition block_decompose(const SymplecticBlockMatrix& A)
{
    const auto N = A.order();
    double defect = 0.0;
    const auto& m = A.matrix();
    for (Eigen::Index i = 0; i < 2 * N; ++i) {
        const Eigen::Index ci = i < N ? i + N : i - N;
        for (Eigen::Index j = 0; j < 2 * N; ++j) {
            const Eigen::Index cj = j < N ? j + N : j - N;
            defect = std::max(defect, std::abs(m(ci, cj) - std::conj(m(i, j))));
        }
    }
    return {A.g(), A.h(), defect};
}

namespace detail {

inline std::vector<Eigen::Index> interior_slots(int N, int n_core)
{
    std::vector<Eigen::Index> slots;
    for (int k = 0; k < n_core; ++k)
        slots.push_back(k);
    for (int k = 0; k < n_core; ++k)
        slots.push_back(N + k);
    return slots;
}

inline void check_core(int N, int n_core, const char* who)
{
    if (n_core < 1 || 4 * n_core > N)
        throw PreconditionError(std::string(who) + ": interior band must satisfy 1 <= N_core <= N/4");
}

} // namespace detail

/// max |Omega(A u, A v) - Omega(u, v)| over orthonormal basis vectors u, v
/// with |mode| <= n_core. Image vectors keep all 2N rows.
inline double symplectic_defect(const SymplecticBlockMatrix& A, int n_core)
{
    const int N = A.order();
    detail::check_core(N, n_core, "symplectic_defect");
    const auto slots = detail::interior_slots(N, n_core);
    const auto& m = A.matrix();
    double worst = 0.0;
    for (auto j : slots) {
        for (auto k : slots) {
            cplx image{};
            for (Eigen::Index r = 0; r < 2 * N; ++r) {
                const double sgn = r < N ? 1.0 : -1.0;
                image += sgn * m(r, j) * std::conj(m(r, k));
            }
            const double sgn_j = j < N ? 1.0 : -1.0;
            const cplx base = j == k ? cplx{sgn_j, 0.0} : cplx{};
            worst = std::max(worst, std::abs(cplx{0.0, -1.0} * (image - base)));
        }
    }
    return worst;
}

/// Hilbert-Schmidt norm of the off-diagonal blocks h and conj(h).
/// With n_core > 0 only modes |m|, |n| <= n_core contribute.
inline double hs_offdiag(const SymplecticBlockMatrix& A, int n_core = 0)
{
    const int N = A.order();
    const int k = n_core > 0 ? std::min(n_core, N) : N;
    const double upper = A.h().topLeftCorner(k, k).squaredNorm();
    const double lower = A.lower_left().topLeftCorner(k, k).squaredNorm();
    return std::sqrt(upper + lower);
}

/// Largest singular value, on interior modes, of V_{phi o psi} - V_psi V_phi.
inline double action_composition_residual(const CircleMap& phi, const CircleMap& psi, int N, std::size_t M,
                                          int n_core = 0, unsigned threads = 1)
{
    if (n_core == 0)
        n_core = N / 4;
    detail::check_core(N, n_core, "action_composition_residual");
    const auto both = composition_matrix(compose(phi, psi), N, M, threads);
    const auto a_phi = composition_matrix(phi, N, M, threads);
    const auto a_psi = composition_matrix(psi, N, M, threads);
    const CMatrix diff = both.matrix() - a_psi.matrix() * a_phi.matrix();

    const auto slots = detail::interior_slots(N, n_core);
    const auto k = static_cast<Eigen::Index>(slots.size());
    CMatrix core(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            core(i, j) = diff(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<CMatrix> svd(core);
    return svd.singularValues()(0);
}

} // namespace teich
