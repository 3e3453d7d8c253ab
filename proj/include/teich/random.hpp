#pragma once
//
// Seeded generators for property tests and the demo commands. Everything
// draws from a caller-owned std::mt19937_64 so runs are reproducible.
//

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "teich/circle_maps.hpp"
#include "teich/fourier.hpp"
#include "teich/io.hpp"

namespace teich {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline cplx gaussian_complex(Rng& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
}

/// Random FourierVector of order N; real vectors are conjugate-symmetric.
inline FourierVector random_fourier(Rng& rng, int N, bool real)
{
    std::vector<cplx> pos(static_cast<std::size_t>(N));
    for (auto& c : pos)
        c = gaussian_complex(rng);
    if (real)
        return FourierVector::real_from_positive(pos);
    std::vector<cplx> neg(static_cast<std::size_t>(N));
    for (auto& c : neg)
        c = gaussian_complex(rng);
    return FourierVector::from_modes(N, [&](int n) {
        return n > 0 ? pos[static_cast<std::size_t>(n - 1)] : neg[static_cast<std::size_t>(-n - 1)];
    });
}

/// Smooth real field of band `band`: uniform phases, |v_n| = (0.5 + U)/n^decay,
/// a random mean, then rescaled so that max |v| = sup on 4096 nodes.
inline VectorField random_smooth_field(Rng& rng, int band = 8, double sup = 0.3, double decay = 1.5)
{
    std::vector<cplx> c(static_cast<std::size_t>(band) + 1);
    for (int n = 1; n <= band; ++n)
        c[static_cast<std::size_t>(n)] = std::polar((0.5 + uniform(rng)) / std::pow(n, decay), two_pi * uniform(rng));
    c[0] = 0.5 * std::normal_distribution<double>(0.0, 1.0)(rng);
    VectorField v(std::move(c));
    return v.scaled(sup / v.sup_norm());
}

/// (a, b) with |a|^2 - |b|^2 = 1 and |b| <= max_b.
inline std::pair<cplx, cplx> random_su11(Rng& rng, double max_b)
{
    const cplx b = std::polar(max_b * std::sqrt(uniform(rng)), two_pi * uniform(rng));
    const cplx a = std::polar(std::sqrt(1.0 + std::norm(b)), two_pi * uniform(rng));
    return {a, b};
}

/// Point of the open disc with |z| <= max_r.
inline cplx random_disc_point(Rng& rng, double max_r = 0.95)
{
    return std::polar(max_r * std::sqrt(uniform(rng)), two_pi * uniform(rng));
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
inline CMatrix random_unitary(Rng& rng, int n)
{
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = gaussian_complex(rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
        q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
    return q;
}

/// Random complex symmetric matrix scaled to Frobenius norm `norm`.
inline CMatrix random_symmetric(Rng& rng, int n, double norm = 1.0)
{
    CMatrix s(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            s(i, j) = gaussian_complex(rng);
    s = 0.5 * (s + s.transpose()).eval();
    return s * (norm / s.norm());
}

} // namespace teich
