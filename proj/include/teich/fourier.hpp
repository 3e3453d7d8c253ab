#pragma once
//
// Truncated Fourier model of H^{1/2}(S^1, C)/C.
//
// A FourierVector stores the coefficients u_n of u(x) = sum u_n e^{inx}
// for 1 <= |n| <= N. There is no slot for n = 0: constants are quotiented
// out. Storage order is [1, ..., N, -1, ..., -N], which is also the
// H_+ (+) H_- block order used by the operator code.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "teich/error.hpp"

namespace teich {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

enum class Half { plus, minus };

/// Storage slot of mode n in a band of order N (n != 0, |n| <= N).
inline std::size_t mode_slot(int n, int N)
{
    return n > 0 ? static_cast<std::size_t>(n - 1) : static_cast<std::size_t>(N - n - 1);
}

/// Mode carried by storage slot s in a band of order N.
inline int slot_mode(std::size_t s, int N)
{
    const int i = static_cast<int>(s);
    return i < N ? i + 1 : -(i - N + 1);
}

class FourierVector {
public:
    FourierVector() = default;

    /// Zero vector of order N.
    explicit FourierVector(int N) : N_(N), coeffs_(2 * static_cast<std::size_t>(N)), real_(true)
    {
        if (N < 1)
            throw PreconditionError("FourierVector: truncation order must be positive");
    }

    /// Takes coefficients in storage order. When `is_real` is set the
    /// conjugate symmetry u_{-n} = conj(u_n) is verified (relative 1e-10).
    FourierVector(int N, std::vector<cplx> coeffs, bool is_real = false)
        : N_(N), coeffs_(std::move(coeffs)), real_(is_real)
    {
        if (N < 1)
            throw PreconditionError("FourierVector: truncation order must be positive");
        if (coeffs_.size() != 2 * static_cast<std::size_t>(N))
            throw PreconditionError("FourierVector: expected 2N coefficients");
        if (real_ && !conjugate_symmetric(1e-10))
            throw PreconditionError("FourierVector: coefficients are not conjugate-symmetric");
    }

    /// Build from a per-mode generator `f(n)`, n in {-N..-1, 1..N}.
    template <class F>
    static FourierVector from_modes(int N, F&& f, bool is_real = false)
    {
        std::vector<cplx> c(2 * static_cast<std::size_t>(N));
        for (std::size_t s = 0; s < c.size(); ++s)
            c[s] = f(slot_mode(s, N));
        return FourierVector(N, std::move(c), is_real);
    }

    /// Real vector from its positive half u_1..u_N; negative modes are conjugates.
    static FourierVector real_from_positive(std::span<const cplx> positive)
    {
        const int N = static_cast<int>(positive.size());
        return from_modes(
            N, [&](int n) { return n > 0 ? positive[n - 1] : std::conj(positive[-n - 1]); }, true);
    }

    int order() const { return N_; }
    bool is_real() const { return real_; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    /// u_n, zero outside the stored band.
    cplx operator[](int n) const
    {
        if (n == 0 || n > N_ || n < -N_)
            return {};
        return coeffs_[mode_slot(n, N_)];
    }

    bool conjugate_symmetric(double rel_tol) const
    {
        double scale = 0.0;
        for (auto c : coeffs_)
            scale = std::max(scale, std::abs(c));
        for (int n = 1; n <= N_; ++n)
            if (std::abs((*this)[-n] - std::conj((*this)[n])) > rel_tol * std::max(scale, 1.0))
                return false;
        return true;
    }

    friend FourierVector operator+(const FourierVector& a, const FourierVector& b)
    {
        const int N = std::max(a.N_, b.N_);
        return from_modes(N, [&](int n) { return a[n] + b[n]; }, a.real_ && b.real_);
    }

    friend FourierVector operator-(const FourierVector& a)
    {
        return from_modes(a.N_, [&](int n) { return -a[n]; }, a.real_);
    }

    friend FourierVector operator*(cplx s, const FourierVector& a)
    {
        return from_modes(a.N_, [&](int n) { return s * a[n]; }, a.real_ && s.imag() == 0.0);
    }

private:
    int N_ = 0;
    std::vector<cplx> coeffs_;
    bool real_ = false;
};

/// H^{1/2} inner product sum |n| u_n conj(v_n); mismatched orders are zero-padded.
inline cplx h_half_inner(const FourierVector& u, const FourierVector& v)
{
    const int N = std::min(u.order(), v.order());
    cplx acc{};
    for (int n = 1; n <= N; ++n)
        acc += static_cast<double>(n) * (u[n] * std::conj(v[n]) + u[-n] * std::conj(v[-n]));
    return acc;
}

/// Hilbert transform: multiplies mode n by i sgn(n).
inline FourierVector hilbert_transform(const FourierVector& u)
{
    const cplx i{0.0, 1.0};
    return FourierVector::from_modes(
        u.order(), [&](int n) { return (n > 0 ? i : -i) * u[n]; }, u.is_real());
}

/// Symplectic form Omega(u, v) = -i sum n u_n conj(v_n).
inline cplx symplectic_form(const FourierVector& u, const FourierVector& v)
{
    const int N = std::min(u.order(), v.order());
    cplx acc{};
    for (int n = 1; n <= N; ++n)
        acc += static_cast<double>(n) * (u[n] * std::conj(v[n]) - u[-n] * std::conj(v[-n]));
    return cplx{0.0, -1.0} * acc;
}

/// Orthogonal projection onto H_+ (n > 0) or H_- (n < 0).
inline FourierVector project(const FourierVector& u, Half half)
{
    return FourierVector::from_modes(u.order(), [&](int n) {
        return (half == Half::plus) == (n > 0) ? u[n] : cplx{};
    });
}

/// Values sum_n u_n e^{inx_j} on the grid x_j = 2 pi j / M.
inline std::vector<cplx> synthesize(const FourierVector& u, std::size_t M)
{
    const auto N = static_cast<std::size_t>(u.order());
    if (M < 2 * N + 1)
        throw AliasingError("synthesize: need M >= 2N+1 samples, got " + std::to_string(M));
    std::vector<cplx> spectrum(M);
    for (std::size_t n = 1; n <= N; ++n) {
        spectrum[n] = u[static_cast<int>(n)];
        spectrum[M - n] = u[-static_cast<int>(n)];
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<cplx> samples(M);
    fft.inv(samples, spectrum);
    return samples;
}

/// Coefficients (1/M) sum_j f(x_j) e^{-inx_j}, 1 <= |n| <= N; the mean is dropped.
inline FourierVector analyze(std::span<const cplx> samples, int N, bool is_real = false)
{
    const std::size_t M = samples.size();
    if (N < 1)
        throw PreconditionError("analyze: truncation order must be positive");
    if (M < 2 * static_cast<std::size_t>(N) + 1)
        throw AliasingError("analyze: " + std::to_string(M) + " samples alias a band of order " +
                            std::to_string(N));
    Eigen::FFT<double> fft;
    std::vector<cplx> in(samples.begin(), samples.end());
    std::vector<cplx> spectrum(M);
    fft.fwd(spectrum, in);
    const double scale = 1.0 / static_cast<double>(M);
    return FourierVector::from_modes(
        N,
        [&](int n) {
            const std::size_t k = n > 0 ? static_cast<std::size_t>(n) : M - static_cast<std::size_t>(-n);
            return spectrum[k] * scale;
        },
        is_real);
}

} // namespace teich
