#pragma once
//
// Beltrami coefficients on the unit disc: harmonic Beltrami differentials
// mu = (1 - |z|^2)^2 conj(phi), their hyperbolic L^2 norms, the
// Weil-Petersson pairing, and dilatation constants of quasiconformal maps.
//
// Integrals over the disc use a polar grid with Gauss-Legendre nodes in
// s = r^2 (so d^2z = (1/2) ds dtheta) and a uniform angular rule.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <gsl/gsl_integration.h>

#include "teich/error.hpp"
#include "teich/fourier.hpp"
#include "teich/io.hpp"

namespace teich {

/// phi(z) = sum_k c_k z^k.
struct HolomorphicCoeffs {
    std::vector<cplx> c;

    static HolomorphicCoeffs monomial(int k, cplx scale = 1.0)
    {
        HolomorphicCoeffs p;
        p.c.assign(static_cast<std::size_t>(k) + 1, cplx{});
        p.c.back() = scale;
        return p;
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    cplx operator()(cplx z) const
    {
        cplx acc{};
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }
};

class PolarGrid {
public:
    PolarGrid() = default;

    /// `radial` Gauss-Legendre nodes in r^2 and `angular` uniform angles.
    PolarGrid(std::size_t radial, std::size_t angular) : n_theta_(angular)
    {
        if (radial < 1 || angular < 1)
            throw PreconditionError("PolarGrid: node counts must be positive");
        std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
            gsl_integration_glfixed_table_alloc(radial), &gsl_integration_glfixed_table_free);
        if (!table)
            throw Error("PolarGrid: Gauss-Legendre table allocation failed");
        radii_.resize(radial);
        weights_.resize(radial);
        for (std::size_t i = 0; i < radial; ++i) {
            double s = 0.0, w = 0.0;
            gsl_integration_glfixed_point(0.0, 1.0, i, &s, &w, table.get());
            radii_[i] = std::sqrt(s);
            weights_[i] = 0.5 * w;
        }
        // GSL orders nodes symmetrically from the centre outward; keep them radially sorted.
        std::vector<std::size_t> order(radial);
        for (std::size_t i = 0; i < radial; ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return radii_[a] < radii_[b]; });
        std::vector<double> r(radial), w(radial);
        for (std::size_t i = 0; i < radial; ++i) {
            r[i] = radii_[order[i]];
            w[i] = weights_[order[i]];
        }
        radii_ = std::move(r);
        weights_ = std::move(w);
    }

    std::size_t radial() const { return radii_.size(); }
    std::size_t angular() const { return n_theta_; }
    std::size_t size() const { return radial() * angular(); }
    double radius(std::size_t i) const { return radii_[i]; }
    double angle(std::size_t j) const { return two_pi * static_cast<double>(j) / static_cast<double>(n_theta_); }
    /// Area weight of node (i, j): radial weight of int f r dr times 2 pi / n_theta.
    double weight(std::size_t i) const { return weights_[i] * two_pi / static_cast<double>(n_theta_); }
    cplx point(std::size_t i, std::size_t j) const { return std::polar(radii_[i], angle(j)); }

    friend bool operator==(const PolarGrid& a, const PolarGrid& b)
    {
        return a.n_theta_ == b.n_theta_ && a.radii_ == b.radii_;
    }

private:
    std::vector<double> radii_;
    std::vector<double> weights_;
    std::size_t n_theta_ = 0;
};

/// Samples of mu(z) on a polar grid, radial-major.
class BeltramiField {
public:
    BeltramiField() = default;

    BeltramiField(PolarGrid grid, std::vector<cplx> samples) : grid_(std::move(grid)), samples_(std::move(samples))
    {
        if (samples_.size() != grid_.size())
            throw GridMismatchError("BeltramiField: sample count does not match the grid");
        for (auto m : samples_)
            sup_ = std::max(sup_, std::abs(m));
    }

    template <class F>
    static BeltramiField sample(const PolarGrid& grid, F&& mu)
    {
        std::vector<cplx> s(grid.size());
        for (std::size_t i = 0; i < grid.radial(); ++i)
            for (std::size_t j = 0; j < grid.angular(); ++j)
                s[i * grid.angular() + j] = mu(grid.point(i, j));
        return BeltramiField(grid, std::move(s));
    }

    const PolarGrid& grid() const { return grid_; }
    std::span<const cplx> samples() const { return samples_; }
    cplx at(std::size_t i, std::size_t j) const { return samples_[i * grid_.angular() + j]; }
    double sup_norm() const { return sup_; }
    bool in_unit_ball() const { return sup_ < 1.0; }

    /// Lines `r,theta,re,im`.
    std::string to_csv() const
    {
        std::string out;
        for (std::size_t i = 0; i < grid_.radial(); ++i)
            for (std::size_t j = 0; j < grid_.angular(); ++j) {
                const cplx m = at(i, j);
                out += format_number(grid_.radius(i)) + ',' + format_number(grid_.angle(j)) + ',' +
                       format_number(m.real()) + ',' + format_number(m.imag()) + '\n';
            }
        return out;
    }

    /// Reads `r,theta,re,im` lines; coordinates must match `grid` node for node.
    static BeltramiField from_csv(const std::string& text, const PolarGrid& grid)
    {
        std::vector<cplx> s;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            const auto row = parse_csv_row(line);
            if (row.size() != 4)
                throw ConfigError("BeltramiField CSV: expected r,theta,re,im");
            const std::size_t k = s.size();
            if (k >= grid.size())
                throw GridMismatchError("BeltramiField CSV: more rows than grid nodes");
            const std::size_t i = k / grid.angular(), j = k % grid.angular();
            if (std::abs(row[0] - grid.radius(i)) > 1e-12 || std::abs(row[1] - grid.angle(j)) > 1e-12)
                throw GridMismatchError("BeltramiField CSV: node coordinates do not match the grid");
            s.emplace_back(row[2], row[3]);
        }
        return BeltramiField(grid, std::move(s));
    }

private:
    PolarGrid grid_;
    std::vector<cplx> samples_;
    double sup_ = 0.0;
};

/// (1 - |z|^2)^2 conj(phi(z)).
inline cplx harmonic_beltrami_at(const HolomorphicCoeffs& phi, cplx z)
{
    const double s = 1.0 - std::norm(z);
    return s * s * std::conj(phi(z));
}

inline BeltramiField harmonic_beltrami(const HolomorphicCoeffs& phi, const PolarGrid& grid)
{
    return BeltramiField::sample(grid, [&](cplx z) { return harmonic_beltrami_at(phi, z); });
}

namespace detail {

/// sum over nodes of f(i, j) * weight * 4 / (1 - r^2)^2, plus the outermost shell's share.
template <class F>
std::pair<cplx, cplx> hyperbolic_quadrature(const PolarGrid& grid, F&& f)
{
    cplx total{}, outer{};
    for (std::size_t i = 0; i < grid.radial(); ++i) {
        const double s = 1.0 - grid.radius(i) * grid.radius(i);
        const double rho = 4.0 / (s * s);
        cplx shell{};
        for (std::size_t j = 0; j < grid.angular(); ++j)
            shell += f(i, j);
        shell *= grid.weight(i) * rho;
        total += shell;
        if (i + 1 == grid.radial())
            outer = shell;
    }
    return {total, outer};
}

} // namespace detail

struct HyperbolicNorm {
    double value = 0.0; ///< ||mu||_2^2 = int |mu|^2 rho d^2z
    /// Set when the outermost shell carries more than 1e-3 of the total,
    /// i.e. |mu|^2 rho does not decay toward the boundary.
    bool divergent = false;
};

/// Squared hyperbolic L^2 norm, rho = 4 (1 - |z|^2)^{-2}.
inline HyperbolicNorm hyperbolic_l2(const BeltramiField& mu)
{
    const auto [total, outer] =
        detail::hyperbolic_quadrature(mu.grid(), [&](std::size_t i, std::size_t j) { return cplx{std::norm(mu.at(i, j))}; });
    HyperbolicNorm n;
    n.value = total.real();
    n.divergent = !std::isfinite(n.value) || outer.real() > 1e-3 * n.value;
    return n;
}

/// <mu, nu>_WP = int mu conj(nu) rho d^2z.
inline cplx wp_pairing(const BeltramiField& mu, const BeltramiField& nu)
{
    if (!(mu.grid() == nu.grid()))
        throw GridMismatchError("wp_pairing: fields live on different grids");
    return detail::hyperbolic_quadrature(mu.grid(), [&](std::size_t i, std::size_t j) {
               return mu.at(i, j) * std::conj(nu.at(i, j));
           }).first;
}

struct Dilatation {
    cplx mu;
    double k = 0.0;
    double K = 0.0;
};

/// (1 + k) / (1 - k).
inline double max_dilatation(double k)
{
    if (!(k >= 0.0 && k < 1.0))
        throw PreconditionError("max_dilatation: need 0 <= k < 1");
    return (1.0 + k) / (1.0 - k);
}

/// Dilatation of f(z) = alpha z + beta conj(z): mu = beta/alpha, K = (|alpha|+|beta|)/(|alpha|-|beta|).
inline Dilatation linear_dilatation(cplx alpha, cplx beta)
{
    const double a = std::abs(alpha), b = std::abs(beta);
    if (!(b < a))
        throw PreconditionError("linear_dilatation: need |beta| < |alpha| (not quasiconformal otherwise)");
    return {beta / alpha, b / a, (a + b) / (a - b)};
}

struct GridMapBeltrami {
    BeltramiField mu;
    double sup_norm = 0.0;
    bool quasiconformal = false; ///< sup |mu| < 1
};

/// mu = (d f / d zbar) / (d f / d z) pointwise. Throws VanishingDerivativeError
/// with the node index where |d f / d z| <= zero_tol.
inline GridMapBeltrami beltrami_of_grid_map(const PolarGrid& grid, std::span<const cplx> dz, std::span<const cplx> dzbar,
                                            double zero_tol = 1e-12)
{
    if (dz.size() != grid.size() || dzbar.size() != grid.size())
        throw GridMismatchError("beltrami_of_grid_map: derivative samples do not match the grid");
    std::vector<cplx> mu(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(dz[k]) <= zero_tol) {
            const std::size_t i = k / grid.angular(), j = k % grid.angular();
            throw VanishingDerivativeError("beltrami_of_grid_map: d f/dz vanishes at r = " + format_number(grid.radius(i)) +
                                               ", theta = " + format_number(grid.angle(j)),
                                           i, j);
        }
        mu[k] = dzbar[k] / dz[k];
    }
    GridMapBeltrami out{BeltramiField(grid, std::move(mu)), 0.0, false};
    out.sup_norm = out.mu.sup_norm();
    out.quasiconformal = out.sup_norm < 1.0;
    return out;
}

} // namespace teich
