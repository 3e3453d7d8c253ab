#pragma once
//
// Weil-Petersson forms at the identity coset and the numerical pullback of
// the Siegel-disc metric through the period map.
//

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "teich/circle_maps.hpp"
#include "teich/error.hpp"
#include "teich/siegel.hpp"

namespace teich {

/// Real vector field with the psu(1,1) modes n in {-1, 0, 1} removed.
class TangentVector {
public:
    TangentVector() = default;

    explicit TangentVector(VectorField v) : field_(std::move(v))
    {
        double scale = 0.0;
        for (auto c : field_.coeffs())
            scale = std::max(scale, std::abs(c));
        const double tol = 1e-14 * std::max(scale, 1.0);
        if (std::abs(field_[0]) > tol || std::abs(field_[1]) > tol)
            throw PreconditionError("TangentVector: modes -1, 0, 1 must vanish (project_psu11 first)");
    }

    const VectorField& field() const { return field_; }
    int band() const { return field_.band(); }
    cplx operator[](int n) const { return field_[n]; }

private:
    VectorField field_;
};

/// Zeroes the psu(1,1) modes. Idempotent.
inline TangentVector project_psu11(const VectorField& v)
{
    std::vector<cplx> c(v.coeffs().begin(), v.coeffs().end());
    for (std::size_t n = 0; n < std::min<std::size_t>(2, c.size()); ++n)
        c[n] = {};
    return TangentVector(VectorField(std::move(c)));
}

struct WpForms {
    cplx h;       ///< 2 pi sum_{n>=2} n(n^2-1) u_n conj(v_n)
    double g;     ///< pi sum_{|n|>=2} |n|(n^2-1) u_n conj(v_n)
    double omega; ///< -i pi sum_{|n|>=2} n(n^2-1) u_n conj(v_n)
};

/// The three forms, each summed independently over the truncated band.
inline WpForms wp_forms(const TangentVector& u, const TangentVector& v)
{
    const int B = std::max(u.band(), v.band());
    cplx h{}, g{}, omega{};
    for (int n = 2; n <= B; ++n) {
        const double w = n * (static_cast<double>(n) * n - 1.0);
        h += w * u[n] * std::conj(v[n]);
    }
    for (int n = -B; n <= B; ++n) {
        if (n >= -1 && n <= 1)
            continue;
        const double w = static_cast<double>(n) * (static_cast<double>(n) * n - 1.0);
        const cplx term = u[n] * std::conj(v[n]);
        g += std::abs(w) * term;
        omega += w * term;
    }
    return {two_pi * h, (pi * g).real(), (cplx{0.0, -pi} * omega).real()};
}

struct TangentPeriodOptions {
    int padding = default_period_padding;
    /// Replace the central difference by (4 U(eps/2) - U(eps)) / 3.
    bool richardson = false;
    unsigned threads = 1;
};

/// Central difference (Z(flow(u, eps)) - Z(flow(u, -eps))) / (2 eps) of the period map at the identity.
inline CMatrix tangent_period(const TangentVector& u, double eps, int N, std::size_t M,
                              const TangentPeriodOptions& opt = {})
{
    if (!(eps > 0.0))
        throw PreconditionError("tangent_period: eps must be positive");
    auto central = [&](double e) -> CMatrix {
        const auto plus = period_map(flow_map(u.field(), e), N, M, opt.padding, opt.threads);
        const auto minus = period_map(flow_map(u.field(), -e), N, M, opt.padding, opt.threads);
        return (plus.point.matrix() - minus.point.matrix()) / (2.0 * e);
    };
    const CMatrix U = central(eps);
    if (!opt.richardson)
        return U;
    return (4.0 * central(0.5 * eps) - U) / 3.0;
}

/// Tr(conj(U) U) / h_WP(u, u), with U the tangent period matrix of u.
inline double pullback_ratio(const TangentVector& u, double eps, int N, std::size_t M,
                             const TangentPeriodOptions& opt = {})
{
    const double h = wp_forms(u, u).h.real();
    if (!(h > 0.0))
        throw PreconditionError("pullback_ratio: zero tangent vector");
    const CMatrix U = tangent_period(u, eps, N, M, opt);
    return metric_at_zero(U, U, 1e-6).real() / h;
}

struct PullbackRow {
    int mode = 0;
    double h_wp = 0.0;
    double trace = 0.0;
    double ratio = 0.0;
};

struct PullbackExperiment {
    std::vector<PullbackRow> rows;      ///< at eps
    std::vector<PullbackRow> rows_half; ///< at eps / 2
    double constant = 0.0;              ///< mean ratio at eps
    double constant_half = 0.0;         ///< mean ratio at eps / 2
    double richardson_constant = 0.0;   ///< (4 C(eps/2) - C(eps)) / 3

    /// max_{i,j} |r_i - r_j| / min(r_i, r_j) at eps.
    double max_pairwise_deviation() const
    {
        double worst = 0.0;
        for (const auto& a : rows)
            for (const auto& b : rows)
                worst = std::max(worst, std::abs(a.ratio - b.ratio) / std::min(a.ratio, b.ratio));
        return worst;
    }

    double step_halving_shift() const { return std::abs(constant_half - constant) / constant; }
};

/// Runs u = cos(n x) for each mode, at eps and eps/2. Mode cases run
/// concurrently and are assembled in input order.
inline PullbackExperiment run_pullback_experiment(const std::vector<int>& modes, int N, std::size_t M, double eps,
                                                  int padding = default_period_padding, bool parallel = true)
{
    if (modes.empty())
        throw PreconditionError("run_pullback_experiment: no modes");
    auto one = [&](int n, double e) {
        if (n < 2)
            throw PreconditionError("run_pullback_experiment: modes must be >= 2");
        const TangentVector u(VectorField::cosine(n));
        TangentPeriodOptions opt;
        opt.padding = padding;
        const CMatrix U = tangent_period(u, e, N, M, opt);
        PullbackRow row;
        row.mode = n;
        row.h_wp = wp_forms(u, u).h.real();
        row.trace = metric_at_zero(U, U, 1e-6).real();
        row.ratio = row.trace / row.h_wp;
        return row;
    };

    PullbackExperiment out;
    for (double e : {eps, 0.5 * eps}) {
        auto& rows = e == eps ? out.rows : out.rows_half;
        std::vector<std::future<PullbackRow>> jobs;
        for (int n : modes)
            jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred, one, n, e));
        for (auto& j : jobs)
            rows.push_back(j.get());
    }
    auto mean = [](const std::vector<PullbackRow>& rows) {
        double s = 0.0;
        for (const auto& r : rows)
            s += r.ratio;
        return s / static_cast<double>(rows.size());
    };
    out.constant = mean(out.rows);
    out.constant_half = mean(out.rows_half);
    out.richardson_constant = (4.0 * out.constant_half - out.constant) / 3.0;
    return out;
}

} // namespace teich
