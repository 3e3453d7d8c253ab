#pragma once
//
// Orientation-preserving circle homeomorphisms, represented through their
// lifts eta: R -> R with eta(x + 2 pi) = eta(x) + 2 pi.
//
// Every map is evaluated through its periodic displacement
// d(x) = eta(x) - x. Differences of the lift are formed as
// t + d(x + t) - d(x), which keeps the identity and rotations exact.
//

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "teich/error.hpp"
#include "teich/fourier.hpp"

namespace teich {

/// Real trigonometric polynomial v(x) = sum_{|n|<=B} v_n e^{inx}, v_{-n} = conj(v_n).
/// Only v_0..v_B are stored; v_0 must be real.
class VectorField {
public:
    VectorField() : coeffs_(1) {}

    explicit VectorField(std::vector<cplx> nonnegative) : coeffs_(std::move(nonnegative))
    {
        if (coeffs_.empty())
            coeffs_.push_back({});
        if (std::abs(coeffs_[0].imag()) > 1e-14 * std::max(1.0, std::abs(coeffs_[0])))
            throw PreconditionError("VectorField: mode 0 must be real");
        coeffs_[0] = coeffs_[0].real();
    }

    static VectorField constant(double c) { return VectorField({cplx{c, 0.0}}); }

    /// cos(n x) has v_{+-n} = 1/2.
    static VectorField cosine(int n, double amplitude = 1.0)
    {
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
        if (n == 0)
            c[0] = amplitude;
        else
            c[static_cast<std::size_t>(n)] = 0.5 * amplitude;
        return VectorField(std::move(c));
    }

    /// sin(n x) has v_n = 1/(2i).
    static VectorField sine(int n, double amplitude = 1.0)
    {
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1);
        if (n > 0)
            c[static_cast<std::size_t>(n)] = cplx{0.0, -0.5 * amplitude};
        return VectorField(std::move(c));
    }

    int band() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    cplx operator[](int n) const
    {
        const int a = n < 0 ? -n : n;
        if (a > band())
            return {};
        return n < 0 ? std::conj(coeffs_[static_cast<std::size_t>(a)]) : coeffs_[static_cast<std::size_t>(a)];
    }

    double operator()(double x) const
    {
        double s = coeffs_[0].real();
        for (std::size_t n = 1; n < coeffs_.size(); ++n)
            s += 2.0 * (coeffs_[n] * std::polar(1.0, static_cast<double>(n) * x)).real();
        return s;
    }

    /// Max |v| over a uniform grid of `samples` points.
    double sup_norm(std::size_t samples = 4096) const
    {
        double m = 0.0;
        for (std::size_t j = 0; j < samples; ++j)
            m = std::max(m, std::abs((*this)(two_pi * static_cast<double>(j) / static_cast<double>(samples))));
        return m;
    }

    VectorField scaled(double s) const
    {
        auto c = coeffs_;
        for (auto& x : c)
            x *= s;
        return VectorField(std::move(c));
    }

private:
    std::vector<cplx> coeffs_;
};

/// Boundary action of z -> (a z + b)/(conj(b) z + conj(a)), |a|^2 - |b|^2 = 1.
struct MoebiusMap {
    cplx a{1.0, 0.0};
    cplx b{};
    /// Whole turns added to the principal lift, so compositions of
    /// rotations keep the lift that composition of lifts produces.
    int turns = 0;

    double displacement(double x) const
    {
        // e^{-ix} (a e^{ix} + b)/(conj(b) e^{ix} + conj(a)) = w / conj(w), w = a + b e^{-ix}.
        const double principal = std::arg(a) + std::arg(1.0 + (b / a) * std::polar(1.0, -x));
        return 2.0 * principal + two_pi * turns;
    }

    /// Returns a copy whose lift passes within pi of `target` at `x`.
    MoebiusMap with_lift_through(double x, double target) const
    {
        MoebiusMap m = *this;
        const double here = x + displacement(x);
        m.turns += static_cast<int>(std::lround((target - here) / two_pi));
        return m;
    }

    double determinant() const { return std::norm(a) - std::norm(b); }
};

/// Time-t flow of dx/ds = v(x), integrated by classical RK4 with `steps` substeps.
struct FlowMap {
    VectorField field;
    double time = 0.0;
    int steps = 1;

    double displacement(double x0) const
    {
        const double h = time / steps;
        double x = x0;
        for (int k = 0; k < steps; ++k) {
            const double k1 = field(x);
            const double k2 = field(x + 0.5 * h * k1);
            const double k3 = field(x + 0.5 * h * k2);
            const double k4 = field(x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return x - x0;
    }
};

/// Strictly increasing lift samples eta(x_j), x_j = 2 pi j / n, interpolated
/// by a monotone (Fritsch-Butland) cubic Hermite scheme.
class SampledLift {
public:
    explicit SampledLift(std::vector<double> values) : values_(std::move(values))
    {
        const std::size_t n = values_.size();
        if (n < 4)
            throw PreconditionError("SampledLift: need at least 4 nodes");
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (!(values_[j + 1] > values_[j]))
                throw MonotonicityError("SampledLift: samples not strictly increasing at node " +
                                        std::to_string(j + 1));
        if (!(values_[0] + two_pi > values_[n - 1]))
            throw MonotonicityError("SampledLift: samples do not advance by less than 2 pi per turn");

        step_ = two_pi / static_cast<double>(n);
        std::vector<double> secant(n);
        for (std::size_t j = 0; j < n; ++j)
            secant[j] = (node_value(static_cast<std::ptrdiff_t>(j) + 1) - values_[j]) / step_;
        slopes_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double left = secant[(j + n - 1) % n];
            const double right = secant[j];
            slopes_[j] = 2.0 * left * right / (left + right);
        }
    }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    /// eta at node j for any integer j (periodic extension).
    double node_value(std::ptrdiff_t j) const
    {
        const auto n = static_cast<std::ptrdiff_t>(values_.size());
        std::ptrdiff_t q = j / n;
        std::ptrdiff_t r = j % n;
        if (r < 0) {
            r += n;
            --q;
        }
        return values_[static_cast<std::size_t>(r)] + two_pi * static_cast<double>(q);
    }

    double lift(double x) const
    {
        const double turns = std::floor(x / two_pi);
        const double r = x - two_pi * turns;
        const auto n = values_.size();
        auto j = static_cast<std::size_t>(r / step_);
        if (j >= n)
            j = n - 1;
        const double s = (r - static_cast<double>(j) * step_) / step_;
        const double y0 = values_[j];
        const double y1 = node_value(static_cast<std::ptrdiff_t>(j) + 1);
        const double m0 = slopes_[j] * step_;
        const double m1 = slopes_[(j + 1) % n] * step_;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
                             (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
        return value + two_pi * turns;
    }

    double displacement(double x) const { return lift(x) - x; }

private:
    std::vector<double> values_;
    std::vector<double> slopes_;
    double step_ = 0.0;
};

class CircleMap;

/// outer o inner, evaluated exactly by chaining the two lifts.
struct CompositeMap {
    std::shared_ptr<const CircleMap> outer;
    std::shared_ptr<const CircleMap> inner;
};

using MapNode = std::variant<MoebiusMap, FlowMap, SampledLift, CompositeMap>;

/// Immutable handle to a circle map. Copies share the underlying node.
class CircleMap {
public:
    CircleMap();
    CircleMap(MoebiusMap m);
    CircleMap(FlowMap f);
    CircleMap(SampledLift s);
    CircleMap(CompositeMap c);

    static CircleMap identity() { return CircleMap(); }
    static CircleMap rotation(double theta);
    /// Requires |a|^2 - |b|^2 = 1 within 1e-12.
    static CircleMap moebius(cplx a, cplx b);

    double displacement(double x) const;
    double operator()(double x) const { return x + displacement(x); }
    std::vector<double> displacements(std::span<const double> xs) const;

    const MapNode& node() const { return *node_; }
    template <class T>
    const T* get_if() const { return std::get_if<T>(node_.get()); }

private:
    std::shared_ptr<const MapNode> node_;
};

inline CircleMap::CircleMap() : CircleMap(MoebiusMap{}) {}
inline CircleMap::CircleMap(MoebiusMap m) : node_(std::make_shared<const MapNode>(m)) {}
inline CircleMap::CircleMap(FlowMap f) : node_(std::make_shared<const MapNode>(std::move(f))) {}
inline CircleMap::CircleMap(SampledLift s) : node_(std::make_shared<const MapNode>(std::move(s))) {}
inline CircleMap::CircleMap(CompositeMap c) : node_(std::make_shared<const MapNode>(std::move(c))) {}

inline CircleMap CircleMap::rotation(double theta)
{
    MoebiusMap m{std::polar(1.0, 0.5 * theta), {}, 0};
    return CircleMap(m.with_lift_through(0.0, theta));
}

inline CircleMap CircleMap::moebius(cplx a, cplx b)
{
    MoebiusMap m{a, b, 0};
    if (std::abs(m.determinant() - 1.0) > 1e-12)
        throw PreconditionError("moebius: |a|^2 - |b|^2 must equal 1");
    return CircleMap(m);
}

inline double CircleMap::displacement(double x) const
{
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CompositeMap>) {
                const double d_inner = m.inner->displacement(x);
                return d_inner + m.outer->displacement(x + d_inner);
            } else {
                return m.displacement(x);
            }
        },
        *node_);
}

inline std::vector<double> CircleMap::displacements(std::span<const double> xs) const
{
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j)
        out[j] = displacement(xs[j]);
    return out;
}

/// Uniform grid x_j = 2 pi j / n.
inline std::vector<double> uniform_grid(std::size_t n)
{
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = two_pi * static_cast<double>(j) / static_cast<double>(n);
    return x;
}

/// Throws MonotonicityError unless the lift increases strictly over `nodes` grid points.
inline void check_monotone(const CircleMap& map, std::size_t nodes = 4096)
{
    const auto xs = uniform_grid(nodes);
    const auto d = map.displacements(xs);
    const double h = two_pi / static_cast<double>(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        const double next = j + 1 < nodes ? d[j + 1] : d[0];
        if (!(h + next - d[j] > 0.0))
            throw MonotonicityError("circle map lift is not increasing near x = " + std::to_string(xs[j]));
    }
}

namespace detail {

inline std::array<cplx, 4> moebius_matrix(const MoebiusMap& m)
{
    return {m.a, m.b, std::conj(m.b), std::conj(m.a)};
}

inline std::array<cplx, 4> mat_mul(const std::array<cplx, 4>& p, const std::array<cplx, 4>& q)
{
    return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3],
            p[2] * q[0] + p[3] * q[2], p[2] * q[1] + p[3] * q[3]};
}

} // namespace detail

/// f o g. Moebius pairs compose in closed form; anything else is chained exactly.
inline CircleMap compose(const CircleMap& f, const CircleMap& g)
{
    const auto* mf = f.get_if<MoebiusMap>();
    const auto* mg = g.get_if<MoebiusMap>();
    if (mf && mg) {
        const auto p = detail::mat_mul(detail::moebius_matrix(*mf), detail::moebius_matrix(*mg));
        MoebiusMap m{p[0], p[1], 0};
        return CircleMap(m.with_lift_through(0.0, f(g(0.0))));
    }
    return CircleMap(CompositeMap{std::make_shared<const CircleMap>(f), std::make_shared<const CircleMap>(g)});
}

/// Preimage of `target` under a sampled lift, by bracketing on the nodes and bisection.
inline double sampled_preimage(const SampledLift& lift, double target)
{
    const auto n = static_cast<std::ptrdiff_t>(lift.size());
    const double turns = std::floor((target - lift.node_value(0)) / two_pi);
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(turns) * n;
    std::ptrdiff_t hi = lo + n;
    if (!(lift.node_value(lo) <= target && target <= lift.node_value(hi)))
        throw InversionError("sampled_preimage: failed to bracket target");
    while (hi - lo > 1) {
        const std::ptrdiff_t mid = lo + (hi - lo) / 2;
        (lift.node_value(mid) <= target ? lo : hi) = mid;
    }
    const double h = two_pi / static_cast<double>(n);
    double a = h * static_cast<double>(lo);
    double b = h * static_cast<double>(hi);
    for (int it = 0; it < 200 && b - a > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        (lift.lift(mid) <= target ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

/// Inverse map: closed form for Moebius, reversed time for flows, bisection
/// per node for sampled lifts.
inline CircleMap invert(const CircleMap& f)
{
    return std::visit(
        [&](const auto& m) -> CircleMap {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MoebiusMap>) {
                MoebiusMap inv{std::conj(m.a), -m.b, 0};
                return CircleMap(inv.with_lift_through(f(0.0), 0.0));
            } else if constexpr (std::is_same_v<T, FlowMap>) {
                return CircleMap(FlowMap{m.field, -m.time, m.steps});
            } else if constexpr (std::is_same_v<T, SampledLift>) {
                const auto xs = uniform_grid(m.size());
                std::vector<double> values(xs.size());
                for (std::size_t j = 0; j < xs.size(); ++j)
                    values[j] = sampled_preimage(m, xs[j]);
                return CircleMap(SampledLift(std::move(values)));
            } else {
                return compose(invert(*m.inner), invert(*m.outer));
            }
        },
        f.node());
}

/// Samples `f` on `nodes` grid points into a SampledLift.
inline CircleMap resample(const CircleMap& f, std::size_t nodes = 4096)
{
    const auto xs = uniform_grid(nodes);
    std::vector<double> values(nodes);
    for (std::size_t j = 0; j < nodes; ++j)
        values[j] = f(xs[j]);
    return CircleMap(SampledLift(std::move(values)));
}

inline constexpr int default_flow_steps_per_unit_time = 64;

/// Time-t flow of v. `steps` = 0 picks 64 substeps per unit time (at least one).
/// Throws MonotonicityError if the integrated lift is not increasing on 4096 nodes.
inline CircleMap flow_map(const VectorField& v, double t, int steps = 0)
{
    if (steps < 0)
        throw PreconditionError("flow_map: steps must be non-negative");
    if (steps == 0)
        steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * default_flow_steps_per_unit_time)));
    CircleMap map(FlowMap{v, t, steps});
    check_monotone(map);
    return map;
}

/// Uniform quasisymmetry probe grid: x_i = 2 pi i / nx and t_j = t_max j / nt, j = 1..nt.
struct QsGrid {
    std::vector<double> xs;
    std::vector<double> ts;

    static QsGrid uniform(std::size_t nx, std::size_t nt, double t_max = pi)
    {
        QsGrid g{uniform_grid(nx), std::vector<double>(nt)};
        for (std::size_t j = 0; j < nt; ++j)
            g.ts[j] = t_max * static_cast<double>(j + 1) / static_cast<double>(nt);
        return g;
    }
};

/// Largest max(r, 1/r) of r = (eta(x+t) - eta(x)) / (eta(x) - eta(x-t)) over the grid.
/// The admissible step range is |t| <= t_bound (pi for a 2 pi-periodic lift).
inline double qs_ratio(const CircleMap& map, const QsGrid& grid, double t_bound = pi)
{
    double worst = 1.0;
    for (double t : grid.ts) {
        if (t == 0.0 || std::abs(t) > t_bound)
            throw PreconditionError("qs_ratio: steps must satisfy 0 < |t| <= bound");
        for (double x : grid.xs) {
            const double d0 = map.displacement(x);
            const double ahead = t + (map.displacement(x + t) - d0);
            const double behind = t + (d0 - map.displacement(x - t));
            if (!(ahead / t > 0.0) || !(behind / t > 0.0))
                throw MonotonicityError("qs_ratio: non-increasing lift encountered");
            const double r = ahead / behind;
            worst = std::max(worst, std::max(r, 1.0 / r));
        }
    }
    return worst;
}

/// The PSU(1,1) element sending the angles p_k to q_k (k = 1, 2, 3), with
/// its lift passing through (p_1, q_1).
inline MoebiusMap fit_moebius_three_points(const std::array<double, 3>& p, const std::array<double, 3>& q)
{
    auto points = [](const std::array<double, 3>& a) {
        return std::array<cplx, 3>{std::polar(1.0, a[0]), std::polar(1.0, a[1]), std::polar(1.0, a[2])};
    };
    const auto zp = points(p);
    const auto zq = points(q);
    for (const auto* z : {&zp, &zq})
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (std::abs((*z)[i] - (*z)[j]) < 1e-10)
                    throw DegenerateError("fit_moebius_three_points: coincident points");

    // S sends (z1, z2, z3) to (0, 1, infinity).
    auto cross = [](const std::array<cplx, 3>& z) {
        const cplx u = z[1] - z[2];
        const cplx w = z[1] - z[0];
        return std::array<cplx, 4>{u, -z[0] * u, w, -z[2] * w};
    };
    const auto sp = cross(zp);
    const auto sq = cross(zq);
    const std::array<cplx, 4> sq_inv{sq[3], -sq[1], -sq[2], sq[0]};
    auto t = detail::mat_mul(sq_inv, sp);
    const cplx scale = std::sqrt(t[0] * t[3] - t[1] * t[2]);
    for (auto& e : t)
        e /= scale;

    const double tol = 1e-8 * (std::abs(t[0]) + std::abs(t[1]));
    if (std::abs(t[3] - std::conj(t[0])) > tol || std::abs(t[2] - std::conj(t[1])) > tol ||
        !(std::abs(t[0]) > std::abs(t[1])))
        throw DegenerateError("fit_moebius_three_points: triples are not in the same cyclic order");

    MoebiusMap m{0.5 * (t[0] + std::conj(t[3])), 0.5 * (t[1] + std::conj(t[2])), 0};
    const double det = m.determinant();
    m.a /= std::sqrt(det);
    m.b /= std::sqrt(det);
    return m.with_lift_through(p[0], q[0]);
}

/// Post-composes `map` with the Moebius map that restores -1, -i and 1.
inline CircleMap normalize_three_points(const CircleMap& map)
{
    const std::array<double, 3> targets{pi, 1.5 * pi, two_pi};
    const std::array<double, 3> images{map(targets[0]), map(targets[1]), map(targets[2])};
    return compose(CircleMap(fit_moebius_three_points(images, targets)), map);
}

} // namespace teich
