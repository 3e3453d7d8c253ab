#pragma once
//
// Truncated restricted Siegel disc: symmetric contractions Z: H_- -> H_+
// in orthonormal mode coordinates, the Sp action
//
//     Z  ->  (g Z + h)(h̄ Z + ḡ)^{-1},
//
// the period point of a composition operator, the invariant metric at 0,
// and the rank-one (Poincaré disc) specialization.
//

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "teich/circle_maps.hpp"
#include "teich/error.hpp"
#include "teich/io.hpp"
#include "teich/symplectic.hpp"

namespace teich {

class SiegelPoint {
public:
    SiegelPoint() = default;

    explicit SiegelPoint(CMatrix Z) : Z_(std::move(Z))
    {
        if (Z_.rows() != Z_.cols())
            throw PreconditionError("SiegelPoint: Z must be square");
    }

    static SiegelPoint origin(int N) { return SiegelPoint(CMatrix::Zero(N, N)); }

    int order() const { return static_cast<int>(Z_.rows()); }
    const CMatrix& matrix() const { return Z_; }

    std::string to_csv() const { return matrix_to_csv(Z_); }
    static SiegelPoint from_csv(const std::string& text) { return SiegelPoint(matrix_from_csv(text)); }

private:
    CMatrix Z_;
};

struct DiscMembership {
    double symmetric_defect = 0.0; ///< ||Z - Z^T||_F
    double min_eig = 1.0;          ///< smallest eigenvalue of I - Z Z*
    double hs_norm = 0.0;          ///< ||Z||_F

    double relative_symmetric_defect() const { return symmetric_defect / std::max(1.0, hs_norm); }
    bool inside(double eig_tol = 1e-10) const { return min_eig > eig_tol; }
};

inline DiscMembership disc_membership(const CMatrix& Z)
{
    DiscMembership d;
    d.symmetric_defect = (Z - Z.transpose()).norm();
    d.hs_norm = Z.norm();
    if (Z.size() > 0) {
        CMatrix H = CMatrix::Identity(Z.rows(), Z.rows()) - Z * Z.adjoint();
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(H, Eigen::EigenvaluesOnly);
        d.min_eig = eig.eigenvalues().minCoeff();
    }
    return d;
}

inline DiscMembership disc_membership(const SiegelPoint& Z) { return disc_membership(Z.matrix()); }

namespace detail {

/// h ḡ^{-1} computed as g h^T (I + h̄ h^T)^{-1}; the two agree on Sp.
inline CMatrix image_of_origin(const CMatrix& g, const CMatrix& h)
{
    const auto N = g.rows();
    const CMatrix hT = h.transpose();
    CMatrix K = CMatrix::Identity(N, N) + h.conjugate() * hT;
    K = 0.5 * (K + K.adjoint()).eval();
    const CMatrix rhs = g * hT;
    // Z K = rhs with K Hermitian positive definite:  K Z* = rhs*.
    return K.llt().solve(CMatrix(rhs.adjoint())).adjoint();
}

} // namespace detail

enum class PeriodFormula {
    /// Z = g h^T (I + h̄ h^T)^{-1}. Equal to h ḡ^{-1} on Sp, and the
    /// Hermitian factor has spectrum >= 1, so it never loses conditioning.
    symplectic,
    /// Z = h ḡ^{-1} by pivoted LU, rejected above the condition cap.
    direct,
};

struct PeriodPointOptions {
    PeriodFormula formula = PeriodFormula::symplectic;
    /// Leading block returned (0 keeps the full truncation).
    int out_order = 0;
    double condition_cap = 1e8;
};

struct PeriodPoint {
    SiegelPoint point;
    DiscMembership diagnostics;
    /// 1/rcond of ḡ for the direct formula; NaN otherwise.
    double g_condition = std::numeric_limits<double>::quiet_NaN();
};

/// Image of 0 under A, i.e. the Siegel-disc point h ḡ^{-1} of the operator.
inline PeriodPoint period_point(const SymplecticBlockMatrix& A, const PeriodPointOptions& opt = {})
{
    const int N = A.order();
    const int out = opt.out_order > 0 ? opt.out_order : N;
    if (out > N)
        throw PreconditionError("period_point: output order exceeds the truncation");

    PeriodPoint result;
    CMatrix Z;
    if (opt.formula == PeriodFormula::direct) {
        const CMatrix gbar = A.lower_right();
        Eigen::PartialPivLU<CMatrix> lu(gbar);
        const double rcond = lu.rcond();
        result.g_condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        if (!(result.g_condition <= opt.condition_cap))
            throw IllConditionedError("period_point: conj(g) condition estimate " +
                                      format_number(result.g_condition) + " exceeds cap " +
                                      format_number(opt.condition_cap) +
                                      " (map too far from identity for this truncation)");
        // Z ḡ = h  <=>  ḡ^T Z^T = h^T
        Z = gbar.transpose().partialPivLu().solve(CMatrix(A.h().transpose())).transpose();
    } else {
        Z = detail::image_of_origin(A.g(), A.h());
    }
    if (!Z.allFinite())
        throw IllConditionedError("period_point: non-finite result");
    result.point = SiegelPoint(Z.topLeftCorner(out, out));
    result.diagnostics = disc_membership(result.point);
    return result;
}

inline constexpr int default_period_padding = 2;

/// Period point of `map` at truncation N: the operator is built at
/// padding * N modes from padding * M samples and the leading N x N block
/// of Z is returned, keeping band-edge truncation away from the output.
inline PeriodPoint period_map(const CircleMap& map, int N, std::size_t M, int padding = default_period_padding,
                              unsigned threads = 1)
{
    if (padding < 1)
        throw PreconditionError("period_map: padding must be >= 1");
    const auto A = composition_matrix(map, padding * N, static_cast<std::size_t>(padding) * M, threads);
    PeriodPointOptions opt;
    opt.out_order = N;
    return period_point(A, opt);
}

enum class ActionFormula {
    /// A . Z = (A B_Z) . 0 with B_Z the boost [[P, Z P̄], [Z̄ P, P̄]], P = (I - Z Z*)^{-1/2},
    /// evaluated like the period point. Needs Z strictly inside the disc.
    symplectic,
    /// (g Z + h)(h̄ Z + ḡ)^{-1} by pivoted LU.
    direct,
};

/// (g Z + h)(h̄ Z + ḡ)^{-1}. For truncated composition operators ḡ is nearly
/// singular at the band edge, which is why the default avoids inverting it.
inline SiegelPoint moebius_action(const SymplecticBlockMatrix& A, const SiegelPoint& Z,
                                  ActionFormula formula = ActionFormula::symplectic)
{
    if (A.order() != Z.order())
        throw PreconditionError("moebius_action: operator and point have different truncation orders");
    const auto N = Z.order();
    const CMatrix& z = Z.matrix();
    if (formula == ActionFormula::direct) {
        const CMatrix num = A.g() * z + A.h();
        const CMatrix den = A.lower_left() * z + A.lower_right();
        Eigen::PartialPivLU<CMatrix> lu(den.transpose());
        if (!(lu.rcond() > 1e-14))
            throw IllConditionedError("moebius_action: singular denominator h̄ Z + ḡ");
        return SiegelPoint(lu.solve(CMatrix(num.transpose())).transpose());
    }
    CMatrix H = CMatrix::Identity(N, N) - z * z.adjoint();
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(H);
    if (!(eig.eigenvalues().minCoeff() > 0.0))
        throw DomainError("moebius_action: Z is not a strict contraction");
    const CMatrix P = eig.operatorInverseSqrt();
    const CMatrix Pbar = P.conjugate();
    const CMatrix g = A.g() * P + A.h() * z.conjugate() * P;
    const CMatrix h = A.g() * z * Pbar + A.h() * Pbar;
    const CMatrix out = detail::image_of_origin(g, h);
    if (!out.allFinite())
        throw IllConditionedError("moebius_action: non-finite result");
    return SiegelPoint(out);
}

/// Hermitian metric at 0: Tr(V* U) = Tr(conj(V) U) on symmetric tangent matrices.
/// Inputs are symmetrized after the defect check against `tol` (relative).
inline cplx metric_at_zero(const CMatrix& U, const CMatrix& V, double tol = 1e-8)
{
    if (U.rows() != V.rows() || U.cols() != V.cols() || U.rows() != U.cols())
        throw PreconditionError("metric_at_zero: tangent matrices must be square and equal in size");
    for (const CMatrix* m : {&U, &V}) {
        const double defect = (*m - m->transpose()).norm();
        if (defect > tol * std::max(1.0, m->norm()))
            throw SymmetryError("metric_at_zero: tangent matrix symmetry defect " + format_number(defect));
    }
    const CMatrix Us = 0.5 * (U + U.transpose());
    const CMatrix Vs = 0.5 * (V + V.transpose());
    return (Vs.adjoint() * Us).trace();
}

/// Disc action z -> (a z + b)/(conj(b) z + conj(a)) of SU(1,1).
inline cplx su11_orbit(cplx a, cplx b, cplx z)
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("su11_orbit: z must lie in the open unit disc");
    if (std::abs(std::norm(a) - std::norm(b) - 1.0) > 1e-10)
        throw PreconditionError("su11_orbit: |a|^2 - |b|^2 must equal 1");
    return (a * z + b) / (std::conj(b) * z + std::conj(a));
}

/// Poincaré metric u conj(v) / (1 - |z|^2)^2.
inline cplx hyperbolic_metric(cplx z, cplx u, cplx v)
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("hyperbolic_metric: z must lie in the open unit disc");
    const double s = 1.0 - std::norm(z);
    return u * std::conj(v) / (s * s);
}

} // namespace teich
