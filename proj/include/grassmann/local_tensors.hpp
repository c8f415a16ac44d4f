#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "grassmann/subspace.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// Pointwise geometric tensors on a parametrized family of subspaces.
//
// Conventions (fixed once, see the module docs):
//   Q_ab = Psi^dag dP_a dP_b Psi          (m x m, moving-frame basis)
//   G_ab = (Q_ab + Q_ba) / 2              Hermitian, symmetric in (a, b)
//   F_ab = i (Q_ab - Q_ba)                Hermitian, antisymmetric in (a, b)
//   A_a  = i Psi^dag d_a Psi              Hermitian, gauge dependent
// so that Q = G - (i/2) F, and the curvature of A reproduces F through
// F = d_a A_b - d_b A_a - i [A_a, A_b].
// ---------------------------------------------------------------------------

/// A smooth map from d real parameters to n x m orthonormal frames. When
/// frame_derivative is absent, derivatives fall back to central differences
/// with step fd_step (optionally scaled by 1 + |x|). The frame map itself
/// must be smooth for the connection A to make sense; the projector-based
/// tensors only need the subspace path to be smooth.
struct ParamFamily {
    int dim_param = 0;
    std::function<CMatrix(const RVector&)> frame_at;
    std::function<CMatrix(const RVector&, int)> frame_derivative;  // optional
    double fd_step = 1e-5;
    bool fd_step_relative = true;  // h = fd_step * (1 + |x|)
    bool check_curvature_consistency = true;

    double step_at(const RVector& x) const {
        return fd_step_relative ? fd_step * (1.0 + x.norm()) : fd_step;
    }
};

/// Pointwise tensors of a family at one parameter point.
struct TensorSample {
    RVector x;
    int n = 0, m = 0, d = 0;
    std::vector<CMatrix> A;                  // [d], m x m Hermitian
    std::vector<std::vector<CMatrix>> Q;     // [d][d], m x m
    std::vector<std::vector<CMatrix>> G;     // [d][d], m x m Hermitian
    std::vector<std::vector<CMatrix>> F;     // [d][d], m x m Hermitian
    double fd_tol = 1e-6;                    // max(1e-6, 10 h^2)
};

namespace detail {

inline CMatrix family_frame(const ParamFamily& fam, const RVector& x) {
    CMatrix f = fam.frame_at(x);
    CMatrix gram = f.adjoint() * f;
    double err = (gram - CMatrix::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-8)
        throw NotOrthonormal("family frame deviates from orthonormality by " +
                             std::to_string(err));
    return f;
}

inline RVector shifted(const RVector& x, int alpha, double h) {
    RVector y = x;
    y(alpha) += h;
    return y;
}

/// d_a Psi, analytic when supplied, otherwise central difference.
inline CMatrix frame_derivative(const ParamFamily& fam, const RVector& x, int alpha) {
    if (fam.frame_derivative) return fam.frame_derivative(x, alpha);
    double h = fam.step_at(x);
    return (fam.frame_at(shifted(x, alpha, h)) - fam.frame_at(shifted(x, alpha, -h))) /
           (2.0 * h);
}

/// A_a = i Psi^dag d_a Psi, Hermitized.
inline CMatrix connection_at(const ParamFamily& fam, const RVector& x, const CMatrix& frame,
                             int alpha) {
    CMatrix a = Complex(0.0, 1.0) * (frame.adjoint() * frame_derivative(fam, x, alpha));
    return (a + a.adjoint()) / 2.0;
}

}  // namespace detail

/// Curvature of the Wilczek-Zee connection from A alone:
/// F_ab = d_a A_b - d_b A_a - i [A_a, A_b], with the outer derivatives taken
/// by central differences. This is the independent route used to cross-check
/// the Q-split curvature.
inline CMatrix curvature_from_connection(const ParamFamily& fam, const RVector& x, int alpha,
                                         int beta) {
    double h = fam.step_at(x);
    auto conn = [&](const RVector& y, int dir) {
        CMatrix f = fam.frame_at(y);
        return detail::connection_at(fam, y, f, dir);
    };
    CMatrix da_b = (conn(detail::shifted(x, alpha, h), beta) -
                    conn(detail::shifted(x, alpha, -h), beta)) /
                   (2.0 * h);
    CMatrix db_a = (conn(detail::shifted(x, beta, h), alpha) -
                    conn(detail::shifted(x, beta, -h), alpha)) /
                   (2.0 * h);
    CMatrix f0 = fam.frame_at(x);
    CMatrix aa = detail::connection_at(fam, x, f0, alpha);
    CMatrix ab = detail::connection_at(fam, x, f0, beta);
    return da_b - db_a - Complex(0.0, 1.0) * (aa * ab - ab * aa);
}

/// Evaluate A, Q, G, F at a point. Q is built from first derivatives of the
/// projector only; G and F are its Hermitian/anti-Hermitian split in the
/// tangent indices. F is cross-checked against the connection route within
/// fd_tol unless the family disables the check.
inline TensorSample evaluate_tensors(const ParamFamily& fam, const RVector& x) {
    if (fam.dim_param < 1 || static_cast<int>(x.size()) != fam.dim_param)
        throw BadArguments("parameter point does not match dim_param");
    if (!fam.frame_at) throw BadArguments("family has no frame map");
    if (!(fam.fd_step > 0.0)) throw StepTooLarge("fd_step must be positive");
    if (fam.fd_step > 0.1) throw StepTooLarge("fd_step too large for quadratic accuracy");

    const double h = fam.step_at(x);
    CMatrix frame = detail::family_frame(fam, x);
    const int n = static_cast<int>(frame.rows());
    const int m = static_cast<int>(frame.cols());
    const int d = fam.dim_param;

    TensorSample out;
    out.x = x;
    out.n = n;
    out.m = m;
    out.d = d;
    out.fd_tol = std::max(1e-6, 10.0 * h * h);

    // dP along each direction
    std::vector<CMatrix> dp(d);
    const bool analytic = static_cast<bool>(fam.frame_derivative);
    for (int a = 0; a < d; ++a) {
        if (analytic) {
            CMatrix df = fam.frame_derivative(x, a);
            dp[a] = df * frame.adjoint() + frame * df.adjoint();
        } else {
            CMatrix fp = fam.frame_at(detail::shifted(x, a, h));
            CMatrix fm = fam.frame_at(detail::shifted(x, a, -h));
            // neighboring frames must stay within principal angle pi/4
            auto min_overlap = [&](const CMatrix& g) {
                Eigen::JacobiSVD<CMatrix> svd(frame.adjoint() * g);
                return svd.singularValues().minCoeff();
            };
            if (min_overlap(fp) < std::cos(kPi / 4) || min_overlap(fm) < std::cos(kPi / 4))
                throw NonSmoothFrame("frames at x +- h are farther than pi/4 from frame(x)");
            dp[a] = (fp * fp.adjoint() - fm * fm.adjoint()) / (2.0 * h);
        }
    }

    out.A.resize(d);
    for (int a = 0; a < d; ++a) out.A[a] = detail::connection_at(fam, x, frame, a);

    out.Q.assign(d, std::vector<CMatrix>(d));
    out.G.assign(d, std::vector<CMatrix>(d));
    out.F.assign(d, std::vector<CMatrix>(d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out.Q[a][b] = frame.adjoint() * dp[a] * dp[b] * frame;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            out.G[a][b] = (out.Q[a][b] + out.Q[b][a]) / 2.0;
            out.F[a][b] = Complex(0.0, 1.0) * (out.Q[a][b] - out.Q[b][a]);
        }

    if (fam.check_curvature_consistency) {
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                CMatrix alt = curvature_from_connection(fam, x, a, b);
                if ((alt - out.F[a][b]).cwiseAbs().maxCoeff() > out.fd_tol)
                    throw NonSmoothFrame(
                        "curvature from A disagrees with the Q split beyond fd_tol; "
                        "the frame map is not smooth enough at this point");
            }
    }
    return out;
}

/// Finsler norm of a tangent vector: (tr[(G(u,u))^l])^{1/(2l)} with
/// G(u,u) = sum_ab u_a u_b G_ab. Degree-1 positively homogeneous in u.
/// The functionally independent range is 1 <= l <= min(m, n - m).
inline double finsler_norm(const TensorSample& sample, const RVector& u, int l) {
    if (l < 1 || l > std::min(sample.m, sample.n - sample.m))
        throw BadOrder("need 1 <= l <= min(m, n-m)");
    if (static_cast<int>(u.size()) != sample.d)
        throw DimensionMismatch("tangent vector has wrong dimension");
    CMatrix guu = CMatrix::Zero(sample.m, sample.m);
    for (int a = 0; a < sample.d; ++a)
        for (int b = 0; b < sample.d; ++b) guu += u(a) * u(b) * sample.G[a][b];
    CMatrix power = CMatrix::Identity(sample.m, sample.m);
    for (int it = 0; it < l; ++it) power = (power * guu).eval();
    double tr = power.trace().real();
    if (tr < 0.0) tr = 0.0;
    return std::pow(tr, 1.0 / (2.0 * l));
}

/// Abelian (Plucker) reduction: fs_metric = Re tr Q, symmetric;
/// berry_like = -2 Im tr Q, antisymmetric. These equal tr G and tr F.
struct AbelianTensors {
    RMatrix fs_metric;
    RMatrix berry_like;
};

inline AbelianTensors abelian_reduction(const TensorSample& sample) {
    AbelianTensors out;
    out.fs_metric.resize(sample.d, sample.d);
    out.berry_like.resize(sample.d, sample.d);
    for (int a = 0; a < sample.d; ++a)
        for (int b = 0; b < sample.d; ++b) {
            Complex tr = sample.Q[a][b].trace();
            out.fs_metric(a, b) = tr.real();
            out.berry_like(a, b) = -2.0 * tr.imag();
        }
    return out;
}

}  // namespace grassmann
