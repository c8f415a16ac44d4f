#pragma once

#include <vector>

#include "grassmann/local_tensors.hpp"
#include "grassmann/pair.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// Closed-form geodesics between two subspaces. In the principal bases the
// curve is elementwise planar rotation at constant rate:
//
//   v_i(t) = cos(t theta_i) |v_i> + sin(t theta_i) |w_i_perp>,
//   |w_i_perp> = (|w_i> - cos theta_i |v_i>) / sin theta_i,
//
// and every Finsler metric assigns it length L_l = (sum theta_i^{2l})^{1/2l}.
// The frame is parallel per column: <v_i(t)|d_t v_i(t)> = 0.
// ---------------------------------------------------------------------------

struct GeodesicCurve {
    Subspace v, w;
    RVector theta;
    CMatrix v_frame;       // principal vectors of V
    CMatrix w_perp_frame;  // orthogonal complements of the target vectors
                           // (zero column on theta == 0 legs)

    int n() const { return v.n(); }
    int m() const { return v.m(); }

    CMatrix frame_at(double t) const {
        CMatrix f(n(), m());
        for (int i = 0; i < m(); ++i)
            f.col(i) = std::cos(t * theta(i)) * v_frame.col(i) +
                       std::sin(t * theta(i)) * w_perp_frame.col(i);
        return f;
    }

    CMatrix velocity_at(double t) const {
        CMatrix f(n(), m());
        for (int i = 0; i < m(); ++i)
            f.col(i) = theta(i) * (-std::sin(t * theta(i)) * v_frame.col(i) +
                                   std::cos(t * theta(i)) * w_perp_frame.col(i));
        return f;
    }

    Subspace subspace_at(double t) const { return Subspace{frame_at(t)}; }

    /// One-parameter family view of the curve, usable with local_tensors.
    ParamFamily as_family() const {
        GeodesicCurve copy = *this;
        ParamFamily fam;
        fam.dim_param = 1;
        fam.frame_at = [copy](const RVector& x) { return copy.frame_at(x(0)); };
        fam.frame_derivative = [copy](const RVector& x, int) {
            return copy.velocity_at(x(0));
        };
        return fam;
    }
};

/// The minimal geodesic from V to W in the canonical SVD construction.
/// theta == 0 legs keep a constant column; theta == pi/2 legs are regular,
/// though the minimizer is no longer unique there (any perpendicular target
/// works) and this function returns the SVD-derived representative.
inline GeodesicCurve geodesic(const Subspace& v, const Subspace& w, const Tolerances& tol = {}) {
    PairData pd = principal_decomposition(v, w, tol);
    const int n = v.n();
    const int m = v.m();
    GeodesicCurve curve;
    curve.v = v;
    curve.w = w;
    curve.theta = pd.theta;
    curve.v_frame = pd.v_frame;
    curve.w_perp_frame = CMatrix::Zero(n, m);
    for (int i = 0; i < m; ++i) {
        CVector residual =
            pd.w_frame.col(i) - pd.v_frame.col(i) * pd.v_frame.col(i).dot(pd.w_frame.col(i));
        double norm = residual.norm();
        // below roundoff the leg is constant; the direction noise in residual
        // would otherwise be amplified by 1/sin(theta)
        if (norm > 1e-14) curve.w_perp_frame.col(i) = residual / norm;
    }
    return curve;
}

enum class LengthMode { ClosedForm, Numeric };

/// Numeric curve length under the l-th Finsler norm: midpoint rule over the
/// family's unit-speed parameter with the tensors evaluated by central
/// differences of step h = 0.5 / steps. The finite-difference bias dominates
/// the quadrature error, so the total error scales as 1/steps^2.
inline double curve_length_numeric(const ParamFamily& fam, int l, int steps) {
    if (steps < 8) throw BadSteps("need steps >= 8");
    if (l < 1) throw BadOrder("need l >= 1");
    ParamFamily fd = fam;
    fd.frame_derivative = nullptr;  // force the finite-difference route
    fd.fd_step = 0.5 / steps;
    fd.fd_step_relative = false;
    fd.check_curvature_consistency = false;

    RVector u(1);
    u(0) = 1.0;
    double acc = 0.0;
    for (int s = 0; s < steps; ++s) {
        RVector t(1);
        t(0) = (s + 0.5) / steps;
        TensorSample sample = evaluate_tensors(fd, t);
        // bypass finsler_norm's independence-range guard: the closed-form
        // lengths are defined for all l = 1..m
        CMatrix guu = sample.G[0][0];
        CMatrix power = CMatrix::Identity(sample.m, sample.m);
        for (int it = 0; it < l; ++it) power = (power * guu).eval();
        double tr = power.trace().real();
        if (tr < 0.0) tr = 0.0;
        acc += std::pow(tr, 1.0 / (2.0 * l)) / steps;
    }
    return acc;
}

/// Geodesic lengths L_l for l = 1..m, either closed form from the angles or
/// by numeric Finsler integration along the canonical curve.
inline RVector geodesic_lengths(const Subspace& v, const Subspace& w,
                                LengthMode mode = LengthMode::ClosedForm, int steps = 1000,
                                const Tolerances& tol = {}) {
    GeodesicCurve curve = geodesic(v, w, tol);
    if (mode == LengthMode::ClosedForm) return finsler_lengths_from_angles(curve.theta);
    if (steps < 8) throw BadSteps("need steps >= 8");
    RVector out(curve.m());
    ParamFamily fam = curve.as_family();
    for (int l = 1; l <= curve.m(); ++l) out(l - 1) = curve_length_numeric(fam, l, steps);
    return out;
}

// ---------------------------------------------------------------------------
// Directional metric
// ---------------------------------------------------------------------------

/// G contracted twice with the unit-speed tangent of the geodesic V -> W,
/// expressed in the frame basis of V:
///   G(V->W) = sum_i theta_i^2 |v_i^W><v_i^W|.
/// Computed spectrally from F_V^dag P_W F_V, so it never touches the SVD
/// route; eigenvalues are theta_i^2 and the spectral projectors isolate the
/// principal directions.
struct DirectionalMetric {
    CMatrix g;                        // m x m Hermitian
    RVector theta_sq;                 // ascending, eigenvalues of g
    CMatrix eigenvectors;             // columns, frame-basis coordinates
    std::vector<CMatrix> projectors;  // rank-1 spectral projectors
};

inline DirectionalMetric g_direction(const Subspace& v, const Subspace& w,
                                     const Tolerances& tol = {}) {
    tol.validate();
    detail::require_same_shape(v, w);
    const int m = v.m();
    CMatrix restricted = v.frame.adjoint() * projector(w) * v.frame;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(restricted);

    DirectionalMetric out;
    out.theta_sq.resize(m);
    out.eigenvectors.resize(m, m);
    for (int i = 0; i < m; ++i) {
        // eigenvalues ascend in cos^2, so reverse to ascend in theta
        int src = m - 1 - i;
        double c2 = eig.eigenvalues()(src);
        double c = clamp_cosine(std::sqrt(std::max(0.0, c2)));
        double s = std::sqrt(std::max(0.0, 1.0 - c2));
        double theta = std::atan2(s, c);
        out.theta_sq(i) = theta * theta;
        out.eigenvectors.col(i) = eig.eigenvectors().col(src);
    }
    for (int i = 0; i + 1 < m; ++i)
        if (std::abs(out.theta_sq(i + 1) - out.theta_sq(i)) < tol.deg_tol)
            throw DegenerateAngles("theta^2 spectrum nearly degenerate at indices " +
                                   std::to_string(i) + " " + std::to_string(i + 1));

    out.g = CMatrix::Zero(m, m);
    out.projectors.reserve(m);
    for (int i = 0; i < m; ++i) {
        CMatrix proj = out.eigenvectors.col(i) * out.eigenvectors.col(i).adjoint();
        out.g += out.theta_sq(i) * proj;
        out.projectors.push_back(std::move(proj));
    }
    return out;
}

/// tr[G(V->W)^p G(V->U)^q], the two-direction trace invariants that encode
/// the 2SO of the triple.
inline double overlap_traces(const Subspace& v, const Subspace& w, const Subspace& u, int p,
                             int q, const Tolerances& tol = {}) {
    const int m = v.m();
    if (p < 1 || p > m || q < 1 || q > m) throw BadOrder("need 1 <= p, q <= m");
    DirectionalMetric gw = g_direction(v, w, tol);
    DirectionalMetric gu = g_direction(v, u, tol);
    CMatrix acc = CMatrix::Identity(m, m);
    for (int i = 0; i < p; ++i) acc = (acc * gw.g).eval();
    for (int i = 0; i < q; ++i) acc = (acc * gu.g).eval();
    return acc.trace().real();
}

/// Reconstruct the 2SO matrix |<v_i^W|v_k^U>|^2 from the trace invariants by
/// inverting the moment system T(p,q) = sum_ik a_i^p b_k^q S_ik with nodes
/// a_i = theta_i(V,W)^2, b_k = theta_k(V,U)^2. Refuses when the node
/// Vandermonde matrices are ill-conditioned (near-coincident angles).
inline RMatrix two_state_overlaps_from_traces(const Subspace& v, const Subspace& w,
                                              const Subspace& u, const Tolerances& tol = {}) {
    const int m = v.m();
    DirectionalMetric gw = g_direction(v, w, tol);
    DirectionalMetric gu = g_direction(v, u, tol);

    RMatrix traces(m, m);
    for (int p = 1; p <= m; ++p)
        for (int q = 1; q <= m; ++q) traces(p - 1, q - 1) = overlap_traces(v, w, u, p, q, tol);

    RMatrix node_w(m, m), node_u(m, m);
    for (int p = 1; p <= m; ++p)
        for (int i = 0; i < m; ++i) {
            node_w(p - 1, i) = std::pow(gw.theta_sq(i), p);
            node_u(p - 1, i) = std::pow(gu.theta_sq(i), p);
        }
    Eigen::JacobiSVD<RMatrix> sw(node_w), su(node_u);
    double cond_w = sw.singularValues()(0) / sw.singularValues()(m - 1);
    double cond_u = su.singularValues()(0) / su.singularValues()(m - 1);
    if (!std::isfinite(cond_w) || !std::isfinite(cond_u) || cond_w > 1e8 || cond_u > 1e8)
        throw DegenerateAngles("moment nodes too close for a stable inversion");

    // T = A S B^T  =>  S = A^{-1} T B^{-T}
    RMatrix s = node_w.partialPivLu().solve(traces);
    s = node_u.partialPivLu().solve(s.transpose()).transpose();
    return s;
}

}  // namespace grassmann
