#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "grassmann/subspace.hpp"

namespace grassmann {

/// Complete invariant data of an ordered subspace pair (V, W): principal
/// angles theta_i ascending in [0, pi/2] and the conjugate principal bases.
/// The frames satisfy v_frame^dagger * w_frame = diag(cos theta_i) with a
/// real non-negative diagonal; each slot keeps a residual U(1) freedom where
/// both columns rotate together.
struct PairData {
    RVector theta;    // ascending
    RVector cosines;  // descending, cos(theta)
    CMatrix v_frame;  // principal vectors in V, n x m
    CMatrix w_frame;  // principal vectors in W, n x m
    std::vector<int> degenerate_indices;  // slots inside any near-tie group

    int m() const { return static_cast<int>(theta.size()); }
    bool degenerate() const { return !degenerate_indices.empty(); }
    bool degenerate_at(int i) const {
        return std::find(degenerate_indices.begin(), degenerate_indices.end(), i) !=
               degenerate_indices.end();
    }
};

namespace detail {

inline void require_same_shape(const Subspace& v, const Subspace& w) {
    if (v.n() != w.n() || v.m() != w.m())
        throw DimensionMismatch("subspaces must share (n, m)");
}

inline std::vector<int> detect_degenerate(const RVector& cosines, double deg_tol) {
    std::set<int> flagged;
    for (int i = 0; i + 1 < cosines.size(); ++i) {
        if (std::abs(cosines(i) - cosines(i + 1)) < deg_tol) {
            flagged.insert(i);
            flagged.insert(i + 1);
        }
    }
    return {flagged.begin(), flagged.end()};
}

}  // namespace detail

/// Principal decomposition of (V, W) via the SVD of the m x m overlap matrix.
/// Singular values are clamped to [0, 1] before arccos; angles come out
/// ascending because the singular values are descending.
inline PairData principal_decomposition(const Subspace& v, const Subspace& w,
                                        const Tolerances& tol = {}) {
    tol.validate();
    detail::require_same_shape(v, w);
    const int m = v.m();
    CMatrix overlap = v.frame.adjoint() * w.frame;
    Eigen::JacobiSVD<CMatrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);

    PairData out;
    out.cosines.resize(m);
    out.theta.resize(m);
    out.v_frame = v.frame * svd.matrixU();
    out.w_frame = w.frame * svd.matrixV();
    for (int i = 0; i < m; ++i) {
        out.cosines(i) = clamp_cosine(svd.singularValues()(i));
        // atan2(sin, cos) instead of acos(cos): the residual of w_i against
        // v_i gives the sine to full absolute accuracy, so angles near zero
        // do not inherit the sqrt(eps) noise of arccos at 1
        double sine = (out.w_frame.col(i) -
                       out.v_frame.col(i) * out.v_frame.col(i).dot(out.w_frame.col(i)))
                          .norm();
        out.theta(i) = std::atan2(sine, out.cosines(i));
    }
    out.degenerate_indices = detail::detect_degenerate(out.cosines, tol.deg_tol);
    return out;
}

/// Spectrum of P_V P_W P_V restricted to V: the eigenvalues of the m x m
/// matrix F_V^dagger P_W F_V, descending, equal to cos^2 theta_i. This is the
/// projector route, independent of the SVD path.
inline RVector angles_via_projectors(const Subspace& v, const Subspace& w,
                                     const Tolerances& tol = {}) {
    tol.validate();
    detail::require_same_shape(v, w);
    CMatrix restricted = v.frame.adjoint() * projector(w) * v.frame;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(restricted);
    RVector vals = eig.eigenvalues().reverse();
    for (int i = 0; i < vals.size(); ++i) {
        if (vals(i) < 0.0) vals(i) = 0.0;
        if (vals(i) > 1.0) vals(i) = 1.0;
    }
    return vals;
}

/// L_l = (sum_i theta_i^{2l})^{1/(2l)} for l = 1..m.
inline RVector finsler_lengths_from_angles(const RVector& theta) {
    const int m = static_cast<int>(theta.size());
    RVector lengths(m);
    for (int l = 1; l <= m; ++l) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += std::pow(theta(i), 2.0 * l);
        lengths(l - 1) = std::pow(acc, 1.0 / (2.0 * l));
    }
    return lengths;
}

/// Geodesic lengths of the pair under the m Finsler metrics, closed form.
inline RVector finsler_lengths(const Subspace& v, const Subspace& w,
                               const Tolerances& tol = {}) {
    return finsler_lengths_from_angles(principal_decomposition(v, w, tol).theta);
}

/// Inner product of the Plucker images, det{<v_i|w_j>}. The magnitude equals
/// prod_i cos theta_i; the phase depends on the frame gauge and is reported
/// as is.
inline Complex plucker_overlap(const Subspace& v, const Subspace& w,
                               const Tolerances& tol = {}) {
    tol.validate();
    detail::require_same_shape(v, w);
    return (v.frame.adjoint() * w.frame).determinant();
}

/// Rotate slot i of both principal frames by e^{i phases(i)}. This is the
/// residual gauge freedom of Eq.-style conjugate bases; all invariants built
/// downstream must be insensitive to it.
inline PairData apply_pair_gauge(const PairData& pd, const RVector& phases) {
    if (phases.size() != pd.theta.size())
        throw DimensionMismatch("one phase per principal slot required");
    PairData out = pd;
    for (int i = 0; i < phases.size(); ++i) {
        Complex z = std::polar(1.0, phases(i));
        out.v_frame.col(i) *= z;
        out.w_frame.col(i) *= z;
    }
    return out;
}

}  // namespace grassmann
