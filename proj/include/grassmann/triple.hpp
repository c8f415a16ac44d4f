#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grassmann/pair.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// Principal unitaries
//
// A third subspace induces a second conjugate basis in each member of a
// triple (V, W, U). The change-of-basis matrices between the two bases of
// each subspace are the principal unitaries:
//
//   V(i,k) = <v_i^W | v_k^U>   (both vectors in V)
//   W(i,j) = <w_i^V | w_j^U>   (both vectors in W)
//   U(j,k) = <u_k^V | u_j^W>   (both vectors in U)
//
// Entries are gauge-dependent; their moduli (2SO) and the phase combinations
// below (4SP, 3SP) are the invariants.
// ---------------------------------------------------------------------------

struct PrincipalUnitaries {
    CMatrix v_mat, w_mat, u_mat;  // m x m each
};

/// Phase tensor with a per-entry defined mask. An entry is undefined when
/// some overlap in its defining product has magnitude at or below ortho_tol;
/// querying such an entry throws PhaseUndefined.
class PhaseTensor {
  public:
    PhaseTensor() = default;
    PhaseTensor(std::vector<int> dims)
        : dims_(std::move(dims)) {
        int total = 1;
        for (int d : dims_) total *= d;
        phase_.assign(total, 0.0);
        defined_.assign(total, 0);
    }

    int flat(std::initializer_list<int> idx) const {
        int f = 0;
        int k = 0;
        for (int i : idx) {
            f = f * dims_[k++] + i;
        }
        return f;
    }

    void set(std::initializer_list<int> idx, double value, bool defined) {
        int f = flat(idx);
        phase_[f] = value;
        defined_[f] = defined ? 1 : 0;
    }

    bool is_defined(std::initializer_list<int> idx) const { return defined_[flat(idx)] != 0; }

    double at(std::initializer_list<int> idx) const {
        int f = flat(idx);
        if (!defined_[f])
            throw PhaseUndefined("phase entry involves a vanishing overlap");
        return phase_[f];
    }

    double raw(std::initializer_list<int> idx) const { return phase_[flat(idx)]; }

    const std::vector<int>& dims() const { return dims_; }

  private:
    std::vector<int> dims_;
    std::vector<double> phase_;
    std::vector<std::uint8_t> defined_;
};

/// Complete invariant data of a subspace triple.
struct TripleData {
    RVector theta_vw, theta_wu, theta_vu;  // pairwise principal angles
    PrincipalUnitaries unitaries;
    RMatrix so_v, so_w, so_u;  // two-state overlaps, |entry|^2 of each unitary
    // four-state phases per subspace, indexed (i, i', k, k'), exported for
    // i < i' and k < k'; the remaining index combinations follow by
    // conjugation antisymmetry
    PhaseTensor fsp_v, fsp_w, fsp_u;
    PhaseTensor tsp;  // three-state phases, m x m x m

    int m() const { return static_cast<int>(theta_vw.size()); }
};

namespace detail {

inline void require_non_degenerate(const PairData& pd, const char* pair_name) {
    if (pd.degenerate()) {
        std::string msg = "degenerate principal angles for pair ";
        msg += pair_name;
        msg += " at indices";
        for (int i : pd.degenerate_indices) msg += " " + std::to_string(i);
        throw DegenerateAngles(msg);
    }
}

inline PrincipalUnitaries unitaries_from_pairs(const PairData& vw, const PairData& wu,
                                               const PairData& vu) {
    PrincipalUnitaries pu;
    pu.v_mat = vw.v_frame.adjoint() * vu.v_frame;
    pu.w_mat = vw.w_frame.adjoint() * wu.v_frame;
    pu.u_mat = (vu.w_frame.adjoint() * wu.w_frame).transpose();
    return pu;
}

/// 4SP of a single unitary: phi_{i i' k k'} =
/// arg[ M(i,k) conj(M(i',k)) M(i',k') conj(M(i,k')) ].
inline PhaseTensor four_state_phases(const CMatrix& m_mat, double ortho_tol) {
    const int m = static_cast<int>(m_mat.rows());
    PhaseTensor t({m, m, m, m});
    for (int i = 0; i < m; ++i)
        for (int i2 = i + 1; i2 < m; ++i2)
            for (int k = 0; k < m; ++k)
                for (int k2 = k + 1; k2 < m; ++k2) {
                    Complex prod = m_mat(i, k) * std::conj(m_mat(i2, k)) * m_mat(i2, k2) *
                                   std::conj(m_mat(i, k2));
                    bool def = std::min({std::abs(m_mat(i, k)), std::abs(m_mat(i2, k)),
                                         std::abs(m_mat(i2, k2)), std::abs(m_mat(i, k2))}) >
                               ortho_tol;
                    t.set({i, i2, k, k2}, def ? wrap_angle(std::arg(prod)) : 0.0, def);
                }
    return t;
}

}  // namespace detail

/// Principal unitaries of (V, W, U) in the canonical SVD gauge. Throws
/// DegenerateAngles when any pairwise angle spectrum has a near-tie; the
/// per-index invariants are not well defined there.
inline PrincipalUnitaries principal_unitaries(const Subspace& v, const Subspace& w,
                                              const Subspace& u, const Tolerances& tol = {}) {
    PairData vw = principal_decomposition(v, w, tol);
    PairData wu = principal_decomposition(w, u, tol);
    PairData vu = principal_decomposition(v, u, tol);
    detail::require_non_degenerate(vw, "(V,W)");
    detail::require_non_degenerate(wu, "(W,U)");
    detail::require_non_degenerate(vu, "(V,U)");
    return detail::unitaries_from_pairs(vw, wu, vu);
}

/// Assemble the invariant data from precomputed pair decompositions. The
/// pair data may carry any residual slot gauge; every exported quantity is
/// unchanged under apply_pair_gauge on any of the three pairs.
inline TripleData triple_data_from_pairs(const PairData& vw, const PairData& wu,
                                         const PairData& vu, const Tolerances& tol = {}) {
    tol.validate();
    const int m = vw.m();
    if (wu.m() != m || vu.m() != m)
        throw DimensionMismatch("pair data must share m");

    TripleData out;
    out.theta_vw = vw.theta;
    out.theta_wu = wu.theta;
    out.theta_vu = vu.theta;
    out.unitaries = detail::unitaries_from_pairs(vw, wu, vu);

    out.so_v = out.unitaries.v_mat.cwiseAbs2();
    out.so_w = out.unitaries.w_mat.cwiseAbs2();
    out.so_u = out.unitaries.u_mat.cwiseAbs2();

    out.fsp_v = detail::four_state_phases(out.unitaries.v_mat, tol.ortho_tol);
    out.fsp_w = detail::four_state_phases(out.unitaries.w_mat, tol.ortho_tol);
    out.fsp_u = detail::four_state_phases(out.unitaries.u_mat, tol.ortho_tol);

    // 3SP: phi_{ijk} = arg[ conj(V(i,k)) W(i,j) conj(U(j,k)) ], which is
    // arg <v_k^U|v_i^W><w_i^V|w_j^U><u_j^W|u_k^V> written through the
    // unitaries. When a pair cosine vanishes the slot loses its phase
    // pairing between the two subspaces, so the entry also requires
    // cos theta_i(V,W), cos theta_j(W,U), cos theta_k(V,U) to be nonzero
    // (these are exactly the extra factors of the projector-trace route).
    out.tsp = PhaseTensor({m, m, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Complex prod = std::conj(out.unitaries.v_mat(i, k)) * out.unitaries.w_mat(i, j) *
                               std::conj(out.unitaries.u_mat(j, k));
                bool def = std::min({std::abs(out.unitaries.v_mat(i, k)),
                                     std::abs(out.unitaries.w_mat(i, j)),
                                     std::abs(out.unitaries.u_mat(j, k)), vw.cosines(i),
                                     wu.cosines(j), vu.cosines(k)}) > tol.ortho_tol;
                out.tsp.set({i, j, k}, def ? wrap_angle(std::arg(prod)) : 0.0, def);
            }
    return out;
}

/// Projector-trace route for one 3SP entry:
/// arg tr[P_i^{V->W} P_i^{W->V} P_j^{W->U} P_j^{U->W} P_k^{U->V} P_k^{V->U}],
/// evaluated literally on n x n rank-1 projectors. Returns nullopt when the
/// trace magnitude is below tol (the phase is undefined there).
inline std::optional<double> three_state_phase_projector_route(const PairData& vw,
                                                               const PairData& wu,
                                                               const PairData& vu, int i, int j,
                                                               int k, double mag_floor = 1e-12) {
    auto rank1 = [](const CMatrix& frame, int col) -> CMatrix {
        return frame.col(col) * frame.col(col).adjoint();
    };
    CMatrix prod = rank1(vw.v_frame, i) * rank1(vw.w_frame, i) * rank1(wu.v_frame, j) *
                   rank1(wu.w_frame, j) * rank1(vu.w_frame, k) * rank1(vu.v_frame, k);
    Complex tr = prod.trace();
    if (std::abs(tr) <= mag_floor) return std::nullopt;
    return wrap_angle(std::arg(tr));
}

/// Complete invariant data of a triple in the canonical SVD gauge. The 3SP
/// tensor is cross-checked against the projector-trace route.
inline TripleData triple_invariants(const Subspace& v, const Subspace& w, const Subspace& u,
                                    const Tolerances& tol = {}) {
    PairData vw = principal_decomposition(v, w, tol);
    PairData wu = principal_decomposition(w, u, tol);
    PairData vu = principal_decomposition(v, u, tol);
    detail::require_non_degenerate(vw, "(V,W)");
    detail::require_non_degenerate(wu, "(W,U)");
    detail::require_non_degenerate(vu, "(V,U)");
    TripleData out = triple_data_from_pairs(vw, wu, vu, tol);

    const int m = out.m();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                if (!out.tsp.is_defined({i, j, k})) continue;
                auto other = three_state_phase_projector_route(vw, wu, vu, i, j, k);
                if (!other) continue;  // a vanishing cosine kills the trace route only
                if (angle_distance(out.tsp.at({i, j, k}), *other) > tol.eq_tol)
                    throw Error("3SP routes disagree beyond eq_tol; inputs are likely "
                                "numerically inconsistent");
            }
    return out;
}

// ---------------------------------------------------------------------------
// Parameter counting
// ---------------------------------------------------------------------------

/// Number of independent invariants of l generic m-dimensional subspaces:
/// m for a pair, m^2 l (l-2) + 1 otherwise.
inline long long invariant_count(int m, int l) {
    if (m < 1 || l < 2) throw BadArguments("need m >= 1 and l >= 2");
    if (l == 2) return m;
    return static_cast<long long>(m) * m * l * (l - 2) + 1;
}

/// Numerical codimension of the U(n) orbit of a configuration: the rank of
/// the real-linear map X -> ([X,P_1], ..., [X,P_l]) over a basis of
/// anti-Hermitian matrices, subtracted from the total Grassmannian dimension
/// sum 2 m (n - m).
inline long long orbit_codimension_numeric(const Configuration& c) {
    c.validate();
    const int n = c.n();
    const int m = c.m();
    const int l = c.size();
    if (n <= m * l) throw TooSmallAmbient("need n > m*l for the generic count");

    std::vector<CMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        CMatrix x = CMatrix::Zero(n, n);
        x(k, k) = Complex(0.0, 1.0);
        basis.push_back(x);
    }
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s) {
            CMatrix x = CMatrix::Zero(n, n);
            x(r, s) = 1.0;
            x(s, r) = -1.0;
            basis.push_back(x);
            CMatrix y = CMatrix::Zero(n, n);
            y(r, s) = Complex(0.0, 1.0);
            y(s, r) = Complex(0.0, 1.0);
            basis.push_back(y);
        }

    std::vector<CMatrix> projectors;
    projectors.reserve(l);
    for (const auto& s : c.subspaces) projectors.push_back(projector(s));

    const int rows = l * 2 * n * n;
    RMatrix map(rows, static_cast<int>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        int row = 0;
        for (int a = 0; a < l; ++a) {
            CMatrix comm = basis[b] * projectors[a] - projectors[a] * basis[b];
            for (int r = 0; r < n; ++r)
                for (int col = 0; col < n; ++col) {
                    map(row++, static_cast<int>(b)) = comm(r, col).real();
                    map(row++, static_cast<int>(b)) = comm(r, col).imag();
                }
        }
    }

    Eigen::BDCSVD<RMatrix> svd(map);
    const auto& sv = svd.singularValues();
    double cutoff = 1e-8 * sv(0);
    long long rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;

    long long total = static_cast<long long>(l) * 2 * m * (n - m);
    return total - rank;
}

}  // namespace grassmann
