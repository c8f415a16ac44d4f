#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grassmann/triple.hpp"

namespace grassmann {

/// Outcome of a configuration-equivalence decision. When two configurations
/// are equivalent, `witness` holds an ambient unitary with
/// max_a || U P_a U^dagger - P'_a ||_F == witness_error <= 10 * eq_tol.
struct EquivalenceResult {
    enum class Verdict { Equivalent, NotEquivalent, Indeterminate };
    Verdict verdict = Verdict::Indeterminate;
    std::optional<CMatrix> witness;
    double witness_error = std::numeric_limits<double>::quiet_NaN();
    std::string detail;

    bool equivalent() const { return verdict == Verdict::Equivalent; }
};

namespace detail {

// Entries of principal unitaries with magnitude at or below this floor carry
// numerically meaningless phases; they are skipped both in the invariant
// comparison and in the gauge alignment. Their contribution to any Gram
// entry is below the floor itself.
inline constexpr double kPhaseMagnitudeFloor = 1e-5;

struct PairTable {
    // pair index p for unordered (a, b), a < b
    std::vector<std::pair<int, int>> members;
    std::map<std::pair<int, int>, int> index;
    std::vector<PairData> data;

    // basis of subspace s induced by its pair with t
    const CMatrix& basis(int s, int t) const {
        if (s < t) return data[index.at({s, t})].v_frame;
        return data[index.at({t, s})].w_frame;
    }
    int pair_of(int s, int t) const {
        return (s < t) ? index.at({s, t}) : index.at({t, s});
    }
};

inline PairTable build_pair_table(const Configuration& c) {
    PairTable t;
    const int l = c.size();
    for (int a = 0; a < l; ++a)
        for (int b = a + 1; b < l; ++b) {
            t.index[{a, b}] = static_cast<int>(t.members.size());
            t.members.emplace_back(a, b);
            t.data.push_back(principal_decomposition(c.subspaces[a], c.subspaces[b], c.tol));
        }
    return t;
}

/// Orthonormal completion: a unitary whose first r columns equal the given
/// orthonormal set.
inline CMatrix complete_to_unitary(const CMatrix& basis) {
    const int n = static_cast<int>(basis.rows());
    const int r = static_cast<int>(basis.cols());
    CMatrix u(n, n);
    u.leftCols(r) = basis;
    Eigen::HouseholderQR<CMatrix> qr(basis);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    u.rightCols(n - r) = q.rightCols(n - r);
    return u;
}

/// Unitary mapping one vector collection onto another with an identical Gram
/// matrix, following the shared-Gram eigenvector construction.
inline CMatrix unitary_from_matched_collections(const CMatrix& xa, const CMatrix& xb) {
    const int n = static_cast<int>(xa.rows());
    CMatrix gram = xa.adjoint() * xa;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    double lead = std::max(1.0, eig.eigenvalues().maxCoeff());
    std::vector<int> kept;
    for (int i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()(i) > 1e-12 * lead * gram.rows()) kept.push_back(i);

    CMatrix basis_a(n, static_cast<int>(kept.size()));
    CMatrix basis_b(n, static_cast<int>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        double scale = 1.0 / std::sqrt(eig.eigenvalues()(kept[c]));
        basis_a.col(static_cast<int>(c)) = xa * eig.eigenvectors().col(kept[c]) * scale;
        basis_b.col(static_cast<int>(c)) = xb * eig.eigenvectors().col(kept[c]) * scale;
    }
    // kill the eps-level drift that xb inherits from its own Gram deviation
    basis_b = modified_gram_schmidt(basis_b, 1e-6);

    CMatrix full_a = complete_to_unitary(basis_a);
    CMatrix full_b = complete_to_unitary(basis_b);
    return full_b * full_a.adjoint();
}

}  // namespace detail

/// Decide whether two configurations are related by an ambient unitary by
/// comparing the complete invariant set: pairwise principal angles for every
/// pair and 2SO / 4SP / 3SP for every triple. When all invariants match, a
/// witness is built by re-phasing B's principal frames onto A's gauge and
/// mapping the matched principal-vector collections.
///
/// Degenerate angle spectra (m > 1) make per-index invariants ill-defined and
/// yield Indeterminate. For m = 1 no degeneracy is possible and zero-overlap
/// entries simply carry no phase constraint.
inline EquivalenceResult configs_equivalent(const Configuration& a, const Configuration& b) {
    a.validate();
    b.validate();
    if (a.n() != b.n() || a.m() != b.m() || a.size() != b.size())
        throw DimensionMismatch("configurations must share (n, m, l)");
    const int l = a.size();
    if (l < 2) throw BadArguments("equivalence needs at least two subspaces");
    const int m = a.m();
    const int n = a.n();
    const Tolerances tol = a.tol;

    EquivalenceResult res;

    detail::PairTable ta = detail::build_pair_table(a);
    detail::PairTable tb = detail::build_pair_table(b);

    if (m > 1) {
        for (const auto& pd : ta.data)
            if (pd.degenerate()) {
                res.verdict = EquivalenceResult::Verdict::Indeterminate;
                res.detail = "configuration A has a degenerate pair spectrum";
                return res;
            }
        for (const auto& pd : tb.data)
            if (pd.degenerate()) {
                res.verdict = EquivalenceResult::Verdict::Indeterminate;
                res.detail = "configuration B has a degenerate pair spectrum";
                return res;
            }
    }

    // 1. pairwise principal angles
    for (std::size_t p = 0; p < ta.data.size(); ++p) {
        double dev = (ta.data[p].theta - tb.data[p].theta).cwiseAbs().maxCoeff();
        if (dev > tol.eq_tol) {
            res.verdict = EquivalenceResult::Verdict::NotEquivalent;
            res.detail = "principal angles differ by " + std::to_string(dev);
            return res;
        }
    }

    // 2. triple invariants
    for (int x = 0; x < l && l >= 3; ++x)
        for (int y = x + 1; y < l; ++y)
            for (int z = y + 1; z < l; ++z) {
                TripleData da = triple_data_from_pairs(
                    ta.data[ta.pair_of(x, y)], ta.data[ta.pair_of(y, z)],
                    ta.data[ta.pair_of(x, z)], tol);
                TripleData db = triple_data_from_pairs(
                    tb.data[tb.pair_of(x, y)], tb.data[tb.pair_of(y, z)],
                    tb.data[tb.pair_of(x, z)], tol);

                double so_dev = std::max({(da.so_v - db.so_v).cwiseAbs().maxCoeff(),
                                          (da.so_w - db.so_w).cwiseAbs().maxCoeff(),
                                          (da.so_u - db.so_u).cwiseAbs().maxCoeff()});
                if (so_dev > tol.eq_tol) {
                    res.verdict = EquivalenceResult::Verdict::NotEquivalent;
                    res.detail = "two-state overlaps differ by " + std::to_string(so_dev);
                    return res;
                }

                auto compare_fsp = [&](const PhaseTensor& fa, const PhaseTensor& fb,
                                       const RMatrix& mag) -> bool {
                    for (int i = 0; i < m; ++i)
                        for (int i2 = i + 1; i2 < m; ++i2)
                            for (int k = 0; k < m; ++k)
                                for (int k2 = k + 1; k2 < m; ++k2) {
                                    double floor2 = detail::kPhaseMagnitudeFloor *
                                                    detail::kPhaseMagnitudeFloor;
                                    if (mag(i, k) < floor2 || mag(i2, k) < floor2 ||
                                        mag(i2, k2) < floor2 || mag(i, k2) < floor2)
                                        continue;
                                    if (angle_distance(fa.raw({i, i2, k, k2}),
                                                       fb.raw({i, i2, k, k2})) > tol.eq_tol)
                                        return false;
                                }
                    return true;
                };
                if (!compare_fsp(da.fsp_v, db.fsp_v, da.so_v) ||
                    !compare_fsp(da.fsp_w, db.fsp_w, da.so_w) ||
                    !compare_fsp(da.fsp_u, db.fsp_u, da.so_u)) {
                    res.verdict = EquivalenceResult::Verdict::NotEquivalent;
                    res.detail = "four-state phases differ";
                    return res;
                }

                double floor2 =
                    detail::kPhaseMagnitudeFloor * detail::kPhaseMagnitudeFloor;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        for (int k = 0; k < m; ++k) {
                            if (da.so_v(i, k) < floor2 || da.so_w(i, j) < floor2 ||
                                da.so_u(j, k) < floor2)
                                continue;
                            // a vanishing pair cosine makes the entry gauge
                            // dependent on both sides
                            if (std::cos(da.theta_vw(i)) < detail::kPhaseMagnitudeFloor ||
                                std::cos(da.theta_wu(j)) < detail::kPhaseMagnitudeFloor ||
                                std::cos(da.theta_vu(k)) < detail::kPhaseMagnitudeFloor)
                                continue;
                            if (angle_distance(da.tsp.raw({i, j, k}), db.tsp.raw({i, j, k})) >
                                tol.eq_tol) {
                                res.verdict = EquivalenceResult::Verdict::NotEquivalent;
                                res.detail = "three-state phases differ";
                                return res;
                            }
                        }
            }

    // 3. witness: re-phase B's pair frames onto A's gauge. Vertices are
    // (pair, slot, side); the v and w columns of a slot rotate together when
    // the slot cosine is nonzero and decouple when it vanishes. Each
    // sufficiently large principal-unitary entry pins the phase difference
    // of the two induced-basis vertices it connects.
    const int num_pairs = static_cast<int>(ta.members.size());
    const int num_vertices = num_pairs * m * 2;
    auto vertex = [m](int pair, int slot, int side) { return (pair * m + slot) * 2 + side; };
    std::vector<double> delta(num_vertices, 0.0);
    std::vector<char> assigned(delta.size(), 0);

    struct Edge {
        int from, to;     // vertex ids
        double required;  // delta[to] - delta[from]
    };
    std::vector<std::vector<Edge>> adjacency(delta.size());
    auto add_edge = [&](int va, int vb, double need) {
        adjacency[va].push_back({va, vb, need});
        adjacency[vb].push_back({vb, va, -need});
    };
    for (int p = 0; p < num_pairs; ++p)
        for (int i = 0; i < m; ++i)
            if (ta.data[p].cosines(i) > detail::kPhaseMagnitudeFloor)
                add_edge(vertex(p, i, 0), vertex(p, i, 1), 0.0);
    for (int s = 0; s < l; ++s)
        for (int t1 = 0; t1 < l; ++t1)
            for (int t2 = t1 + 1; t2 < l; ++t2) {
                if (t1 == s || t2 == s) continue;
                CMatrix ma = ta.basis(s, t1).adjoint() * ta.basis(s, t2);
                CMatrix mb = tb.basis(s, t1).adjoint() * tb.basis(s, t2);
                int p1 = ta.pair_of(s, t1);
                int p2 = ta.pair_of(s, t2);
                int side1 = (s < t1) ? 0 : 1;
                int side2 = (s < t2) ? 0 : 1;
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        if (std::abs(ma(i, j)) < detail::kPhaseMagnitudeFloor) continue;
                        double need = wrap_angle(std::arg(ma(i, j)) - std::arg(mb(i, j)));
                        add_edge(vertex(p1, i, side1), vertex(p2, j, side2), need);
                    }
            }
    for (std::size_t root = 0; root < delta.size(); ++root) {
        if (assigned[root]) continue;
        assigned[root] = 1;
        delta[root] = 0.0;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (const Edge& e : adjacency[v]) {
                if (assigned[e.to]) continue;
                assigned[e.to] = 1;
                delta[e.to] = delta[e.from] + e.required;
                queue.push_back(static_cast<std::size_t>(e.to));
            }
        }
    }

    detail::PairTable tb_fixed = tb;
    for (int p = 0; p < num_pairs; ++p)
        for (int i = 0; i < m; ++i) {
            tb_fixed.data[p].v_frame.col(i) *= std::polar(1.0, delta[vertex(p, i, 0)]);
            tb_fixed.data[p].w_frame.col(i) *= std::polar(1.0, delta[vertex(p, i, 1)]);
        }

    CMatrix xa(n, num_pairs * 2 * m), xb(n, num_pairs * 2 * m);
    for (int p = 0; p < num_pairs; ++p) {
        xa.middleCols(p * 2 * m, m) = ta.data[p].v_frame;
        xa.middleCols(p * 2 * m + m, m) = ta.data[p].w_frame;
        xb.middleCols(p * 2 * m, m) = tb_fixed.data[p].v_frame;
        xb.middleCols(p * 2 * m + m, m) = tb_fixed.data[p].w_frame;
    }

    CMatrix u = detail::unitary_from_matched_collections(xa, xb);

    double err = 0.0;
    for (int s = 0; s < l; ++s) {
        CMatrix lhs = u * projector(a.subspaces[s]) * u.adjoint();
        err = std::max(err, (lhs - projector(b.subspaces[s])).norm());
    }
    if (err <= 10.0 * tol.eq_tol) {
        res.verdict = EquivalenceResult::Verdict::Equivalent;
        res.witness = u;
        res.witness_error = err;
    } else {
        res.verdict = EquivalenceResult::Verdict::Indeterminate;
        res.witness_error = err;
        res.detail = "invariants match but the witness residual is " + std::to_string(err);
    }
    return res;
}

}  // namespace grassmann
