#pragma once

#include <utility>
#include <vector>

#include "grassmann/triple.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// Discrete U(1) gauge theory on the complete tripartite graph K_{m,m,m}.
//
// Vertices are the principal slots of the three pairs of a subspace triple:
//   part 0 <-> pair (V, W) slots,
//   part 1 <-> pair (W, U) slots,
//   part 2 <-> pair (V, U) slots.
// Edge phases are the arguments of the principal-unitary entries:
//   phi1(i, k) = arg <v_i^W | v_k^U>   edge part0:i -> part2:k
//   phi2(i, j) = arg <w_i^V | w_j^U>   edge part0:i -> part1:j
//   phi3(j, k) = arg <u_j^W | u_k^V>   edge part1:j -> part2:k
// Under vertex gauges g (one angle per slot) an edge a -> b transforms as
// phi -> phi + g_b - g_a, matching the pair-slot re-phasing freedom. The
// triangle part0:i -> part1:j -> part2:k -> part0:i has circulation
// phi2(i,j) + phi3(j,k) - phi1(i,k) = phi_{ijk}, the three-state phase.
// ---------------------------------------------------------------------------

struct TripartiteConnection {
    int m = 0;
    RMatrix phi1, phi2, phi3;  // phases in (-pi, pi]
};

struct GaugeTransform {
    RVector g0, g1, g2;  // one angle per vertex of each part
};

/// A closed walk on K_{m,m,m}: cyclic vertex sequence of (part, index) with
/// consecutive vertices (including the wraparound) in different parts.
struct Loop {
    std::vector<std::pair<int, int>> vertices;

    int size() const { return static_cast<int>(vertices.size()); }
};

inline Loop triangle_loop(int i, int j, int k) {
    return Loop{{{0, i}, {1, j}, {2, k}}};
}

/// Connection induced by a subspace triple: the principal-unitary entry
/// arguments in the canonical gauge.
inline TripartiteConnection from_triple(const Subspace& v, const Subspace& w, const Subspace& u,
                                        const Tolerances& tol = {}) {
    PrincipalUnitaries pu = principal_unitaries(v, w, u, tol);
    const int m = static_cast<int>(pu.v_mat.rows());
    TripartiteConnection conn;
    conn.m = m;
    conn.phi1.resize(m, m);
    conn.phi2.resize(m, m);
    conn.phi3.resize(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            conn.phi1(a, b) = wrap_angle(std::arg(pu.v_mat(a, b)));
            conn.phi2(a, b) = wrap_angle(std::arg(pu.w_mat(a, b)));
            // phi3(j, k) = arg <u_j^W | u_k^V> = -arg U(j, k)
            conn.phi3(a, b) = wrap_angle(-std::arg(pu.u_mat(a, b)));
        }
    return conn;
}

inline TripartiteConnection apply_gauge(const TripartiteConnection& conn,
                                        const GaugeTransform& g) {
    if (g.g0.size() != conn.m || g.g1.size() != conn.m || g.g2.size() != conn.m)
        throw DimensionMismatch("gauge transform size does not match m");
    TripartiteConnection out = conn;
    for (int a = 0; a < conn.m; ++a)
        for (int b = 0; b < conn.m; ++b) {
            out.phi1(a, b) = wrap_angle(conn.phi1(a, b) + g.g2(b) - g.g0(a));
            out.phi2(a, b) = wrap_angle(conn.phi2(a, b) + g.g1(b) - g.g0(a));
            out.phi3(a, b) = wrap_angle(conn.phi3(a, b) + g.g2(b) - g.g1(a));
        }
    return out;
}

namespace detail {

/// Oriented edge phase for a step (pa, xa) -> (pb, xb).
inline double edge_phase(const TripartiteConnection& conn, int pa, int xa, int pb, int xb) {
    if (pa == 0 && pb == 2) return conn.phi1(xa, xb);
    if (pa == 2 && pb == 0) return -conn.phi1(xb, xa);
    if (pa == 0 && pb == 1) return conn.phi2(xa, xb);
    if (pa == 1 && pb == 0) return -conn.phi2(xb, xa);
    if (pa == 1 && pb == 2) return conn.phi3(xa, xb);
    if (pa == 2 && pb == 1) return -conn.phi3(xb, xa);
    throw InvalidLoop("consecutive loop vertices must lie in different parts");
}

inline void validate_loop(const Loop& loop, int m) {
    if (loop.size() < 3) throw InvalidLoop("loops need at least 3 vertices");
    for (int s = 0; s < loop.size(); ++s) {
        auto [p, x] = loop.vertices[s];
        if (p < 0 || p > 2 || x < 0 || x >= m) throw InvalidLoop("vertex out of range");
        auto [q, y] = loop.vertices[(s + 1) % loop.size()];
        if (p == q) throw InvalidLoop("consecutive loop vertices must lie in different parts");
        (void)y;
    }
}

// Spanning tree: star rooted at part0 vertex 0. Tree edges are
// phi2(0, j) for all j, phi1(0, k) for all k, and phi2(i, 0) for i >= 1.
inline bool is_tree_edge(int sector, int a, int b) {
    if (sector == 0) return a == 0;             // phi1(0, k)
    if (sector == 1) return a == 0 || b == 0;   // phi2(0, j) and phi2(i, 0)
    return false;                               // no phi3 edge in the tree
}

}  // namespace detail

/// Circulation (Wilson loop): the mod-2pi sum of oriented edge phases.
/// Invariant under apply_gauge.
inline double wilson_loop(const TripartiteConnection& conn, const Loop& loop) {
    detail::validate_loop(loop, conn.m);
    double acc = 0.0;
    for (int s = 0; s < loop.size(); ++s) {
        auto [pa, xa] = loop.vertices[s];
        auto [pb, xb] = loop.vertices[(s + 1) % loop.size()];
        acc += detail::edge_phase(conn, pa, xa, pb, xb);
    }
    return wrap_angle(acc);
}

/// Generating set of the loop space: the fundamental cycles of the star
/// spanning tree, exactly 3m^2 - 3m + 1 loops. The phi3 non-tree edges give
/// m^2 triangles through part0:0; the remaining non-tree phi2/phi1 edges give
/// 4-loops through part0:0 and part1:0.
inline std::vector<Loop> loop_basis(int m) {
    if (m < 1) throw BadArguments("need m >= 1");
    std::vector<Loop> basis;
    basis.reserve(static_cast<std::size_t>(3 * m * m - 3 * m + 1));
    // triangles (0:0, 1:j, 2:k): fundamental cycle of non-tree edge phi3(j, k)
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) basis.push_back(triangle_loop(0, j, k));
    // 4-loops (0:i, 1:j, 0:0, 1:0): fundamental cycle of phi2(i, j), i,j >= 1
    for (int i = 1; i < m; ++i)
        for (int j = 1; j < m; ++j)
            basis.push_back(Loop{{{0, i}, {1, j}, {0, 0}, {1, 0}}});
    // 4-loops (0:i, 2:k, 0:0, 1:0): fundamental cycle of phi1(i, k), i >= 1
    for (int i = 1; i < m; ++i)
        for (int k = 0; k < m; ++k)
            basis.push_back(Loop{{{0, i}, {2, k}, {0, 0}, {1, 0}}});
    return basis;
}

/// Index of the basis loop generated by a given non-tree edge, in the
/// loop_basis ordering. sector: 0 = phi1, 1 = phi2, 2 = phi3.
inline int basis_index_of_edge(int sector, int a, int b, int m) {
    if (sector == 2) return a * m + b;
    if (sector == 1) return m * m + (a - 1) * (m - 1) + (b - 1);
    return m * m + (m - 1) * (m - 1) + (a - 1) * m + b;
}

/// Signed incidence of a loop over the 3m^2 oriented edges; column order is
/// phi1 row-major, then phi2, then phi3.
inline RVector loop_edge_vector(const Loop& loop, int m) {
    detail::validate_loop(loop, m);
    RVector vec = RVector::Zero(3 * m * m);
    auto bump = [&](int sector, int a, int b, double s) {
        vec(sector * m * m + a * m + b) += s;
    };
    for (int s = 0; s < loop.size(); ++s) {
        auto [pa, xa] = loop.vertices[s];
        auto [pb, xb] = loop.vertices[(s + 1) % loop.size()];
        if (pa == 0 && pb == 2)
            bump(0, xa, xb, 1.0);
        else if (pa == 2 && pb == 0)
            bump(0, xb, xa, -1.0);
        else if (pa == 0 && pb == 1)
            bump(1, xa, xb, 1.0);
        else if (pa == 1 && pb == 0)
            bump(1, xb, xa, -1.0);
        else if (pa == 1 && pb == 2)
            bump(2, xa, xb, 1.0);
        else
            bump(2, xb, xa, -1.0);
    }
    return vec;
}

/// Reduce an arbitrary loop to triangles and two-part 4-loops by the
/// shortcut recursion: whenever three consecutive vertices span all three
/// parts, split off that triangle and shortcut the loop; a loop confined to
/// two parts then sheds 4-loops pairwise. Summing the circulations of the
/// output reproduces the input circulation mod 2pi.
inline std::vector<Loop> reduce_to_small_loops(const Loop& loop, int m) {
    detail::validate_loop(loop, m);
    std::vector<Loop> out;
    std::vector<std::pair<int, int>> cur = loop.vertices;

    // stage 1: strip triangles until at most two parts remain
    bool progressed = true;
    while (cur.size() > 3 && progressed) {
        progressed = false;
        for (std::size_t s = 0; s < cur.size(); ++s) {
            auto a = cur[s];
            auto b = cur[(s + 1) % cur.size()];
            auto c = cur[(s + 2) % cur.size()];
            if (a.first != b.first && b.first != c.first && a.first != c.first) {
                // loop = shortcut(a -> c) + triangle(a, b, c)
                out.push_back(Loop{{a, b, c}});
                cur.erase(cur.begin() + static_cast<std::ptrdiff_t>((s + 1) % cur.size()));
                progressed = true;
                break;
            }
        }
    }
    if (cur.size() == 3) {
        out.push_back(Loop{cur});
        return out;
    }

    // stage 2: the remainder alternates between exactly two parts
    while (cur.size() > 4) {
        // cur = x1 y1 x2 y2 ... : split off (x1, y1, x2, y2), keep x1 y2 x3 ...
        out.push_back(Loop{{cur[0], cur[1], cur[2], cur[3]}});
        cur.erase(cur.begin() + 1, cur.begin() + 3);
    }
    if (cur.size() == 4) out.push_back(Loop{cur});
    return out;
}

/// Decompose a loop over the canonical basis: reduce to small loops, then
/// map each small loop through the spanning-tree fundamental cycles of its
/// non-tree edges. Returns (coefficient, basis index) pairs; coefficients
/// are +-1 per traversal and may repeat.
inline std::vector<std::pair<int, int>> decompose_loop(const Loop& loop, int m) {
    std::vector<std::pair<int, int>> terms;
    for (const Loop& small : reduce_to_small_loops(loop, m)) {
        RVector vec = loop_edge_vector(small, m);
        for (int sector = 0; sector < 3; ++sector)
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b) {
                    double coeff = vec(sector * m * m + a * m + b);
                    if (coeff == 0.0 || detail::is_tree_edge(sector, a, b)) continue;
                    terms.emplace_back(static_cast<int>(coeff),
                                       basis_index_of_edge(sector, a, b, m));
                }
    }
    return terms;
}

/// Fix the spanning-tree gauge: vertex potentials that null every tree edge.
/// Root g0(0) = 0; then g1(j) = -phi2(0, j), g2(k) = -phi1(0, k), and
/// g0(i) = phi2(i, 0) + g1(0) for i >= 1.
inline TripartiteConnection spanning_tree_gauge_fix(const TripartiteConnection& conn,
                                                    GaugeTransform* out_gauge = nullptr) {
    const int m = conn.m;
    GaugeTransform g;
    g.g0 = RVector::Zero(m);
    g.g1.resize(m);
    g.g2.resize(m);
    for (int j = 0; j < m; ++j) g.g1(j) = -conn.phi2(0, j);
    for (int k = 0; k < m; ++k) g.g2(k) = -conn.phi1(0, k);
    for (int i = 1; i < m; ++i) g.g0(i) = conn.phi2(i, 0) + g.g1(0);
    if (out_gauge) *out_gauge = g;
    return apply_gauge(conn, g);
}

/// Gauge equivalence by spanning-tree gauge fixing: equal iff the gauge-fixed
/// connections agree edgewise mod 2pi. The witness composes the two fixing
/// transforms so that apply_gauge(a, witness) == b up to tol.
struct GaugeEquivalence {
    bool equivalent = false;
    std::optional<GaugeTransform> witness;
};

inline GaugeEquivalence gauge_equivalent(const TripartiteConnection& a,
                                         const TripartiteConnection& b, double tol = 1e-8) {
    if (a.m != b.m) throw DimensionMismatch("connections must share m");
    GaugeTransform ga, gb;
    TripartiteConnection fa = spanning_tree_gauge_fix(a, &ga);
    TripartiteConnection fb = spanning_tree_gauge_fix(b, &gb);
    double dev = 0.0;
    for (int x = 0; x < a.m; ++x)
        for (int y = 0; y < a.m; ++y) {
            dev = std::max(dev, angle_distance(fa.phi1(x, y), fb.phi1(x, y)));
            dev = std::max(dev, angle_distance(fa.phi2(x, y), fb.phi2(x, y)));
            dev = std::max(dev, angle_distance(fa.phi3(x, y), fb.phi3(x, y)));
        }
    GaugeEquivalence res;
    res.equivalent = dev <= tol;
    if (res.equivalent) {
        GaugeTransform w;
        w.g0 = ga.g0 - gb.g0;
        w.g1 = ga.g1 - gb.g1;
        w.g2 = ga.g2 - gb.g2;
        res.witness = std::move(w);
    }
    return res;
}

}  // namespace grassmann
