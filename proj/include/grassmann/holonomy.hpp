#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "grassmann/geodesics.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// U(1) transport of individual principal directions along geodesics.
//
// Tracking the i-th principal direction of gamma(V, W) defines a line
// subbundle of the tautological bundle. Its discrete holonomy is accumulated
// from overlap arguments (Pancharatnam products), which telescopes exactly:
// intermediate representative phases cancel at any finite step count, so the
// result depends only on the endpoint representatives and the geometry. The
// canonical curve frame is parallel per column, hence a zero phase in the
// canonical gauge.
//
// Sign convention: the literature uses both A = i<psi|dpsi> and -i<v|dv>;
// the exponent here is fixed by requiring the m = 1 triangle to reproduce
// the Pancharatnam phase arg<v|w><w|u><u|v>, which the overlap-argument
// accumulation below does by construction.
// ---------------------------------------------------------------------------

struct TransportResult {
    std::vector<std::pair<double, CVector>> samples;  // (t, representative)
    double phase = 0.0;   // accumulated connection integral, in (-pi, pi]
    CVector endpoint_vector;
};

/// Transport the i-th principal direction along gamma(V, W) with `steps`
/// segments. `gauge` optionally multiplies the column-i representative at
/// parameter t by e^{i gauge(t)}; the accumulated phase then shifts by the
/// boundary gauge difference, the interior telescopes away.
inline TransportResult transport_phase(const Subspace& v, const Subspace& w, int i, int steps,
                                       const Tolerances& tol = {},
                                       const std::function<double(double)>& gauge = nullptr) {
    if (steps < 8) throw BadSteps("need steps >= 8");
    PairData pd = principal_decomposition(v, w, tol);
    if (i < 0 || i >= pd.m()) throw BadArguments("principal index out of range");
    if (pd.degenerate_at(i))
        throw DegenerateAngles("principal direction " + std::to_string(i) +
                               " sits in a degenerate block");
    GeodesicCurve curve = geodesic(v, w, tol);

    TransportResult out;
    out.samples.reserve(steps + 1);
    double acc = 0.0;
    CVector prev;
    for (int k = 0; k <= steps; ++k) {
        double t = static_cast<double>(k) / steps;
        CVector rep = curve.frame_at(t).col(i);
        if (gauge) rep *= std::polar(1.0, gauge(t));
        if (k > 0) {
            Complex overlap = prev.dot(rep);
            if (std::abs(overlap) <= tol.ortho_tol)
                throw PhaseUndefined("consecutive transport samples are orthogonal");
            acc += std::arg(overlap);
        }
        out.samples.emplace_back(t, rep);
        prev = std::move(rep);
    }
    out.phase = wrap_angle(acc);
    out.endpoint_vector = out.samples.back().second;
    return out;
}

namespace detail {

/// Pseudo-principal vector: the idx-th eigendirection of G(S -> T) lifted to
/// the ambient space, with an arbitrary extra phase.
inline CVector pseudo_principal_vector(const Subspace& s, const Subspace& t, int idx,
                                       double phase, const Tolerances& tol) {
    DirectionalMetric g = g_direction(s, t, tol);
    CVector ambient = s.frame * g.eigenvectors.col(idx);
    return ambient * std::polar(1.0, phase);
}

/// Pancharatnam chain along one geodesic leg from the `from` representative
/// to the `to` representative, sampling the idx-th canonical column at the
/// interior points with injected random phases.
inline double leg_phase(const GeodesicCurve& curve, int idx, const CVector& from,
                        const CVector& to, int steps, Prng& rng, double ortho_tol) {
    double acc = 0.0;
    CVector prev = from;
    for (int k = 1; k < steps; ++k) {
        double t = static_cast<double>(k) / steps;
        CVector rep = curve.frame_at(t).col(idx) *
                      std::polar(1.0, 2.0 * kPi * rng.uniform());
        Complex overlap = prev.dot(rep);
        if (std::abs(overlap) <= ortho_tol)
            throw PhaseUndefined("transport chain hit an orthogonal pair");
        acc += std::arg(overlap);
        prev = rep;
    }
    Complex last = prev.dot(to);
    if (std::abs(last) <= ortho_tol) throw PhaseUndefined("transport chain endpoint overlap vanishes");
    acc += std::arg(last);
    return acc;
}

}  // namespace detail

/// Three-state phase phi_{ijk}(V, W, U) assembled purely from local data:
/// pseudo-principal vectors at the corners (eigendirections of the
/// directional metrics, arbitrary phases) and U(1) transport along the three
/// geodesic legs. `phase_seed` controls the injected random phases; the
/// result is independent of them by gauge telescoping.
inline double three_state_phase_via_holonomy(const Subspace& v, const Subspace& w,
                                             const Subspace& u, int i, int j, int k, int steps,
                                             const Tolerances& tol = {},
                                             std::uint64_t phase_seed = 0) {
    if (steps < 8) throw BadSteps("need steps >= 8");
    const int m = v.m();
    if (i < 0 || i >= m || j < 0 || j >= m || k < 0 || k >= m)
        throw BadArguments("principal indices out of range");

    Prng rng(phase_seed + 0x9e3779b97f4a7c15ULL);
    auto rand_phase = [&]() { return 2.0 * kPi * rng.uniform(); };

    // corner data: two pseudo-principal vectors per subspace
    CVector v_toward_w = detail::pseudo_principal_vector(v, w, i, rand_phase(), tol);
    CVector v_toward_u = detail::pseudo_principal_vector(v, u, k, rand_phase(), tol);
    CVector w_toward_v = detail::pseudo_principal_vector(w, v, i, rand_phase(), tol);
    CVector w_toward_u = detail::pseudo_principal_vector(w, u, j, rand_phase(), tol);
    CVector u_toward_w = detail::pseudo_principal_vector(u, w, j, rand_phase(), tol);
    CVector u_toward_v = detail::pseudo_principal_vector(u, v, k, rand_phase(), tol);

    GeodesicCurve leg_vw = geodesic(v, w, tol);
    GeodesicCurve leg_wu = geodesic(w, u, tol);
    GeodesicCurve leg_uv = geodesic(u, v, tol);

    // a pi/2 leg angle voids the slot's phase pairing between its endpoints,
    // the same condition under which the invariant 3SP is undefined
    if (std::cos(leg_vw.theta(i)) <= tol.ortho_tol ||
        std::cos(leg_wu.theta(j)) <= tol.ortho_tol ||
        std::cos(leg_uv.theta(k)) <= tol.ortho_tol)
        throw PhaseUndefined("a geodesic leg meets its endpoint orthogonally at the "
                             "requested index");

    auto corner = [&](const CVector& incoming, const CVector& outgoing) {
        Complex overlap = incoming.dot(outgoing);
        if (std::abs(overlap) <= tol.ortho_tol)
            throw PhaseUndefined("corner overlap vanishes");
        return std::arg(overlap);
    };

    double total = 0.0;
    total += corner(v_toward_u, v_toward_w);  // <v_k^U | v_i^W>
    total += detail::leg_phase(leg_vw, i, v_toward_w, w_toward_v, steps, rng, tol.ortho_tol);
    total += corner(w_toward_v, w_toward_u);  // <w_i^V | w_j^U>
    total += detail::leg_phase(leg_wu, j, w_toward_u, u_toward_w, steps, rng, tol.ortho_tol);
    total += corner(u_toward_w, u_toward_v);  // <u_j^W | u_k^V>
    total += detail::leg_phase(leg_uv, k, u_toward_v, v_toward_u, steps, rng, tol.ortho_tol);
    return wrap_angle(total);
}

}  // namespace grassmann
