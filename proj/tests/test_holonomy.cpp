#include <catch2/catch_amalgamated.hpp>

#include "grassmann/holonomy.hpp"
#include "grassmann/triple.hpp"

using namespace grassmann;

namespace {

Subspace line(std::initializer_list<Complex> entries) {
    CMatrix raw(static_cast<Eigen::Index>(entries.size()), 1);
    int r = 0;
    for (Complex z : entries) raw(r++, 0) = z;
    return orthonormalize(raw);
}

}  // namespace

TEST_CASE("canonical frame transport accumulates zero phase") {
    for (int trial = 0; trial < 5; ++trial) {
        Subspace v = sample_subspace(7, 2, 800 + trial);
        Subspace w = sample_subspace(7, 2, 810 + trial);
        for (int i = 0; i < 2; ++i) {
            TransportResult r = transport_phase(v, w, i, 64);
            REQUIRE(std::abs(r.phase) < 1e-8);
            // consecutive samples overlap strongly at the default step count
            for (std::size_t k = 1; k < r.samples.size(); ++k)
                REQUIRE(std::abs(r.samples[k - 1].second.dot(r.samples[k].second)) > 0.9);
        }
    }
}

TEST_CASE("a boundary gauge shows up as the accumulated phase") {
    Subspace v = sample_subspace(6, 2, 820);
    Subspace w = sample_subspace(6, 2, 821);
    auto gauge = [](double t) { return kPi * t; };
    TransportResult r = transport_phase(v, w, 0, 100, {}, gauge);
    REQUIRE(angle_distance(r.phase, kPi) < 1e-6);
}

TEST_CASE("midpoint integration of the connection converges to the telescoped phase") {
    // Oracle route: integrate A(t) = -i <x(t)| d_t x(t)> by the midpoint rule
    // with finite-difference derivatives; it converges quadratically to the
    // exactly telescoped transport phase.
    Subspace v = sample_subspace(6, 2, 830);
    Subspace w = sample_subspace(6, 2, 831);
    GeodesicCurve curve = geodesic(v, w);
    auto gauge = [](double t) { return 0.8 * std::sin(kPi * t) + 0.4 * t; };
    const int col = 1;

    double exact = transport_phase(v, w, col, 400, {}, gauge).phase;

    auto midpoint_integral = [&](int steps) {
        double h = 0.5 / steps;
        double acc = 0.0;
        for (int s = 0; s < steps; ++s) {
            double t = (s + 0.5) / steps;
            auto rep = [&](double tt) {
                return CVector(curve.frame_at(tt).col(col) * std::polar(1.0, gauge(tt)));
            };
            CVector x = rep(t);
            CVector dx = (rep(t + h) - rep(t - h)) / (2.0 * h);
            acc += (Complex(0.0, -1.0) * x.dot(dx)).real() / steps;
        }
        return acc;
    };
    double e100 = std::abs(wrap_angle(midpoint_integral(100)) - exact);
    double e200 = std::abs(wrap_angle(midpoint_integral(200)) - exact);
    REQUIRE(e100 / e200 == Catch::Approx(4.0).margin(1.5));
}

TEST_CASE("degenerate or invalid transport requests are refused") {
    Subspace v = sample_subspace(6, 2, 840);
    Subspace w = sample_subspace(6, 2, 841);
    REQUIRE_THROWS_AS(transport_phase(v, w, 0, 4), BadSteps);
    REQUIRE_THROWS_AS(transport_phase(v, w, 5, 64), BadArguments);

    double t = 0.45;
    CMatrix raw_v = CMatrix::Zero(6, 2), raw_w = CMatrix::Zero(6, 2);
    raw_v(0, 0) = 1.0;
    raw_v(1, 1) = 1.0;
    raw_w(0, 0) = std::cos(t);
    raw_w(2, 0) = std::sin(t);
    raw_w(1, 1) = std::cos(t);
    raw_w(3, 1) = std::sin(t);
    REQUIRE_THROWS_AS(transport_phase(orthonormalize(raw_v), orthonormalize(raw_w), 0, 64),
                      DegenerateAngles);
}

TEST_CASE("holonomy 3SP reproduces the Bloch Pancharatnam phase") {
    Subspace v = line({1, 0});
    Subspace w = line({1, 1});
    Subspace u = line({1, Complex(0, 1)});
    double phase = three_state_phase_via_holonomy(v, w, u, 0, 0, 0, 200);
    REQUIRE(std::abs(std::abs(phase) - kPi / 4) < 1e-6);
    double direct = std::arg(v.frame.col(0).dot(w.frame.col(0)) *
                             w.frame.col(0).dot(u.frame.col(0)) *
                             u.frame.col(0).dot(v.frame.col(0)));
    REQUIRE(angle_distance(phase, direct) < 1e-6);
}

TEST_CASE("degenerate triangle W = U gives zero 3SP") {
    Subspace v = line({1, 0, 0});
    Subspace w = line({1, 1, 1});
    double phase = three_state_phase_via_holonomy(v, w, w, 0, 0, 0, 64);
    REQUIRE(std::abs(phase) < 1e-8);
}

TEST_CASE("holonomy 3SP matches the invariant route for all index triples") {
    Subspace v = sample_subspace(9, 2, 850);
    Subspace w = sample_subspace(9, 2, 851);
    Subspace u = sample_subspace(9, 2, 852);
    TripleData td = triple_invariants(v, w, u);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double h = three_state_phase_via_holonomy(v, w, u, i, j, k, 256);
                REQUIRE(angle_distance(h, td.tsp.at({i, j, k})) < 1e-6);
            }
}

TEST_CASE("holonomy 3SP is invariant under phase re-randomization") {
    Subspace v = sample_subspace(8, 2, 860);
    Subspace w = sample_subspace(8, 2, 861);
    Subspace u = sample_subspace(8, 2, 862);
    double base = three_state_phase_via_holonomy(v, w, u, 0, 1, 0, 128, {}, 1);
    for (std::uint64_t seed = 2; seed < 12; ++seed) {
        double other = three_state_phase_via_holonomy(v, w, u, 0, 1, 0, 128, {}, seed);
        REQUIRE(angle_distance(base, other) < 1e-6);
    }
}

TEST_CASE("swapping W and U negates the 3SP with transposed indices") {
    Subspace v = sample_subspace(9, 2, 870);
    Subspace w = sample_subspace(9, 2, 871);
    Subspace u = sample_subspace(9, 2, 872);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double fwd = three_state_phase_via_holonomy(v, w, u, i, j, k, 128);
                double swapped = three_state_phase_via_holonomy(v, u, w, k, j, i, 128);
                REQUIRE(angle_distance(fwd, -swapped) < 1e-6);
            }
}

TEST_CASE("orthogonal legs raise PhaseUndefined") {
    // <0|1> = 0: the (V, W) leg arrives orthogonally, the 3SP is undefined
    Subspace v = line({1, 0});
    Subspace w = line({0, 1});
    Subspace u = line({1, 1});
    REQUIRE_THROWS_AS(three_state_phase_via_holonomy(v, w, u, 0, 0, 0, 64), PhaseUndefined);
}

TEST_CASE("vanishing corner overlaps raise PhaseUndefined") {
    // V = span{e1, e2}; W tilts e1 and e2 into e3, e4; U tilts e2 and e1 into
    // e5, e6. The induced bases of V from W and from U come out in opposite
    // slot order, so the principal unitary is anti-diagonal and the (0, 0)
    // corner overlap vanishes.
    CMatrix fv = CMatrix::Zero(6, 2), fw = CMatrix::Zero(6, 2), fu = CMatrix::Zero(6, 2);
    fv(0, 0) = 1.0;
    fv(1, 1) = 1.0;
    double a = 0.3, b = 0.7, c = 0.4, d = 0.9;
    fw(0, 0) = std::cos(a);
    fw(2, 0) = std::sin(a);
    fw(1, 1) = std::cos(b);
    fw(3, 1) = std::sin(b);
    fu(1, 0) = std::cos(c);
    fu(4, 0) = std::sin(c);
    fu(0, 1) = std::cos(d);
    fu(5, 1) = std::sin(d);
    Subspace v = subspace_from_frame(fv), w = subspace_from_frame(fw), u = subspace_from_frame(fu);
    REQUIRE_THROWS_AS(three_state_phase_via_holonomy(v, w, u, 0, 0, 0, 64), PhaseUndefined);
}
