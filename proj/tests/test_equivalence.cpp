#include <catch2/catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include "grassmann/equivalence.hpp"

using namespace grassmann;

namespace {

Configuration rotate_and_regauge(const Configuration& c, std::uint64_t seed) {
    // same orbit point: ambient unitary plus a fresh basis inside each
    // subspace, which is exactly the gauge freedom a caller could introduce
    CMatrix g = sample_unitary(c.n(), seed);
    Configuration out = c;
    for (int i = 0; i < c.size(); ++i) {
        CMatrix mix = sample_unitary(c.m(), seed + 17 * (i + 1));
        out.subspaces[i] = subspace_from_frame(g * c.subspaces[i].frame * mix, c.tol);
    }
    return out;
}

// canonical pair with prescribed angles inside C^n, n >= 2m
Configuration canonical_pair(const RVector& theta, int n) {
    const int m = static_cast<int>(theta.size());
    CMatrix fv = CMatrix::Zero(n, m), fw = CMatrix::Zero(n, m);
    for (int i = 0; i < m; ++i) {
        fv(i, i) = 1.0;
        fw(i, i) = std::cos(theta(i));
        fw(m + i, i) = std::sin(theta(i));
    }
    Configuration c;
    c.subspaces = {subspace_from_frame(fv), subspace_from_frame(fw)};
    c.labels = {"V", "W"};
    return c;
}

}  // namespace

TEST_CASE("a unitarily rotated configuration is equivalent, with witness") {
    for (int l : {2, 3}) {
        Configuration a = sample_configuration(8, 2, l, 200 + l);
        Configuration b = rotate_and_regauge(a, 300 + l);
        EquivalenceResult r = configs_equivalent(a, b);
        REQUIRE(r.equivalent());
        REQUIRE(r.witness.has_value());
        REQUIRE(r.witness_error < 1e-8);
        for (int i = 0; i < l; ++i) {
            CMatrix img = (*r.witness) * projector(a.subspaces[i]) * r.witness->adjoint();
            REQUIRE((img - projector(b.subspaces[i])).norm() < 1e-8);
        }
    }
}

TEST_CASE("perturbing one subspace breaks equivalence") {
    Configuration a = sample_configuration(8, 2, 3, 210);
    Configuration b = a;
    // mix the last subspace with its complement through a small rotation
    CMatrix h = CMatrix::Zero(8, 8);
    h(0, 7) = 1e-3;
    h(7, 0) = 1e-3;
    CMatrix rot = (Complex(0.0, 1.0) * h).exp();
    b.subspaces[2] = subspace_from_frame(rot * a.subspaces[2].frame, a.tol);
    EquivalenceResult r = configs_equivalent(a, b);
    REQUIRE(r.verdict == EquivalenceResult::Verdict::NotEquivalent);
}

TEST_CASE("pairs with equal angles are always equivalent") {
    // The angle set is a complete pair invariant. Build one pair at random,
    // read its angles, realize the same angles canonically in a rotated
    // frame, and expect equivalence.
    for (int trial = 0; trial < 5; ++trial) {
        Subspace v = sample_subspace(9, 2, 400 + trial);
        Subspace w = sample_subspace(9, 2, 500 + trial);
        Configuration a;
        a.subspaces = {v, w};

        RVector theta = principal_decomposition(v, w).theta;
        Configuration b0 = canonical_pair(theta, 9);
        Configuration b = rotate_and_regauge(b0, 600 + trial);

        EquivalenceResult r = configs_equivalent(a, b);
        REQUIRE(r.equivalent());
        REQUIRE(r.witness_error < 1e-8);
    }
}

TEST_CASE("perturbing one principal angle flips the pair verdict") {
    RVector theta(2);
    theta << 0.4, 0.9;
    Configuration a = canonical_pair(theta, 6);
    RVector theta2 = theta;
    theta2(0) += 1e-3;
    Configuration b = canonical_pair(theta2, 6);
    EquivalenceResult r = configs_equivalent(a, b);
    REQUIRE(r.verdict == EquivalenceResult::Verdict::NotEquivalent);

    EquivalenceResult same = configs_equivalent(a, canonical_pair(theta, 6));
    REQUIRE(same.equivalent());
}

TEST_CASE("a 3SP shift is detected") {
    Configuration a = sample_configuration(9, 2, 3, 220);
    TripleData before = triple_invariants(a.subspaces[0], a.subspaces[1], a.subspaces[2]);

    // rank-preserving perturbation of U: a small unitary generated by a
    // random Hermitian direction
    Prng rng(221);
    CMatrix h = rng.gaussian(9, 9);
    h = (h + h.adjoint()).eval() / 2.0;
    CMatrix rot = (Complex(0.0, 1.0) * (1e-3 * h)).exp();
    Configuration b = a;
    b.subspaces[2] = subspace_from_frame(rot * a.subspaces[2].frame, a.tol);

    TripleData after = triple_invariants(b.subspaces[0], b.subspaces[1], b.subspaces[2]);
    double shift = angle_distance(before.tsp.at({0, 0, 0}), after.tsp.at({0, 0, 0}));
    REQUIRE(shift > 1e-6);  // the targeted entry moved far beyond eq_tol

    EquivalenceResult r = configs_equivalent(a, b);
    REQUIRE(r.verdict == EquivalenceResult::Verdict::NotEquivalent);
}

TEST_CASE("degenerate spectra yield Indeterminate for m > 1") {
    RVector theta(2);
    theta << 0.5, 0.5;
    Configuration a = canonical_pair(theta, 6);
    Configuration b = rotate_and_regauge(a, 230);
    EquivalenceResult r = configs_equivalent(a, b);
    REQUIRE(r.verdict == EquivalenceResult::Verdict::Indeterminate);
}

TEST_CASE("m=1 configurations with vanishing overlaps are still decided") {
    // |0>, |1>, |+>: the (V, W) overlap vanishes, so the 3SP is undefined;
    // the remaining invariants still decide equivalence.
    CMatrix f0(2, 1), f1(2, 1), fp(2, 1);
    f0 << 1, 0;
    f1 << 0, 1;
    fp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Configuration a;
    a.subspaces = {subspace_from_frame(f0), subspace_from_frame(f1), subspace_from_frame(fp)};
    Configuration b = rotate_and_regauge(a, 240);
    EquivalenceResult r = configs_equivalent(a, b);
    REQUIRE(r.equivalent());
    REQUIRE(r.witness_error < 1e-8);
}

TEST_CASE("shape mismatches are rejected") {
    Configuration a = sample_configuration(6, 2, 2, 250);
    Configuration b = sample_configuration(7, 2, 2, 251);
    REQUIRE_THROWS_AS(configs_equivalent(a, b), DimensionMismatch);
}
