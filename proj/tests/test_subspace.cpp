#include <catch2/catch_amalgamated.hpp>

#include "grassmann/subspace.hpp"

using namespace grassmann;
using Catch::Approx;

namespace {

double frob(const CMatrix& a) { return a.norm(); }

double projector_distance(const Subspace& a, const Subspace& b) {
    return frob(projector(a) - projector(b));
}

}  // namespace

TEST_CASE("orthonormalize keeps an already orthonormal frame unchanged") {
    CMatrix raw = CMatrix::Zero(3, 2);
    raw(0, 0) = 1.0;
    raw(1, 1) = 1.0;
    Subspace s = orthonormalize(raw);
    REQUIRE(frob(s.frame - raw) == 0.0);
}

TEST_CASE("orthonormalize produces an orthonormal basis of the span") {
    CMatrix raw = CMatrix::Zero(3, 2);
    raw.col(0) << 1.0, 0.0, 0.0;
    raw.col(1) << 1.0, 1.0, 0.0;
    Subspace s = orthonormalize(raw);
    CMatrix gram = s.frame.adjoint() * s.frame;
    REQUIRE(frob(gram - CMatrix::Identity(2, 2)) < 1e-12);
    // span{e1, e2}
    CMatrix p_expected = CMatrix::Zero(3, 3);
    p_expected(0, 0) = 1.0;
    p_expected(1, 1) = 1.0;
    REQUIRE(frob(projector(s) - p_expected) < 1e-12);
}

TEST_CASE("orthonormalize rejects rank-deficient input") {
    CMatrix raw(3, 2);
    raw.col(0) << 1.0, 2.0, Complex(0.0, 1.0);
    raw.col(1) = raw.col(0);
    REQUIRE_THROWS_AS(orthonormalize(raw), RankDeficient);
}

TEST_CASE("projector of coordinate span") {
    CMatrix raw = CMatrix::Zero(2, 1);
    raw(0, 0) = 1.0;
    Subspace s = orthonormalize(raw);
    CMatrix p = projector(s);
    REQUIRE(std::abs(p(0, 0) - 1.0) < 1e-15);
    REQUIRE(std::abs(p(0, 1)) < 1e-15);
    REQUIRE(std::abs(p(1, 0)) < 1e-15);
    REQUIRE(std::abs(p(1, 1)) < 1e-15);
}

TEST_CASE("projector of (e1+e2)/sqrt(2) has all entries 1/2") {
    CMatrix raw(2, 1);
    raw << 1.0, 1.0;
    Subspace s = orthonormalize(raw);
    CMatrix p = projector(s);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) REQUIRE(std::abs(p(r, c) - 0.5) < 1e-14);
}

TEST_CASE("random projector is Hermitian, idempotent, trace m") {
    Subspace s = sample_subspace(6, 2, 7);
    CMatrix p = projector(s);
    REQUIRE(frob(p - p.adjoint()) < 1e-12);
    REQUIRE(frob(p * p - p) < 1e-9);  // 10 * ortho_tol budget
    REQUIRE(std::abs(p.trace().real() - 2.0) < 1e-10);
    REQUIRE(std::abs(p.trace().imag()) < 1e-12);
}

TEST_CASE("sampled unitary is unitary") {
    CMatrix u = sample_unitary(3, 1);
    REQUIRE(frob(u * u.adjoint() - CMatrix::Identity(3, 3)) < 1e-12);
    REQUIRE(frob(u.adjoint() * u - CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("sampling is deterministic, bitwise") {
    Subspace a = sample_subspace(5, 2, 42);
    Subspace b = sample_subspace(5, 2, 42);
    REQUIRE(a.frame.rows() == b.frame.rows());
    for (int r = 0; r < a.n(); ++r)
        for (int c = 0; c < a.m(); ++c) {
            REQUIRE(a.frame(r, c).real() == b.frame(r, c).real());
            REQUIRE(a.frame(r, c).imag() == b.frame(r, c).imag());
        }
    CMatrix u1 = sample_unitary(4, 9);
    CMatrix u2 = sample_unitary(4, 9);
    REQUIRE((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Haar average of tr[P_V P_W] is m/n") {
    // n=4, m=1: the average squared overlap of independent Haar lines is 1/4.
    const int trials = 10000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        Subspace v = sample_subspace(4, 1, 2 * t + 1000000);
        Subspace w = sample_subspace(4, 1, 2 * t + 1000001);
        acc += (projector(v) * projector(w)).trace().real();
    }
    acc /= trials;
    REQUIRE(std::abs(acc - 0.25) < 0.02);
}

TEST_CASE("projector transforms covariantly under unitaries") {
    for (int t = 0; t < 20; ++t) {
        Subspace s = sample_subspace(7, 3, 100 + t);
        CMatrix u = sample_unitary(7, 200 + t);
        Subspace us = apply_unitary(s, u);
        REQUIRE(frob(projector(us) - u * projector(s) * u.adjoint()) < 1e-10);
    }
}

TEST_CASE("orthonormalize is idempotent on the level of spans") {
    for (int t = 0; t < 10; ++t) {
        Prng rng(300 + t);
        CMatrix raw = rng.gaussian(6, 3);
        Subspace once = orthonormalize(raw);
        Subspace twice = orthonormalize(once.frame);
        REQUIRE(projector_distance(once, twice) < 1e-10);
    }
}

TEST_CASE("subspace_from_frame validates orthonormality") {
    CMatrix good = sample_subspace(5, 2, 17).frame;
    REQUIRE_NOTHROW(subspace_from_frame(good));
    CMatrix bad = good;
    bad(0, 0) += 0.001;
    REQUIRE_THROWS_AS(subspace_from_frame(bad), NotOrthonormal);
}

TEST_CASE("tolerances must be positive") {
    Tolerances t;
    t.eq_tol = 0.0;
    REQUIRE_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("configuration validation") {
    Configuration c = sample_configuration(5, 2, 3, 4);
    REQUIRE_NOTHROW(c.validate());
    REQUIRE(c.n() == 5);
    REQUIRE(c.m() == 2);
    REQUIRE(c.size() == 3);
    c.subspaces.push_back(sample_subspace(5, 1, 99));
    c.labels.push_back("bad");
    REQUIRE_THROWS_AS(c.validate(), DimensionMismatch);
}

TEST_CASE("bad dimensions are rejected") {
    REQUIRE_THROWS_AS(sample_subspace(2, 3, 1), BadDimensions);
    REQUIRE_THROWS_AS(sample_unitary(0, 1), BadDimensions);
}
