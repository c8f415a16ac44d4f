#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grassmann/types.hpp"

namespace grassmann {

/// An m-dimensional subspace of C^n, stored as an n x m orthonormal frame.
/// The frame columns are one particular basis; every exported invariant is
/// insensitive to the residual U(m) basis freedom.
struct Subspace {
    CMatrix frame;  // n x m, frame.adjoint() * frame == I_m

    int n() const { return static_cast<int>(frame.rows()); }
    int m() const { return static_cast<int>(frame.cols()); }
};

/// Orthogonal projector P = F F^dagger of a subspace. Hermitian, idempotent,
/// trace m.
inline CMatrix projector(const Subspace& s) {
    return s.frame * s.frame.adjoint();
}

namespace detail {

/// Fix the column phase: the largest-magnitude entry becomes real positive.
/// Ties are broken by the lowest row index, so the map is deterministic.
inline void normalize_column_phase(Eigen::Ref<CVector> col) {
    Eigen::Index best = 0;
    double best_mag = 0.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
        double mag = std::abs(col(r));
        if (mag > best_mag) {
            best_mag = mag;
            best = r;
        }
    }
    if (best_mag == 0.0) return;
    Complex z = col(best);
    col *= std::conj(z) / std::abs(z);
}

/// Modified Gram-Schmidt, two passes per column.
inline CMatrix modified_gram_schmidt(const CMatrix& raw, double rank_tol) {
    CMatrix q = raw;
    const Eigen::Index m = q.cols();
    for (Eigen::Index k = 0; k < m; ++k) {
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < k; ++j) {
                Complex c = q.col(j).dot(q.col(k));
                q.col(k) -= c * q.col(j);
            }
        }
        double norm = q.col(k).norm();
        if (norm <= rank_tol)
            throw RankDeficient("column " + std::to_string(k) +
                                " is linearly dependent on the previous ones");
        q.col(k) /= norm;
    }
    return q;
}

}  // namespace detail

/// Build a Subspace from a full-column-rank n x m matrix. The returned frame
/// spans the same column space; columns carry the canonical phase convention
/// (largest entry real positive). Throws RankDeficient when the smallest
/// singular value is at or below ortho_tol.
inline Subspace orthonormalize(const CMatrix& raw, const Tolerances& tol = {}) {
    tol.validate();
    if (raw.rows() < raw.cols() || raw.cols() < 1)
        throw BadDimensions("need n >= m >= 1, got " + std::to_string(raw.rows()) +
                            " x " + std::to_string(raw.cols()));
    Eigen::JacobiSVD<CMatrix> svd(raw);
    if (svd.singularValues()(raw.cols() - 1) <= tol.ortho_tol)
        throw RankDeficient("smallest singular value " +
                            std::to_string(svd.singularValues()(raw.cols() - 1)) +
                            " is below ortho_tol");
    CMatrix q = detail::modified_gram_schmidt(raw, tol.ortho_tol);
    for (Eigen::Index k = 0; k < q.cols(); ++k) detail::normalize_column_phase(q.col(k));
    return Subspace{std::move(q)};
}

/// Wrap an already-orthonormal frame. Throws NotOrthonormal if the frame
/// fails F^dagger F == I within ortho_tol.
inline Subspace subspace_from_frame(const CMatrix& frame, const Tolerances& tol = {}) {
    tol.validate();
    if (frame.rows() < frame.cols() || frame.cols() < 1)
        throw BadDimensions("need n >= m >= 1");
    CMatrix gram = frame.adjoint() * frame;
    double err = (gram - CMatrix::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff();
    if (err > tol.ortho_tol)
        throw NotOrthonormal("frame deviates from orthonormality by " + std::to_string(err));
    return Subspace{frame};
}

/// Apply an ambient unitary to a subspace.
inline Subspace apply_unitary(const Subspace& s, const CMatrix& u) {
    if (u.rows() != s.n() || u.cols() != s.n())
        throw DimensionMismatch("unitary size does not match ambient dimension");
    return Subspace{u * s.frame};
}

// ---------------------------------------------------------------------------
// Deterministic sampling
// ---------------------------------------------------------------------------

/// Deterministic pseudo-random source. Gaussians come from mt19937_64 bits
/// through Box-Muller, so a fixed seed gives bitwise-identical streams on any
/// platform with IEEE doubles.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    /// uniform double in (0, 1)
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    Complex cnormal() {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
    }

    CMatrix gaussian(int rows, int cols) {
        CMatrix g(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) g(r, c) = cnormal();
        return g;
    }

  private:
    std::mt19937_64 eng_;
};

/// Haar-distributed subspace: complex Gaussian matrix followed by
/// orthonormalization. Rotation invariance is inherited from the Gaussian
/// measure.
inline Subspace sample_subspace(int n, int m, std::uint64_t seed, const Tolerances& tol = {}) {
    if (n < 1 || m < 1 || m > n) throw BadDimensions("need 1 <= m <= n");
    Prng rng(seed);
    return orthonormalize(rng.gaussian(n, m), tol);
}

/// Haar-distributed n x n unitary: QR of a complex Gaussian matrix with the
/// R-factor phases absorbed into Q, which makes the distribution invariant
/// under left multiplication.
inline CMatrix sample_unitary(int n, std::uint64_t seed) {
    if (n < 1) throw BadDimensions("need n >= 1");
    Prng rng(seed);
    CMatrix g = rng.gaussian(n, n);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        Complex d = r(k, k);
        double mag = std::abs(d);
        q.col(k) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

/// An ordered list of subspaces sharing (n, m).
struct Configuration {
    std::vector<Subspace> subspaces;
    std::vector<std::string> labels;  // optional, parallel to subspaces
    Tolerances tol;

    int n() const { return subspaces.empty() ? 0 : subspaces.front().n(); }
    int m() const { return subspaces.empty() ? 0 : subspaces.front().m(); }
    int size() const { return static_cast<int>(subspaces.size()); }

    void validate() const {
        tol.validate();
        if (subspaces.empty()) throw BadArguments("configuration has no subspaces");
        for (const auto& s : subspaces)
            if (s.n() != n() || s.m() != m())
                throw DimensionMismatch("all subspaces must share (n, m)");
        if (!labels.empty() && labels.size() != subspaces.size())
            throw BadArguments("labels must be empty or match the subspace count");
    }
};

/// Configuration of l independent Haar samples.
inline Configuration sample_configuration(int n, int m, int l, std::uint64_t seed,
                                          const Tolerances& tol = {}) {
    if (l < 1) throw BadDimensions("need l >= 1");
    Configuration c;
    c.tol = tol;
    for (int i = 0; i < l; ++i) {
        c.subspaces.push_back(sample_subspace(n, m, seed + static_cast<std::uint64_t>(i), tol));
        c.labels.push_back("S" + std::to_string(i));
    }
    return c;
}

}  // namespace grassmann
