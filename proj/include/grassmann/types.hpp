#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grassmann {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical tolerances shared by all operations. All values are
/// dimensionless and must be strictly positive.
struct Tolerances {
    double ortho_tol = 1e-10;  ///< frame orthonormality / rank threshold
    double eq_tol = 1e-8;      ///< equality of invariants
    double deg_tol = 1e-7;     ///< spectral degeneracy detection

    void validate() const {
        if (!(ortho_tol > 0.0) || !(eq_tol > 0.0) || !(deg_tol > 0.0))
            throw std::invalid_argument("Tolerances must be strictly positive");
    }
};

// ---------------------------------------------------------------------------
// Error hierarchy. DomainError maps to CLI exit code 2, IoError to exit 1.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

#define GRASSMANN_DOMAIN_ERROR(NAME)            \
    class NAME : public DomainError {           \
      public:                                   \
        using DomainError::DomainError;         \
    };

GRASSMANN_DOMAIN_ERROR(RankDeficient)
GRASSMANN_DOMAIN_ERROR(DimensionMismatch)
GRASSMANN_DOMAIN_ERROR(NotOrthonormal)
GRASSMANN_DOMAIN_ERROR(BadDimensions)
GRASSMANN_DOMAIN_ERROR(BadArguments)
GRASSMANN_DOMAIN_ERROR(DegenerateAngles)
GRASSMANN_DOMAIN_ERROR(PhaseUndefined)
GRASSMANN_DOMAIN_ERROR(TooSmallAmbient)
GRASSMANN_DOMAIN_ERROR(BadOrder)
GRASSMANN_DOMAIN_ERROR(BadSteps)
GRASSMANN_DOMAIN_ERROR(StepTooLarge)
GRASSMANN_DOMAIN_ERROR(NonSmoothFrame)
GRASSMANN_DOMAIN_ERROR(InvalidLoop)

#undef GRASSMANN_DOMAIN_ERROR

class ParseError : public IoError {
  public:
    using IoError::IoError;
};

class SchemaError : public IoError {
  public:
    using IoError::IoError;
};

// ---------------------------------------------------------------------------
// Angle helpers. All exported phases live in (-pi, pi].
// ---------------------------------------------------------------------------

/// Reduce an angle to the principal branch (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::fmod(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    if (r > kPi) r -= 2.0 * kPi;
    return r;
}

/// Wraparound-aware distance between two phases mod 2*pi.
inline double angle_distance(double a, double b) {
    return std::abs(wrap_angle(a - b));
}

/// Clamp a cosine that may have drifted slightly outside [0, 1].
inline double clamp_cosine(double c) {
    if (c < 0.0) return 0.0;
    if (c > 1.0) return 1.0;
    return c;
}

}  // namespace grassmann
