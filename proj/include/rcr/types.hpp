#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcr {

using cplx = std::complex<double>;

/// Real contravariant 4-vector (x^0, x^1, x^2, x^3), natural units.
using FourVector = std::array<double, 4>;

/// Complex contravariant 4-vector (polarization vectors, currents).
using CFourVector = std::array<cplx, 4>;

/// Rank-2 complex tensor with lower indices, T[a][b].
using Tensor4 = std::array<std::array<cplx, 4>, 4>;

/// Metric signature (+,-,-,-).
inline constexpr std::array<double, 4> kMetric{1.0, -1.0, -1.0, -1.0};

inline constexpr double kPi = 3.14159265358979323846;

inline double minkowski(const FourVector& a, const FourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

/// Bilinear (no conjugation) Minkowski product of complex vectors.
inline cplx minkowski(const CFourVector& a, const CFourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

inline CFourVector lower(const CFourVector& v) {
    return {v[0], -v[1], -v[2], -v[3]};
}

inline CFourVector conj(const CFourVector& v) {
    return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2]), std::conj(v[3])};
}

inline CFourVector complexify(const FourVector& v) {
    return {v[0], v[1], v[2], v[3]};
}

// Error hierarchy. Callers that only care about "something went wrong"
// catch rcr::Error; the CLI maps specific kinds onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested amplitudes would not fit under the Fock truncation.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Dense tensor-product form would exceed the configured amplitude cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Momentum on the excluded ray of the spinor section, or off the light cone.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A Lorentz element that does not permute the grid and has no evaluator.
class IncompatibleElement : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rcr
