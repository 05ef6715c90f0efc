#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dclab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Error taxonomy. Each maps to one failure mode named in the module contracts.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A domain-type invariant was violated (coincident poles, open path, ...).
struct InvariantError : Error {
    using Error::Error;
};

/// Input sits on (or too close to) a singular locus of the operation.
struct SingularInputError : Error {
    using Error::Error;
};

/// Argument outside the validity range stated by the operation.
struct RangeError : Error {
    using Error::Error;
};

/// A quadrature or iteration failed to reach its tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// First-order dual number over complex<double>: carries a value and its
// derivative with respect to one parameter through arbitrary arithmetic.
// Used to obtain analytic h-derivatives of rational data built at fixed h.
// ---------------------------------------------------------------------------

struct CDual {
    cplx v{0.0};  // value
    cplx d{0.0};  // d/dh

    CDual() = default;
    CDual(cplx value) : v(value) {}
    CDual(cplx value, cplx deriv) : v(value), d(deriv) {}
    CDual(double value) : v(value) {}

    static CDual variable(cplx value) { return CDual(value, cplx(1.0)); }

    CDual operator-() const { return {-v, -d}; }

    friend CDual operator+(const CDual& a, const CDual& b) { return {a.v + b.v, a.d + b.d}; }
    friend CDual operator-(const CDual& a, const CDual& b) { return {a.v - b.v, a.d - b.d}; }
    friend CDual operator*(const CDual& a, const CDual& b) {
        return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    friend CDual operator/(const CDual& a, const CDual& b) {
        const cplx q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }

    CDual& operator+=(const CDual& o) { *this = *this + o; return *this; }
    CDual& operator-=(const CDual& o) { *this = *this - o; return *this; }
    CDual& operator*=(const CDual& o) { *this = *this * o; return *this; }
    CDual& operator/=(const CDual& o) { *this = *this / o; return *this; }

    friend bool operator==(const CDual& a, const CDual& b) { return a.v == b.v && a.d == b.d; }
};

// Magnitude of the value part; tolerance checks ignore the derivative.
inline double scalar_abs(const cplx& z) { return std::abs(z); }
inline double scalar_abs(const CDual& z) { return std::abs(z.v); }

// Pruning must keep terms whose value vanishes at an isolated parameter but
// whose derivative does not.
inline double prune_norm(const cplx& z) { return std::abs(z); }
inline double prune_norm(const CDual& z) { return std::max(std::abs(z.v), std::abs(z.d)); }

inline cplx value_part(const cplx& z) { return z; }
inline cplx value_part(const CDual& z) { return z.v; }

}  // namespace dclab
