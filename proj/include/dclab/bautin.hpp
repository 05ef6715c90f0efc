#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dclab/components.hpp"
#include "dclab/core.hpp"
#include "dclab/curvegeom.hpp"

namespace dclab::bautin {

// ---------------------------------------------------------------------------
// Exact rational arithmetic (int64 with overflow checks). Arc classification
// is order-sensitive discrete data; floats appear only in validation.
// ---------------------------------------------------------------------------

struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;  // > 0, reduced

    Rat() = default;
    Rat(std::int64_t n) : num(n) {}
    Rat(std::int64_t n, std::int64_t d);

    bool is_zero() const { return num == 0; }
    double to_double() const { return double(num) / double(den); }

    friend Rat operator+(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a, const Rat& b);
    friend Rat operator*(const Rat& a, const Rat& b);
    friend Rat operator-(const Rat& a) { Rat r = a; r.num = -r.num; return r; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
};

// Polynomial in the arc parameter, exact coefficients, ascending powers.
struct RatPoly {
    std::vector<Rat> c;

    bool is_zero() const;
    /// Order of vanishing at 0; -1 for the zero polynomial.
    int ord() const;
    Rat at(int k) const { return k < int(c.size()) ? c[size_t(k)] : Rat(0); }
    double eval(double eps) const;

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
};

// Polynomial one-parameter family eps -> lambda(eps), lambda(0) = 0.
struct ArcGerm {
    std::array<RatPoly, 5> l;  // l[0] = lambda_1, ...

    void check_invariants() const;  // zero constant terms, not the zero arc
    geom::Parameters eval(double eps) const;
};

/// CLI arc format: `l1=<poly>;...;l5=<poly>`, polynomials in `e` with integer
/// or rational coefficients, e.g. `l1=e; l3=-e+3/2*e^2`.
ArcGerm parse_arc(const std::string& text);

// ---------------------------------------------------------------------------
// Parameter-space algebra
// ---------------------------------------------------------------------------

struct NormalFormCoefficients {
    // a[i][j], b[i][j] multiply x^i y^j in the two components.
    std::array<std::array<double, 3>, 3> a{}, b{};
};

/// The normal-form substitution table lambda -> (a_ij, b_ij).
NormalFormCoefficients normal_form_substitution(const geom::Parameters& lambda);

/// Focal values (v3, v5, v7) evaluated with A = -1, B = l2+i l3, C = l4+i l5.
std::array<double, 3> focal_values(const geom::Parameters& lambda);

/// Generators of the Bautin ideal of the chosen center evaluated at lambda:
/// first: (l1, l3, l2 l5); second: (l1+l3+l1 l2, l5, l3 l4).
std::array<double, 3> ideal_generators(Center center, const geom::Parameters& lambda);

struct CenterMembership {
    bool rv1 = false, lv1 = false, rv2 = false, lv2 = false;
};

/// Exact membership tests (tolerance 1e-12) in the four center-set components.
CenterMembership center_membership(const geom::Parameters& lambda);

// Carries the running branch of arg z between successive evaluations along an
// orbit; explicit state, never hidden.
struct ThetaTracker {
    bool initialized = false;
    cplx prev{};
    double theta = 0.0;
};

/// Darboux first integral on the Lotka-Volterra branch of the second center
/// (l4 = l5 = 0, l1+l3+l1 l2 = 0): |z|^2 e^{-2 l1 theta} / |a z + conj(a z) + 1|^p.
double lv_first_integral(const geom::Parameters& lambda, double x, double y, ThetaTracker& state);

/// Parameters of the field conjugate to X_lambda under (x,y) -> (x,1-y)
/// followed by the normalizing affine change; exchanges the two centers.
/// The conjugacy is verified pointwise at construction (1e-12).
geom::Parameters involution_parameters(const geom::Parameters& lambda);

// ---------------------------------------------------------------------------
// Arc classification on the exceptional divisor
// ---------------------------------------------------------------------------

enum class ArcComponent {
    E1,
    E2,
    E3,
    inside_center_variety_1,
    inside_center_variety_2,
    inside_both_center_varieties,
};

std::string to_string(ArcComponent c);

// Primitive integer representative of a projective triple.
using IntTriple = std::array<std::int64_t, 3>;

struct ArcClass {
    std::optional<IntTriple> p1, p2;  // absent when the factor's generators vanish identically
    ArcComponent component = ArcComponent::E3;
};

/// Limit point of the projectivized ideal generators along the arc, plus the
/// component tag from the order case analysis (cross-checked against the
/// component equations; disagreement throws).
ArcClass classify_arc(const ArcGerm& arc);

/// The exact generator triples of the arc as polynomials in eps.
std::array<RatPoly, 3> generator_polys(Center center, const ArcGerm& arc);

/// Random projective pair on the given exceptional-divisor component.
BifurcationPair sample_component(EComponent component, std::mt19937_64& rng);

}  // namespace dclab::bautin
