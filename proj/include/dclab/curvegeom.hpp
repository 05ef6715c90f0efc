#pragma once

#include <optional>
#include <utility>

#include "dclab/core.hpp"
#include "dclab/pathint.hpp"
#include "dclab/ratcalc.hpp"

namespace dclab::geom {

// The five real perturbation parameters; A, B, C are always derived.
struct Parameters {
    double l1 = 0, l2 = 0, l3 = 0, l4 = 0, l5 = 0;

    static constexpr cplx A{-1.0, 0.0};
    cplx B() const { return {l2, l3}; }
    cplx C() const { return {l4, l5}; }

    double operator[](int i) const;  // 1-based
    double norm_inf() const;
};

// Punctures of the level curve in the z chart: a = -ih, b = -i(h-1), c = 0.
struct Punctures {
    cplx a{}, b{}, c{0.0};
    cplx R2{};  // h(h-1) = -a b
};

/// h must stay away from the critical values 0 and 1.
Punctures punctures(cplx h);

/// H(x,y) = (x^2+y^2)/(2y-1); y = 1/2 is singular.
double hamiltonian(double x, double y);

/// z = x + i(y - h) with h = H(x,y).
std::pair<cplx, double> chart_to_zh(double x, double y);

/// Inverse chart; defined for complex points of the level curve, z != 0.
std::pair<cplx, cplx> chart_from_zh(cplx z, double h);

// One-form F dz + Phi dh in the (z,h) chart. dF_dh is the analytic total
// h-derivative of F at frozen z (pole motion included).
struct RelativeOneForm {
    rat::PartialFractionForm F;
    rat::PartialFractionForm Phi;
    std::optional<rat::PartialFractionForm> dF_dh;
};

/// The perturbation one-form number `index` (1..5) pulled back to the curve
/// of level h, with its analytic h-derivative.
RelativeOneForm omega_form(int index, cplx h);

/// Independent evaluation of the same pullback by the chain rule through the
/// (x,y) chart at a single point; no partial fractions involved.
std::pair<cplx, cplx> pullback_oracle(int index, cplx h, cplx z);

/// dz-part of sum lambda_i omega_i at level h.
rat::PartialFractionForm omega_combined_F(const Parameters& lambda, cplx h);

enum class LoopKind { alpha, beta, gamma, delta, delta_tilde };

/// Canonical loops, all counterclockwise. alpha, beta, gamma are circles of
/// radius 0.25 * (min pairwise puncture distance) around a, b, 0; delta is
/// the circle |z| = sqrt(h(h-1)) for h < 0, delta_tilde the same for h > 1.
/// Winding numbers are verified by a residue probe at construction.
path::PathLoop canonical_loop(LoopKind kind, double h);

/// alpha/beta/gamma at complex h (monodromy experiments).
path::PathLoop canonical_loop(LoopKind kind, cplx h);

}  // namespace dclab::geom
