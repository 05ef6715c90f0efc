#pragma once

#include <functional>
#include <vector>

#include "dclab/components.hpp"
#include "dclab/core.hpp"
#include "dclab/curvegeom.hpp"

namespace dclab::mel {

using dclab::Center;

// ---------------------------------------------------------------------------
// Convention constants. The iterated-integral machinery fixes an ordering
// (inner form first) and all canonical loops are counterclockwise; the signs
// relating those choices to the closed forms are measured once against the
// reference values and pinned here. Each constant has its own test.
// ---------------------------------------------------------------------------

/// m1 closed forms equal this multiple of the counterclockwise residue
/// integral over delta / delta-tilde.
inline constexpr double kFirstOrderOrientation = -1.0;

/// Global normalization relating -(I(w,w') sums) over the flow-oriented
/// vanishing cycle to the closed second-order function. The flow runs the
/// first-center ovals counterclockwise in the z chart and the second-center
/// ovals clockwise.
inline constexpr double kSecondOrderNormalization = -1.0;

/// Physical link: displacement / eps^2 -> this constant times m2_closed,
/// same value at both centers (measured by Richardson extrapolation).
inline constexpr double kDisplacementPerM2 = 4.0;

/// First-order bifurcation functions, closed polynomial forms.
/// first: h < 0, second: h > 1.
double m1_closed(Center center, const geom::Parameters& lambda, double h);

/// Same quantity through residue sums over the enclosed punctures.
double m1_residues(Center center, const geom::Parameters& lambda, double h);

/// Gelfand-Leray derivative (F'_h - Phi'_z) dz as a partial-fraction form.
/// A missing dF_dh means F does not depend on h.
rat::PartialFractionForm gelfand_leray(const geom::RelativeOneForm& form);

/// Second-order bifurcation function, closed form. First center (h < 0):
/// 2 pi [h + h^2/2 + ln(1-h)]. Second center (h > 1):
/// pi (h-1)(h-4) + 2 pi ln h, the representative produced by the iterated
/// route and by the displacement map itself (it differs from the naive
/// involution image by pi(1-h), an element of the first-order span).
double m2_closed(Center center, double h);

/// Second-order function from length-two iterated integrals over the
/// vanishing-cycle loop (the independent route).
double m2_iterated(Center center, double h, double tol = 1e-9);

/// The two separate contributions whose sum is m2 (first center):
/// -int w5 w2'  and  -int w2 w5'.
double m2_part_w5_glw2(double h, double tol = 1e-9);
double m2_part_w2_glw5(double h, double tol = 1e-9);

enum class CommutatorMode { determinant, direct };

/// Iterated integral of (omega, omega') over the commutator loop of alpha and
/// beta, either via the period determinant (residue calculus) or by direct
/// quadrature over the composed loop. Constant in h.
cplx commutator_integral(const geom::Parameters& lambda, cplx h, CommutatorMode mode,
                         double tol = 1e-7);

// Class in the rank-two lattice spanned by the vanishing cycle and the
// commutator (alpha, beta).
struct MonodromyClass {
    long k_delta = 0;
    long k_comm = 0;
    friend bool operator==(const MonodromyClass&, const MonodromyClass&) = default;
};

enum class TurnAround { h0, h1 };

/// Action of a turn of h around 0 or 1 on a monodromy class.
MonodromyClass monodromy_action(TurnAround around, MonodromyClass cls, Center center);

/// h [c1 (h-1) + c2 h + c3 M2(h)] for the first center;
/// (h-1) [c1 (h-1) - 2 c2 + c3 M2~(h)] for the second.
double bifurcation_pair_eval(const BifurcationPair& pair, double h, Center center);

/// The seven tracked dz-forms: omega_1..omega_5 plus the Gelfand-Leray
/// derivatives of omega_2 and omega_5.
std::array<rat::PartialFractionForm, 7> tracked_forms(double h);

/// Shuffle defect |I(a,b) + I(b,a) - (contour a)(contour b)| for a pair of
/// dz-forms over a loop; zero for exact iterated integrals.
double shuffle_defect(const rat::PartialFractionForm& a, const rat::PartialFractionForm& b,
                      const path::PathLoop& loop, double tol = 5e-9);

struct ZeroCount {
    int count = 0;
    std::vector<double> zeros;
    bool tangency_suspected = false;
    std::vector<double> tangency_locations;
};

/// Sign-change count of f on (lo, hi) over a uniform grid, each bracket
/// polished by bisection; one grid-doubling verification pass. Endpoints must
/// not be zeros (|f| > 1e-12).
ZeroCount count_zeros(const std::function<double(double)>& f, double lo, double hi,
                      int grid = 4096);

}  // namespace dclab::mel
