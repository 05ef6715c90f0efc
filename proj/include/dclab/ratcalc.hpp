#pragma once

#include <span>
#include <vector>

#include "dclab/core.hpp"
#include "dclab/pathint.hpp"
#include "dclab/polynomial.hpp"

namespace dclab::rat {

// Poles closer than this are considered coincident.
inline constexpr double kPoleIdentityTol = 1e-12;

template <class T>
struct PoleTermT {
    T location{};
    int order = 1;
    T coeff{};
};

// Generic decomposition result; T is complex<double> or CDual.
template <class T>
struct DecompositionT {
    std::vector<T> polynomial_part;        // ascending powers of z
    std::vector<PoleTermT<T>> pole_terms;  // coeff / (z - location)^order
};

// A complex rational function of z in partial-fraction representation.
// Pole locations are pairwise distinct; orders >= 1; zero coefficients pruned.
struct PartialFractionForm {
    std::vector<cplx> polynomial_part;
    std::vector<PoleTermT<cplx>> pole_terms;

    PartialFractionForm() = default;
    PartialFractionForm(std::vector<cplx> poly, std::vector<PoleTermT<cplx>> poles);

    cplx eval(cplx z) const;
    std::vector<cplx> pole_locations() const;

    PartialFractionForm operator+(const PartialFractionForm& o) const;
    PartialFractionForm operator*(double s) const;
    PartialFractionForm operator*(cplx s) const;

    /// d/dz, still a partial-fraction form.
    PartialFractionForm derivative_z() const;

    void check_invariants() const;
};

/// Decompose numerator / prod (z - root_i)^mult_i. Computed by Taylor
/// expansion at each pole (limit formulas), not by a linear solve.
template <class T>
DecompositionT<T> decompose(const Polynomial<T>& numerator,
                            std::span<const PoleFactor<T>> denominator);

PartialFractionForm partial_fractions(const Polynomial<cplx>& numerator,
                                      std::span<const PoleFactor<cplx>> denominator);

/// Coefficient of (z - p)^{-1}; 0 when p is not a pole.
cplx residue(const PartialFractionForm& f, cplx p);

/// 2 pi i * sum over poles of winding(loop, pole) * residue. Poles must stay
/// farther than 1e-9 from the path.
cplx residue_sum_integral(const PartialFractionForm& f, const path::PathLoop& loop);

}  // namespace dclab::rat
