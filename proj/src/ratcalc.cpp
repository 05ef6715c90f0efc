#include "dclab/ratcalc.hpp"

#include <algorithm>
#include <cmath>

namespace dclab::rat {

namespace {

// Relative prune threshold for coefficients produced with rounding noise.
constexpr double kPruneRel = 5e-13;

template <class T>
double coeff_scale(const DecompositionT<T>& d) {
    double s = 0.0;
    for (const auto& c : d.polynomial_part) s = std::max(s, prune_norm(c));
    for (const auto& t : d.pole_terms) s = std::max(s, prune_norm(t.coeff));
    return s;
}

}  // namespace

template <class T>
DecompositionT<T> decompose(const Polynomial<T>& numerator,
                            std::span<const PoleFactor<T>> denominator) {
    for (size_t i = 0; i < denominator.size(); ++i) {
        if (denominator[i].mult < 1)
            throw InvariantError("partial_fractions: factor multiplicity must be >= 1");
        for (size_t j = i + 1; j < denominator.size(); ++j)
            if (scalar_abs(denominator[i].root - denominator[j].root) <= kPoleIdentityTol)
                throw InvariantError("partial_fractions: coincident roots listed as distinct factors");
    }

    DecompositionT<T> out;

    // Polynomial part = quotient of the long division by the expanded denominator.
    Polynomial<T> den = Polynomial<T>::constant(T(1.0));
    for (const auto& f : denominator)
        for (int k = 0; k < f.mult; ++k) den = den * Polynomial<T>{{-f.root, T(1.0)}};
    Polynomial<T> quot, rem;
    poly_divmod(numerator, den, &quot, &rem);
    out.polynomial_part = quot.c;

    // Pole terms from the Taylor expansion of rem / (other factors) at each pole.
    for (const auto& f : denominator) {
        const size_t m = static_cast<size_t>(f.mult);
        std::vector<T> num_series = rem.shifted_coeffs(f.root, m);
        // Series of prod_{q != p} (d_q + w)^{m_q} around w = 0, truncated at order m-1.
        std::vector<T> den_series(m, T(0.0));
        den_series[0] = T(1.0);
        for (const auto& g : denominator) {
            if (&g == &f) continue;
            const T d = f.root - g.root;
            for (int k = 0; k < g.mult; ++k) {
                // multiply den_series by (d + w)
                for (size_t j = m; j-- > 1;) den_series[j] = den_series[j] * d + den_series[j - 1];
                den_series[0] = den_series[0] * d;
            }
        }
        // g = num_series / den_series as a truncated power series.
        std::vector<T> g(m, T(0.0));
        for (size_t k = 0; k < m; ++k) {
            T acc = num_series[k];
            for (size_t j = 0; j < k; ++j) acc = acc - g[j] * den_series[k - j];
            g[k] = acc / den_series[0];
        }
        for (size_t k = 0; k < m; ++k) {
            const int order = static_cast<int>(m - k);
            out.pole_terms.push_back({f.root, order, g[k]});
        }
    }

    // Prune rounding-noise coefficients (and exact zeros).
    const double floor = kPruneRel * coeff_scale(out);
    std::erase_if(out.pole_terms,
                  [&](const PoleTermT<T>& t) { return prune_norm(t.coeff) <= floor; });
    while (!out.polynomial_part.empty() && prune_norm(out.polynomial_part.back()) <= floor)
        out.polynomial_part.pop_back();
    return out;
}

template DecompositionT<cplx> decompose<cplx>(const Polynomial<cplx>&,
                                              std::span<const PoleFactor<cplx>>);
template DecompositionT<CDual> decompose<CDual>(const Polynomial<CDual>&,
                                                std::span<const PoleFactor<CDual>>);

PartialFractionForm::PartialFractionForm(std::vector<cplx> poly,
                                         std::vector<PoleTermT<cplx>> poles)
    : polynomial_part(std::move(poly)), pole_terms(std::move(poles)) {
    check_invariants();
}

void PartialFractionForm::check_invariants() const {
    for (size_t i = 0; i < pole_terms.size(); ++i) {
        if (pole_terms[i].order < 1) throw InvariantError("PartialFractionForm: order < 1");
        for (size_t j = i + 1; j < pole_terms.size(); ++j) {
            if (pole_terms[i].order == pole_terms[j].order &&
                std::abs(pole_terms[i].location - pole_terms[j].location) <= kPoleIdentityTol)
                throw InvariantError("PartialFractionForm: duplicate pole term");
        }
    }
}

cplx PartialFractionForm::eval(cplx z) const {
    cplx acc = 0.0;
    for (size_t i = polynomial_part.size(); i-- > 0;) acc = acc * z + polynomial_part[i];
    for (const auto& t : pole_terms) {
        cplx d = z - t.location;
        cplx p = d;
        for (int k = 1; k < t.order; ++k) p *= d;
        acc += t.coeff / p;
    }
    return acc;
}

std::vector<cplx> PartialFractionForm::pole_locations() const {
    std::vector<cplx> ps;
    for (const auto& t : pole_terms) {
        bool seen = false;
        for (const auto& p : ps)
            if (std::abs(p - t.location) <= kPoleIdentityTol) seen = true;
        if (!seen) ps.push_back(t.location);
    }
    return ps;
}

PartialFractionForm PartialFractionForm::operator+(const PartialFractionForm& o) const {
    PartialFractionForm r;
    r.polynomial_part.assign(std::max(polynomial_part.size(), o.polynomial_part.size()), 0.0);
    for (size_t i = 0; i < polynomial_part.size(); ++i) r.polynomial_part[i] += polynomial_part[i];
    for (size_t i = 0; i < o.polynomial_part.size(); ++i) r.polynomial_part[i] += o.polynomial_part[i];
    r.pole_terms = pole_terms;
    for (const auto& t : o.pole_terms) {
        bool merged = false;
        for (auto& s : r.pole_terms)
            if (s.order == t.order && std::abs(s.location - t.location) <= kPoleIdentityTol) {
                s.coeff += t.coeff;
                merged = true;
                break;
            }
        if (!merged) r.pole_terms.push_back(t);
    }
    std::erase_if(r.pole_terms, [](const PoleTermT<cplx>& t) { return t.coeff == cplx(0.0); });
    while (!r.polynomial_part.empty() && r.polynomial_part.back() == cplx(0.0))
        r.polynomial_part.pop_back();
    return r;
}

PartialFractionForm PartialFractionForm::operator*(double s) const { return *this * cplx(s); }

PartialFractionForm PartialFractionForm::operator*(cplx s) const {
    PartialFractionForm r = *this;
    for (auto& c : r.polynomial_part) c *= s;
    for (auto& t : r.pole_terms) t.coeff *= s;
    return r;
}

PartialFractionForm PartialFractionForm::derivative_z() const {
    PartialFractionForm r;
    if (polynomial_part.size() > 1) {
        r.polynomial_part.resize(polynomial_part.size() - 1);
        for (size_t i = 1; i < polynomial_part.size(); ++i)
            r.polynomial_part[i - 1] = polynomial_part[i] * double(i);
    }
    for (const auto& t : pole_terms)
        r.pole_terms.push_back({t.location, t.order + 1, -double(t.order) * t.coeff});
    return r;
}

PartialFractionForm partial_fractions(const Polynomial<cplx>& numerator,
                                      std::span<const PoleFactor<cplx>> denominator) {
    DecompositionT<cplx> d = decompose(numerator, denominator);
    return PartialFractionForm(std::move(d.polynomial_part), std::move(d.pole_terms));
}

cplx residue(const PartialFractionForm& f, cplx p) {
    cplx r = 0.0;
    for (const auto& t : f.pole_terms)
        if (t.order == 1 && std::abs(t.location - p) <= kPoleIdentityTol) r += t.coeff;
    return r;
}

cplx residue_sum_integral(const PartialFractionForm& f, const path::PathLoop& loop) {
    cplx acc = 0.0;
    for (const cplx p : f.pole_locations()) {
        if (loop.min_distance(p) <= 1e-9)
            throw SingularInputError("residue_sum_integral: pole on the integration path");
        const int w = path::winding_number(loop, p);
        if (w != 0) acc += double(w) * residue(f, p);
    }
    return cplx(0.0, 2.0 * kPi) * acc;
}

}  // namespace dclab::rat
