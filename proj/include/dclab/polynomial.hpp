#pragma once

#include <algorithm>
#include <vector>

#include "dclab/core.hpp"

namespace dclab {

// Dense univariate polynomial, ascending powers. Scalar T is complex<double>
// or CDual; operations are exact up to rounding.
template <class T>
struct Polynomial {
    std::vector<T> c;

    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c(std::move(coeffs)) {}

    static Polynomial constant(T a) { return Polynomial{{a}}; }
    static Polynomial monomial(int degree, T a = T(1.0)) {
        std::vector<T> v(static_cast<size_t>(degree) + 1, T(0.0));
        v.back() = a;
        return Polynomial{std::move(v)};
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const {
        for (const auto& a : c)
            if (scalar_abs(a) != 0.0) return false;
        return true;
    }

    void trim(double eps = 0.0) {
        while (!c.empty() && scalar_abs(c.back()) <= eps) c.pop_back();
    }

    T eval(const T& z) const {
        T acc(0.0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
        return acc;
    }

    Polynomial derivative() const {
        if (c.size() <= 1) return Polynomial{};
        std::vector<T> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * T(double(i));
        return Polynomial{std::move(d)};
    }

    // Coefficients of p(x0 + w) in w, up to order `count-1` (Taylor shift).
    std::vector<T> shifted_coeffs(const T& x0, size_t count) const {
        std::vector<T> out(count, T(0.0));
        // Horner with truncated series accumulator.
        for (size_t i = c.size(); i-- > 0;) {
            for (size_t k = count; k-- > 1;) out[k] = out[k] * x0 + out[k - 1];
            out[0] = out[0] * x0 + c[i];
        }
        return out;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0.0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = r[i] + a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] = r[i] + b.c[i];
        return Polynomial{std::move(r)};
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0.0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = r[i] + a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] = r[i] - b.c[i];
        return Polynomial{std::move(r)};
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.c.empty() || b.c.empty()) return Polynomial{};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0.0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = r[i + j] + a.c[i] * b.c[j];
        return Polynomial{std::move(r)};
    }
    friend Polynomial operator*(const T& s, const Polynomial& p) {
        Polynomial r = p;
        for (auto& a : r.c) a = a * s;
        return r;
    }
};

// Long division: num = q*den + r with deg r < deg den. den must be nonzero.
template <class T>
void poly_divmod(const Polynomial<T>& num, const Polynomial<T>& den,
                 Polynomial<T>* q, Polynomial<T>* r) {
    Polynomial<T> d = den;
    d.trim();
    if (d.c.empty()) throw InvariantError("poly_divmod: zero divisor");
    Polynomial<T> rem = num;
    rem.trim();
    const int dd = d.degree();
    const T lead = d.c.back();
    std::vector<T> quot;
    if (rem.degree() >= dd) quot.assign(static_cast<size_t>(rem.degree() - dd) + 1, T(0.0));
    while (rem.degree() >= dd && !rem.c.empty()) {
        const int k = rem.degree() - dd;
        const T f = rem.c.back() / lead;
        quot[static_cast<size_t>(k)] = f;
        for (int i = 0; i <= dd; ++i)
            rem.c[static_cast<size_t>(k + i)] = rem.c[static_cast<size_t>(k + i)] - f * d.c[static_cast<size_t>(i)];
        rem.c.pop_back();  // leading coefficient cancelled exactly
    }
    if (q) *q = Polynomial<T>{std::move(quot)};
    if (r) *r = std::move(rem);
}

template <class T>
struct PoleFactor {
    T root;
    int mult = 1;
};

// Rational function with the denominator kept in factored form. The pole set
// is tracked through arithmetic; no cancellation is attempted (the partial
// fraction decomposition absorbs removable factors).
template <class T>
struct FactoredRational {
    Polynomial<T> num;
    std::vector<PoleFactor<T>> den;

    static FactoredRational from_poly(Polynomial<T> p) { return {std::move(p), {}}; }
    static FactoredRational constant(T a) { return {Polynomial<T>::constant(a), {}}; }

    // 1/(z - root)^mult scaled by `scale`.
    static FactoredRational simple_pole(T root, int mult, T scale) {
        return {Polynomial<T>::constant(scale), {{root, mult}}};
    }

    T eval(const T& z) const {
        T v = num.eval(z);
        for (const auto& f : den)
            for (int k = 0; k < f.mult; ++k) v = v / (z - f.root);
        return v;
    }

    friend FactoredRational operator*(const FactoredRational& a, const FactoredRational& b) {
        FactoredRational r;
        r.num = a.num * b.num;
        r.den = a.den;
        for (const auto& f : b.den) merge_factor(r.den, f);
        return r;
    }

    friend FactoredRational operator+(const FactoredRational& a, const FactoredRational& b) {
        // Common denominator: union of factors with max multiplicity.
        std::vector<PoleFactor<T>> common = a.den;
        for (const auto& f : b.den) {
            bool found = false;
            for (auto& g : common)
                if (same_root(g.root, f.root)) {
                    g.mult = std::max(g.mult, f.mult);
                    found = true;
                    break;
                }
            if (!found) common.push_back(f);
        }
        Polynomial<T> na = a.num * cofactor(common, a.den);
        Polynomial<T> nb = b.num * cofactor(common, b.den);
        return {na + nb, std::move(common)};
    }

    friend FactoredRational operator-(const FactoredRational& a, const FactoredRational& b) {
        return a + (T(-1.0) * b);
    }
    friend FactoredRational operator*(const T& s, const FactoredRational& a) {
        FactoredRational r = a;
        r.num = s * r.num;
        return r;
    }

    static bool same_root(const T& a, const T& b) { return scalar_abs(a - b) <= 1e-12; }

  private:
    static void merge_factor(std::vector<PoleFactor<T>>& dst, const PoleFactor<T>& f) {
        for (auto& g : dst)
            if (same_root(g.root, f.root)) {
                g.mult += f.mult;
                return;
            }
        dst.push_back(f);
    }

    // Product of (z-root)^(common.mult - own.mult) over all common factors.
    static Polynomial<T> cofactor(const std::vector<PoleFactor<T>>& common,
                                  const std::vector<PoleFactor<T>>& own) {
        Polynomial<T> p = Polynomial<T>::constant(T(1.0));
        for (const auto& g : common) {
            int have = 0;
            for (const auto& f : own)
                if (same_root(f.root, g.root)) {
                    have = f.mult;
                    break;
                }
            for (int k = have; k < g.mult; ++k)
                p = p * Polynomial<T>{{-g.root, T(1.0)}};
        }
        return p;
    }
};

}  // namespace dclab
