#include "dclab/curvegeom.hpp"

#include <array>
#include <cmath>

namespace dclab::geom {

namespace {

constexpr cplx kI{0.0, 1.0};

bool near_critical(cplx h) { return std::abs(h) < 1e-9 || std::abs(h - 1.0) < 1e-9; }

}  // namespace

double Parameters::operator[](int i) const {
    switch (i) {
        case 1: return l1;
        case 2: return l2;
        case 3: return l3;
        case 4: return l4;
        case 5: return l5;
        default: throw RangeError("Parameters: index out of range");
    }
}

double Parameters::norm_inf() const {
    return std::max({std::abs(l1), std::abs(l2), std::abs(l3), std::abs(l4), std::abs(l5)});
}

Punctures punctures(cplx h) {
    if (near_critical(h)) throw SingularInputError("punctures: h at a critical value");
    Punctures p;
    p.a = -kI * h;
    p.b = -kI * (h - 1.0);
    p.c = 0.0;
    p.R2 = h * (h - 1.0);
    return p;
}

double hamiltonian(double x, double y) {
    const double d = 2.0 * y - 1.0;
    if (std::abs(d) < 1e-12) throw SingularInputError("hamiltonian: y = 1/2");
    return (x * x + y * y) / d;
}

std::pair<cplx, double> chart_to_zh(double x, double y) {
    const double h = hamiltonian(x, y);
    return {cplx(x, y - h), h};
}

std::pair<cplx, cplx> chart_from_zh(cplx z, double h) {
    if (std::abs(z) < 1e-300) throw SingularInputError("chart_from_zh: z = 0 is a puncture");
    const cplx R2 = cplx(h) * cplx(h - 1.0);
    const cplx x = (z * z + R2) / (2.0 * z);
    const cplx y = -kI * (z * z + 2.0 * kI * cplx(h) * z - R2) / (2.0 * z);
    return {x, y};
}

// ---------------------------------------------------------------------------
// The forms. Everything is assembled as a rational function of z at fixed h
// with dual-number coefficients, so the analytic h-derivative (pole motion
// included) falls out of the same computation.
// ---------------------------------------------------------------------------

namespace {

template <class T>
struct Chart {
    T h, R2, a, b;
    FactoredRational<T> x, y, inv2ym1, dxdz, dydz, dxdh, dydh;
};

template <class T>
Chart<T> make_chart(T h) {
    const T i = T(kI);
    const T one(1.0), half(0.5);
    Chart<T> c;
    c.h = h;
    c.R2 = h * (h - one);
    c.a = T(0.0) - i * h;
    c.b = T(0.0) - i * (h - one);

    using FR = FactoredRational<T>;
    using P = Polynomial<T>;
    const T zero(0.0);

    // x = (z^2 + R^2) / (2 z)
    c.x = FR{P{{half * c.R2, zero, half}}, {{zero, 1}}};
    // y = -i (z^2 + 2 i h z - R^2) / (2 z)
    c.y = FR{P{{half * i * c.R2, h, T(0.0) - half * i}}, {{zero, 1}}};
    // 1/(2y-1) = i z / ((z-a)(z-b))
    c.inv2ym1 = FR{P{{zero, i}}, {{c.a, 1}, {c.b, 1}}};
    // dx/dz = (z^2 - R^2) / (2 z^2)
    c.dxdz = FR{P{{T(0.0) - half * c.R2, zero, half}}, {{zero, 2}}};
    // dy/dz = (z^2 + R^2) / (2 i z^2)
    c.dydz = FR{P{{T(0.0) - half * i * c.R2, zero, T(0.0) - half * i}}, {{zero, 2}}};
    // dx/dh = (2h - 1) / (2 z)
    c.dxdh = FR{P{{half * (T(2.0) * h - one)}}, {{zero, 1}}};
    // dy/dh = (z - (a+b)/2) / z, a + b = -i(2h-1)
    c.dydh = FR{P{{half * i * (T(2.0) * h - one), one}}, {{zero, 1}}};
    return c;
}

// Numerators of omega_index over (2y-1)^2: returns {N_dx, N_dy}.
template <class T>
std::array<FactoredRational<T>, 2> omega_numerators(int index, const FactoredRational<T>& x,
                                                    const FactoredRational<T>& y) {
    using FR = FactoredRational<T>;
    switch (index) {
        case 1: return {T(-1.0) * y, x};
        case 2: return {FR::constant(T(0.0)), x * x + y * y};
        case 3: return {T(-1.0) * (x * x + y * y), FR::constant(T(0.0))};
        case 4: return {T(2.0) * (x * y), x * x - y * y};
        case 5: return {T(-1.0) * (x * x - y * y), T(2.0) * (x * y)};
        default: throw RangeError("omega_form: index must be 1..5");
    }
}

template <class T>
std::pair<FactoredRational<T>, FactoredRational<T>> omega_rational(int index, const Chart<T>& c) {
    const auto [ndx, ndy] = omega_numerators(index, c.x, c.y);
    const FactoredRational<T> inv_sq = c.inv2ym1 * c.inv2ym1;
    FactoredRational<T> F = (ndx * c.dxdz + ndy * c.dydz) * inv_sq;
    FactoredRational<T> Phi = (ndx * c.dxdh + ndy * c.dydh) * inv_sq;
    return {std::move(F), std::move(Phi)};
}

rat::PartialFractionForm value_part_form(const rat::DecompositionT<CDual>& d) {
    std::vector<cplx> poly;
    poly.reserve(d.polynomial_part.size());
    for (const auto& c : d.polynomial_part) poly.push_back(c.v);
    rat::PartialFractionForm out;
    out.polynomial_part = std::move(poly);
    for (const auto& t : d.pole_terms) out.pole_terms.push_back({t.location.v, t.order, t.coeff.v});
    return out;
}

// d/dh of sum coeff_k(h) / (z - p_k(h))^ord + poly(h,z) at frozen z.
rat::PartialFractionForm derivative_part_form(const rat::DecompositionT<CDual>& d) {
    rat::PartialFractionForm out;
    rat::PartialFractionForm terms;
    for (const auto& t : d.pole_terms) {
        terms.pole_terms.push_back({t.location.v, t.order, t.coeff.d});
        terms.pole_terms.push_back(
            {t.location.v, t.order + 1, double(t.order) * t.coeff.v * t.location.d});
    }
    std::vector<cplx> poly;
    for (const auto& c : d.polynomial_part) poly.push_back(c.d);
    out.polynomial_part = std::move(poly);
    out = out + terms;  // merges equal (pole, order) pairs and prunes zeros
    return out;
}

rat::DecompositionT<CDual> dual_decomposition(const FactoredRational<CDual>& fr) {
    return rat::decompose<CDual>(fr.num, fr.den);
}

}  // namespace

RelativeOneForm omega_form(int index, cplx h) {
    if (near_critical(h)) throw SingularInputError("omega_form: h at a critical value");
    const Chart<CDual> chart = make_chart<CDual>(CDual::variable(h));
    const auto [Fr, Phir] = omega_rational(index, chart);
    const auto Fd = dual_decomposition(Fr);
    const auto Phid = dual_decomposition(Phir);
    RelativeOneForm out;
    out.F = value_part_form(Fd);
    out.Phi = value_part_form(Phid);
    out.dF_dh = derivative_part_form(Fd);
    return out;
}

std::pair<cplx, cplx> pullback_oracle(int index, cplx h, cplx z) {
    if (near_critical(h)) throw SingularInputError("pullback_oracle: h at a critical value");
    const cplx R2 = h * (h - 1.0);
    if (std::abs(z) < 1e-12 || std::abs(z + kI * h) < 1e-12 || std::abs(z + kI * (h - 1.0)) < 1e-12)
        throw SingularInputError("pullback_oracle: z at a puncture");
    const cplx x = (z * z + R2) / (2.0 * z);
    const cplx y = -kI * (z * z + 2.0 * kI * h * z - R2) / (2.0 * z);
    cplx ndx, ndy;
    switch (index) {
        case 1: ndx = -y; ndy = x; break;
        case 2: ndx = 0.0; ndy = x * x + y * y; break;
        case 3: ndx = -(x * x + y * y); ndy = 0.0; break;
        case 4: ndx = 2.0 * x * y; ndy = x * x - y * y; break;
        case 5: ndx = -(x * x - y * y); ndy = 2.0 * x * y; break;
        default: throw RangeError("pullback_oracle: index must be 1..5");
    }
    const cplx denom = (2.0 * y - 1.0) * (2.0 * y - 1.0);
    const cplx dxdz = (z * z - R2) / (2.0 * z * z);
    const cplx dydz = (z * z + R2) / (2.0 * kI * z * z);
    const cplx dxdh = (2.0 * h - 1.0) / (2.0 * z);
    const cplx dydh = (z + kI * (2.0 * h - 1.0) / 2.0) / z;
    const cplx F = (ndx * dxdz + ndy * dydz) / denom;
    const cplx Phi = (ndx * dxdh + ndy * dydh) / denom;
    return {F, Phi};
}

rat::PartialFractionForm omega_combined_F(const Parameters& lambda, cplx h) {
    rat::PartialFractionForm acc;
    for (int i = 1; i <= 5; ++i) {
        const double li = lambda[i];
        if (li == 0.0) continue;
        acc = acc + omega_form(i, h).F * li;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Canonical loops
// ---------------------------------------------------------------------------

namespace {

path::PathLoop circle_loop(cplx center, double radius, cplx toward) {
    double ang = 0.0;
    if (std::abs(toward - center) > 1e-14) ang = std::arg(toward - center);
    path::PathLoop loop;
    loop.segments.push_back(path::Segment::full_circle(center, radius, ang));
    loop.basepoint = loop.segments.front().start();
    return loop;
}

void verify_windings(const path::PathLoop& loop, const Punctures& p,
                     std::array<int, 3> expect) {
    const std::array<cplx, 3> pts = {p.c, p.a, p.b};
    for (int i = 0; i < 3; ++i)
        if (path::winding_number(loop, pts[size_t(i)]) != expect[size_t(i)])
            throw InvariantError("canonical_loop: winding number check failed");
}

path::PathLoop build_loop(LoopKind kind, cplx h, bool h_is_real) {
    const Punctures p = punctures(h);
    const double dmin =
        std::min({std::abs(p.a), std::abs(p.b), std::abs(p.b - p.a)});
    const double r = 0.25 * dmin;
    const cplx z0 = std::sqrt(p.R2);  // basepoint direction (real oval point for real h)

    switch (kind) {
        case LoopKind::alpha: {
            auto loop = circle_loop(p.a, r, z0);
            verify_windings(loop, p, {0, 1, 0});
            return loop;
        }
        case LoopKind::beta: {
            auto loop = circle_loop(p.b, r, z0);
            verify_windings(loop, p, {0, 0, 1});
            return loop;
        }
        case LoopKind::gamma: {
            auto loop = circle_loop(p.c, r, z0);
            verify_windings(loop, p, {1, 0, 0});
            return loop;
        }
        case LoopKind::delta: {
            if (!h_is_real || h.real() >= 0.0)
                throw RangeError("canonical_loop: delta requires real h < 0");
            auto loop = circle_loop(0.0, std::sqrt(p.R2.real()), p.R2.real());
            verify_windings(loop, p, {1, 1, 0});
            return loop;
        }
        case LoopKind::delta_tilde: {
            if (!h_is_real || h.real() <= 1.0)
                throw RangeError("canonical_loop: delta_tilde requires real h > 1");
            auto loop = circle_loop(0.0, std::sqrt(p.R2.real()), p.R2.real());
            verify_windings(loop, p, {1, 0, 1});
            return loop;
        }
    }
    throw RangeError("canonical_loop: unknown kind");
}

}  // namespace

path::PathLoop canonical_loop(LoopKind kind, double h) { return build_loop(kind, h, true); }

path::PathLoop canonical_loop(LoopKind kind, cplx h) {
    return build_loop(kind, h, h.imag() == 0.0);
}

}  // namespace dclab::geom
