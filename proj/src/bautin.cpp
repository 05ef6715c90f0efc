#include "dclab/bautin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dclab::bautin {

namespace {

constexpr cplx kI{0.0, 1.0};

std::int64_t checked(__int128 v, const char* who) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error(std::string(who) + ": rational overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rat::Rat(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error("Rat: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

Rat operator+(const Rat& a, const Rat& b) {
    const __int128 n = __int128(a.num) * b.den + __int128(b.num) * a.den;
    const __int128 d = __int128(a.den) * b.den;
    const std::int64_t nn = checked(n, "Rat+"), dd = checked(d, "Rat+");
    return Rat(nn, dd);
}

Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }

Rat operator*(const Rat& a, const Rat& b) {
    const std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    const std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    const __int128 n = __int128(a.num / (g1 ? g1 : 1)) * (b.num / (g2 ? g2 : 1));
    const __int128 d = __int128(a.den / (g2 ? g2 : 1)) * (b.den / (g1 ? g1 : 1));
    return Rat(checked(n, "Rat*"), checked(d, "Rat*"));
}

bool RatPoly::is_zero() const {
    for (const auto& a : c)
        if (!a.is_zero()) return false;
    return true;
}

int RatPoly::ord() const {
    for (size_t k = 0; k < c.size(); ++k)
        if (!c[k].is_zero()) return int(k);
    return -1;
}

double RatPoly::eval(double eps) const {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * eps + c[i].to_double();
    return acc;
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    RatPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] = r.c[i] + a.c[i];
        if (i < b.c.size()) r.c[i] = r.c[i] + b.c[i];
    }
    return r;
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
    RatPoly nb = b;
    for (auto& x : nb.c) x = -x;
    return a + nb;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    RatPoly r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.resize(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    return r;
}

void ArcGerm::check_invariants() const {
    bool any = false;
    for (const auto& p : l) {
        if (!p.c.empty() && !p.c[0].is_zero())
            throw InvariantError("ArcGerm: lambda(0) must vanish");
        if (!p.is_zero()) any = true;
    }
    if (!any) throw InvariantError("ArcGerm: zero arc");
}

geom::Parameters ArcGerm::eval(double eps) const {
    return {l[0].eval(eps), l[1].eval(eps), l[2].eval(eps), l[3].eval(eps), l[4].eval(eps)};
}

// ---------------------------------------------------------------------------
// Arc format parser
// ---------------------------------------------------------------------------

namespace {

struct ArcParser {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    std::int64_t integer() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw RangeError("arc parse: integer expected at '" + s.substr(start) + "'");
        return std::stoll(s.substr(start, i - start));
    }

    Rat rational() {
        const std::int64_t n = integer();
        if (eat('/')) return Rat(n, integer());
        return Rat(n);
    }

    // term := [rational '*']? 'e' ['^' int] | rational
    RatPoly term() {
        Rat coef(1);
        bool have_coef = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coef = rational();
            have_coef = true;
            if (!eat('*')) {
                if (peek() == 'e') throw RangeError("arc parse: '*' expected before e");
                RatPoly p;
                p.c = {coef};
                return p;
            }
        }
        if (peek() != 'e') {
            if (have_coef) throw RangeError("arc parse: 'e' expected");
            throw RangeError("arc parse: term expected");
        }
        ++i;  // consume 'e'
        int pow = 1;
        if (eat('^')) pow = int(integer());
        RatPoly p;
        p.c.assign(size_t(pow) + 1, Rat(0));
        p.c[size_t(pow)] = coef;
        return p;
    }

    RatPoly poly() {
        RatPoly acc;
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        for (;;) {
            RatPoly t = term();
            if (neg)
                acc = acc - t;
            else
                acc = acc + t;
            skip_ws();
            if (eat('-'))
                neg = true;
            else if (eat('+'))
                neg = false;
            else
                break;
        }
        return acc;
    }
};

}  // namespace

ArcGerm parse_arc(const std::string& text) {
    ArcGerm arc;
    std::array<bool, 5> seen{};
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find(';', pos);
        if (next == std::string::npos) next = text.size();
        std::string item = text.substr(pos, next - pos);
        pos = next + 1;
        // trim
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.pop_back();
        if (item.empty()) continue;
        if (item.size() < 3 || item[0] != 'l' || item[1] < '1' || item[1] > '5')
            throw RangeError("arc parse: expected l<k>=<poly>, got '" + item + "'");
        const int k = item[1] - '1';
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw RangeError("arc parse: '=' missing in '" + item + "'");
        std::string rhs = item.substr(eq + 1);
        if (rhs == "0" || rhs.empty()) {
            seen[size_t(k)] = true;
            continue;
        }
        ArcParser p{rhs};
        arc.l[size_t(k)] = p.poly();
        p.skip_ws();
        if (p.i != rhs.size()) throw RangeError("arc parse: trailing input in '" + rhs + "'");
        seen[size_t(k)] = true;
    }
    arc.check_invariants();
    return arc;
}

// ---------------------------------------------------------------------------
// Tables and focal values
// ---------------------------------------------------------------------------

NormalFormCoefficients normal_form_substitution(const geom::Parameters& p) {
    NormalFormCoefficients c;
    c.a[1][0] = p.l1;
    c.b[0][1] = -p.l1;
    c.a[2][0] = p.l2 + p.l4;
    c.b[2][0] = -p.l3 - p.l5;
    c.a[0][2] = p.l2 - p.l4;
    c.b[0][2] = -p.l3 + p.l5;
    c.a[1][1] = 2.0 * p.l5;
    c.b[1][1] = 2.0 * p.l4;
    return c;
}

std::array<double, 3> focal_values(const geom::Parameters& p) {
    const cplx A = geom::Parameters::A;
    const cplx B = p.B(), C = p.C();
    const cplx Bb = std::conj(B);
    const double v3 = 2.0 * kPi * std::imag(A * B);
    const double v5 = (2.0 / 3.0) * std::imag((2.0 * A + Bb) * (A - 2.0 * Bb) * Bb * C);
    const double v7 =
        (5.0 / 4.0) * (std::norm(B) - std::norm(C)) * std::imag((2.0 * A + Bb) * Bb * Bb * C);
    return {v3, v5, v7};
}

std::array<double, 3> ideal_generators(Center center, const geom::Parameters& p) {
    if (center == Center::first) return {p.l1, p.l3, p.l2 * p.l5};
    return {p.l1 + p.l3 + p.l1 * p.l2, p.l5, p.l3 * p.l4};
}

CenterMembership center_membership(const geom::Parameters& p) {
    constexpr double tol = 1e-12;
    CenterMembership m;
    m.rv1 = std::abs(p.l1) <= tol && std::abs(p.l3) <= tol && std::abs(p.l5) <= tol;
    m.lv1 = std::abs(p.l1) <= tol && std::abs(p.l2) <= tol && std::abs(p.l3) <= tol;
    m.rv2 = m.rv1;
    m.lv2 = std::abs(p.l1 + p.l3 + p.l1 * p.l2) <= tol && std::abs(p.l4) <= tol &&
            std::abs(p.l5) <= tol;
    return m;
}

double lv_first_integral(const geom::Parameters& p, double x, double y, ThetaTracker& state) {
    if (std::abs(p.l4) > 1e-12 || std::abs(p.l5) > 1e-12 ||
        std::abs(p.l1 + p.l3 + p.l1 * p.l2) > 1e-12)
        throw RangeError("lv_first_integral: parameters off the Lotka-Volterra branch");
    const cplx z(x, y);
    const cplx alpha = (kI - p.l1) / (1.0 + p.l1 * p.l1);
    const double base = 2.0 * std::real(alpha * z) + 1.0;
    if (std::abs(base) < 1e-6)
        throw SingularInputError("lv_first_integral: too close to the invariant line");
    if (!state.initialized) {
        state.theta = std::arg(z);
        state.initialized = true;
    } else {
        state.theta += std::arg(z / state.prev);
    }
    state.prev = z;
    const double expo = 1.0 - p.l2 + p.l1 * p.l3;
    return std::norm(z) * std::exp(-2.0 * p.l1 * state.theta) / std::pow(std::abs(base), expo);
}

// ---------------------------------------------------------------------------
// Involution on parameters: (x,y) -> (x,1-y) maps X_lambda to a quadratic
// field whose focus sits near 0; an affine normalization returns it to the
// normal form. All steps are exact complex algebra on degree-2 fields.
// ---------------------------------------------------------------------------

namespace {

// F(w, wb) = c0 + cw w + cwb wb + cww w^2 + cwwb w wb + cwbwb wb^2
struct QuadField {
    cplx c0{}, cw{}, cwb{}, cww{}, cwwb{}, cwbwb{};

    cplx eval(cplx w) const {
        const cplx wb = std::conj(w);
        return c0 + cw * w + cwb * wb + cww * w * w + cwwb * w * wb + cwbwb * wb * wb;
    }
    cplx d_dw(cplx w) const { return cw + 2.0 * cww * w + cwwb * std::conj(w); }
    cplx d_dwb(cplx w) const { return cwb + cwwb * w + 2.0 * cwbwb * std::conj(w); }

    QuadField conjugated() const {
        return {std::conj(c0),  std::conj(cwb),  std::conj(cw),
                std::conj(cwbwb), std::conj(cwwb), std::conj(cww)};
    }

    // w = p + u
    QuadField shifted(cplx p) const {
        const cplx pb = std::conj(p);
        QuadField r;
        r.c0 = eval(p);
        r.cw = cw + 2.0 * cww * p + cwwb * pb;
        r.cwb = cwb + cwwb * p + 2.0 * cwbwb * pb;
        r.cww = cww;
        r.cwwb = cwwb;
        r.cwbwb = cwbwb;
        return r;
    }

    // w = v + s conj(v)
    QuadField mixed(cplx s) const {
        const cplx sb = std::conj(s);
        QuadField r;
        r.c0 = c0;
        r.cw = cw + cwb * sb;
        r.cwb = cwb + cw * s;
        r.cww = cww + cwwb * sb + cwbwb * sb * sb;
        r.cwwb = 2.0 * cww * s + cwwb * (1.0 + s * sb) + 2.0 * cwbwb * sb;
        r.cwbwb = cww * s * s + cwwb * s + cwbwb;
        return r;
    }

    QuadField scaled(cplx f) const { return {f * c0, f * cw, f * cwb, f * cww, f * cwwb, f * cwbwb}; }
    QuadField plus(const QuadField& o) const {
        return {c0 + o.c0, cw + o.cw, cwb + o.cwb, cww + o.cww, cwwb + o.cwwb, cwbwb + o.cwbwb};
    }
};

QuadField field_of(const geom::Parameters& p) {
    // dz/dt = (l1 + i) z - z^2 + B z zb + C zb^2
    QuadField f;
    f.cw = cplx(p.l1, 1.0);
    f.cww = -1.0;
    f.cwwb = p.B();
    f.cwbwb = p.C();
    return f;
}

geom::Parameters params_of(const QuadField& f) {
    return {std::real(f.cw), std::real(f.cwwb), std::imag(f.cwwb), std::real(f.cwbwb),
            std::imag(f.cwbwb)};
}

}  // namespace

geom::Parameters involution_parameters(const geom::Parameters& p) {
    const cplx Bb = std::conj(p.B()), Cb = std::conj(p.C());

    // Image of X_lambda under w = conj(z) + i.
    QuadField g;
    g.c0 = -kI * p.l1 + Bb - Cb;
    g.cw = cplx(p.l1, 1.0) + kI * Bb;
    g.cwb = -kI * Bb + 2.0 * kI * Cb;
    g.cww = -1.0;
    g.cwwb = Bb;
    g.cwbwb = Cb;

    // Equilibrium near 0 (real Newton in (w, wb)).
    cplx eq = 0.0;
    for (int it = 0; it < 60; ++it) {
        const cplx V = g.eval(eq);
        if (std::abs(V) < 1e-15) break;
        const cplx Vw = g.d_dw(eq), Vwb = g.d_dwb(eq);
        const double det = std::norm(Vw) - std::norm(Vwb);
        if (std::abs(det) < 1e-10) throw Error("involution_parameters: degenerate equilibrium");
        const cplx delta = (-V * std::conj(Vw) + Vwb * std::conj(V)) / det;
        eq += delta;
    }
    QuadField at_eq = g.shifted(eq);

    // Kill the conj-linear term: s solves conj(ct) s^2 + (conj(c1)-c1) s - ct = 0,
    // small root.
    const cplx c1 = at_eq.cw, ct = at_eq.cwb;
    cplx s;
    if (std::abs(ct) < 1e-300) {
        s = 0.0;
    } else {
        const cplx A2 = std::conj(ct), A1 = std::conj(c1) - c1, A0 = -ct;
        const cplx disc = std::sqrt(A1 * A1 - 4.0 * A2 * A0);
        const cplx r1 = (-A1 + disc) / (2.0 * A2), r2 = (-A1 - disc) / (2.0 * A2);
        s = std::abs(r1) < std::abs(r2) ? r1 : r2;
    }
    // v satisfies  v' = (G - s conj(G)) / (1 - |s|^2)  with  u = v + s conj(v).
    QuadField mixed = at_eq.mixed(s);
    QuadField mixed_conj = at_eq.conjugated().mixed(s);
    QuadField h = mixed.plus(mixed_conj.scaled(-s)).scaled(1.0 / (1.0 - std::norm(s)));

    // Real time rescale to make the rotation part exactly i.
    const double nu = std::imag(h.cw);
    if (!(nu > 0.0)) throw Error("involution_parameters: linear part lost its rotation");
    h = h.scaled(1.0 / nu);

    // Complex space rescale to pin the z^2 coefficient at -1.
    const cplx k = -1.0 / h.cww;
    const cplx kb = std::conj(k);
    QuadField out = h;
    out.cww = h.cww * k;
    out.cwwb = h.cwwb * kb;
    out.cwbwb = h.cwbwb * kb * kb / k;

    if (std::abs(out.c0) > 1e-12 || std::abs(out.cwb) > 1e-12 ||
        std::abs(out.cww - cplx(-1.0)) > 1e-12 || std::abs(std::imag(out.cw) - 1.0) > 1e-12)
        throw Error("involution_parameters: normalization failed");
    const geom::Parameters q = params_of(out);

    // Pointwise conjugacy check at 100 points: the composite affine map
    // z -> conj(z)+i -> -eq + . -> unmix -> /k, with time rescale nu.
    std::mt19937_64 rng(0x5eedu);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    const QuadField xq = field_of(q);
    const QuadField xp = field_of(p);
    for (int n = 0; n < 100; ++n) {
        const cplx z(U(rng), U(rng));
        const cplx zdot = xp.eval(z);
        const cplx w = std::conj(z) + kI;
        const cplx u = w - eq;
        const cplx v = (u - s * std::conj(u)) / (1.0 - std::norm(s));
        const cplx v2 = v / k;
        const cplx wdot = std::conj(zdot);
        const cplx vdot = (wdot - s * std::conj(wdot)) / (1.0 - std::norm(s));
        const cplx v2dot = vdot / k / nu;
        if (std::abs(xq.eval(v2) - v2dot) > 1e-12 * std::max(1.0, std::abs(v2dot)))
            throw Error("involution_parameters: conjugacy verification failed");
    }
    return q;
}

// ---------------------------------------------------------------------------
// Arc classification
// ---------------------------------------------------------------------------

std::string to_string(ArcComponent c) {
    switch (c) {
        case ArcComponent::E1: return "E1";
        case ArcComponent::E2: return "E2";
        case ArcComponent::E3: return "E3";
        case ArcComponent::inside_center_variety_1: return "inside_center_variety_1";
        case ArcComponent::inside_center_variety_2: return "inside_center_variety_2";
        case ArcComponent::inside_both_center_varieties: return "inside_both_center_varieties";
    }
    return "?";
}

std::array<RatPoly, 3> generator_polys(Center center, const ArcGerm& arc) {
    const RatPoly& l1 = arc.l[0];
    const RatPoly& l2 = arc.l[1];
    const RatPoly& l3 = arc.l[2];
    const RatPoly& l4 = arc.l[3];
    const RatPoly& l5 = arc.l[4];
    if (center == Center::first) return {l1, l3, l2 * l5};
    return {l1 + l3 + l1 * l2, l5, l3 * l4};
}

namespace {

std::optional<IntTriple> projective_limit(const std::array<RatPoly, 3>& g) {
    int d = INT32_MAX;
    for (const auto& p : g) {
        const int o = p.ord();
        if (o >= 0) d = std::min(d, o);
    }
    if (d == INT32_MAX) return std::nullopt;  // all generators vanish identically
    std::array<Rat, 3> lead = {g[0].at(d), g[1].at(d), g[2].at(d)};
    // Clear denominators, divide by gcd, make the first nonzero entry positive.
    __int128 l = 1;
    for (const auto& r : lead) l = l / std::gcd((std::int64_t)l, r.den) * r.den;
    IntTriple t{};
    for (int i = 0; i < 3; ++i)
        t[size_t(i)] = checked(__int128(lead[size_t(i)].num) * ((std::int64_t)l / lead[size_t(i)].den), "projective_limit");
    std::int64_t gg = 0;
    for (auto v : t) gg = std::gcd(gg, v < 0 ? -v : v);
    if (gg > 1)
        for (auto& v : t) v /= gg;
    for (auto v : t) {
        if (v > 0) break;
        if (v < 0) {
            for (auto& w : t) w = -w;
            break;
        }
    }
    return t;
}

int ord_or_inf(const RatPoly& p) {
    const int o = p.ord();
    return o < 0 ? INT32_MAX : o;
}

bool satisfies(ArcComponent tag, const std::optional<IntTriple>& p1,
               const std::optional<IntTriple>& p2) {
    switch (tag) {
        case ArcComponent::E1:
            return p2 && (*p2)[0] == 0 && (*p2)[2] == 0;
        case ArcComponent::E2:
            return p1 && (*p1)[0] + (*p1)[1] == 0 && (*p1)[2] == 0;
        case ArcComponent::E3:
            return p1 && p2 && (*p1)[2] == 0 && (*p2)[2] == 0;
        default:
            return true;
    }
}

}  // namespace

ArcClass classify_arc(const ArcGerm& arc) {
    arc.check_invariants();
    const auto g1 = generator_polys(Center::first, arc);
    const auto g2 = generator_polys(Center::second, arc);
    ArcClass out;
    out.p1 = projective_limit(g1);
    out.p2 = projective_limit(g2);

    if (!out.p1 && !out.p2) {
        out.component = ArcComponent::inside_both_center_varieties;
        return out;
    }
    if (!out.p1) {
        out.component = ArcComponent::inside_center_variety_1;
        return out;
    }
    if (!out.p2) {
        out.component = ArcComponent::inside_center_variety_2;
        return out;
    }

    // Order case analysis on d1, d3, d5 (and the cancellation order of l1+l3).
    const int d1 = ord_or_inf(arc.l[0]);
    const int d3 = ord_or_inf(arc.l[2]);
    const int d5 = ord_or_inf(arc.l[4]);
    ArcComponent tag;
    if (d1 <= d3 && d1 <= d5) {
        const int dt1 = ord_or_inf(arc.l[0] + arc.l[2]);
        tag = (dt1 > d1) ? ArcComponent::E2 : ArcComponent::E3;
    } else if (d3 <= d5) {
        tag = ArcComponent::E3;
    } else {
        tag = ArcComponent::E1;
    }
    if (!satisfies(tag, out.p1, out.p2))
        throw Error("classify_arc: case analysis disagrees with the component equations");
    out.component = tag;
    return out;
}

BifurcationPair sample_component(EComponent component, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    auto unit3 = [&](bool last_zero) {
        std::array<double, 3> v{N(rng), N(rng), last_zero ? 0.0 : N(rng)};
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        while (n < 1e-6) {
            v = {N(rng), N(rng), last_zero ? 0.0 : N(rng)};
            n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
        for (auto& x : v) x /= n;
        return v;
    };
    BifurcationPair pair;
    pair.tag = component;
    switch (component) {
        case EComponent::E1:
            pair.c1 = unit3(false);
            pair.c2 = {0.0, 1.0, 0.0};
            break;
        case EComponent::E2:
            pair.c1 = {1.0, -1.0, 0.0};
            pair.c2 = unit3(false);
            break;
        case EComponent::E3:
            pair.c1 = unit3(true);
            pair.c2 = unit3(true);
            break;
    }
    return pair;
}

}  // namespace dclab::bautin
