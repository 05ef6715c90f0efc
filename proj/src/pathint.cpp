#include "dclab/pathint.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dclab::path {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// 16-point Gauss-Legendre rule on [-1,1].
constexpr std::array<double, 8> kGlNode = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

Segment Segment::line(cplx a, cplx b) {
    Segment s;
    s.kind = Kind::line;
    s.z0 = a;
    s.z1 = b;
    return s;
}

Segment Segment::arc(cplx center, double radius, double t0, double t1) {
    Segment s;
    s.kind = Kind::arc;
    s.center = center;
    s.radius = radius;
    s.t0 = t0;
    s.t1 = t1;
    return s;
}

Segment Segment::full_circle(cplx center, double radius, double start_angle) {
    return arc(center, radius, start_angle, start_angle + kTwoPi);
}

cplx Segment::at(double s) const {
    if (kind == Kind::line) return z0 + s * (z1 - z0);
    const double t = t0 + s * (t1 - t0);
    return center + radius * std::polar(1.0, t);
}

cplx Segment::deriv(double s) const {
    if (kind == Kind::line) return z1 - z0;
    const double t = t0 + s * (t1 - t0);
    return cplx(0.0, 1.0) * (t1 - t0) * radius * std::polar(1.0, t);
}

bool Segment::is_full_circle() const {
    return kind == Kind::arc && std::abs(std::abs(t1 - t0) - kTwoPi) < 1e-14;
}

Segment Segment::reversed() const {
    Segment s = *this;
    if (kind == Kind::line) {
        std::swap(s.z0, s.z1);
    } else {
        std::swap(s.t0, s.t1);
    }
    return s;
}

double Segment::min_distance(cplx p) const {
    if (kind == Kind::line) {
        const cplx d = z1 - z0;
        const double len2 = std::norm(d);
        if (len2 == 0.0) return std::abs(p - z0);
        double t = ((p.real() - z0.real()) * d.real() + (p.imag() - z0.imag()) * d.imag()) / len2;
        t = std::clamp(t, 0.0, 1.0);
        return std::abs(p - (z0 + t * d));
    }
    const cplx w = p - center;
    const double rho = std::abs(w);
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    if (hi - lo >= kTwoPi - 1e-14) return std::abs(rho - radius);
    // Is arg(w) inside the swept sector (mod 2 pi)?
    double rel = std::fmod(std::arg(w) - lo, kTwoPi);
    if (rel < 0) rel += kTwoPi;
    if (rel <= hi - lo) return std::abs(rho - radius);
    return std::min(std::abs(p - at(0.0)), std::abs(p - at(1.0)));
}

namespace {

double arg_increment_rec(const Segment& seg, cplx p, double s0, double s1, int depth) {
    const cplx u = seg.at(s0) - p;
    const cplx v = seg.at(s1) - p;
    const double d = std::arg(v / u);
    if (std::abs(d) <= kPi / 2.0 && (seg.kind == Segment::Kind::line || depth > 0)) return d;
    if (depth > 60) throw ConvergenceError("arg_increment: point too close to path");
    const double sm = 0.5 * (s0 + s1);
    return arg_increment_rec(seg, p, s0, sm, depth + 1) + arg_increment_rec(seg, p, sm, s1, depth + 1);
}

}  // namespace

double Segment::arg_increment(cplx p) const {
    if (kind == Kind::line) {
        // A straight segment not through p subtends less than pi.
        return std::arg((z1 - p) / (z0 - p));
    }
    return arg_increment_rec(*this, p, 0.0, 1.0, 0);
}

void PathLoop::validate() const {
    if (segments.empty()) throw InvariantError("PathLoop: empty");
    for (size_t i = 0; i < segments.size(); ++i) {
        const cplx a = segments[i].end();
        const cplx b = segments[(i + 1) % segments.size()].start();
        if (std::abs(a - b) > 1e-12)
            throw InvariantError("PathLoop: segment endpoints do not match");
    }
    if (std::abs(segments.front().start() - basepoint) > 1e-12)
        throw InvariantError("PathLoop: basepoint is not the start of the first segment");
}

PathLoop PathLoop::reversed() const {
    PathLoop r;
    r.basepoint = basepoint;
    r.segments.reserve(segments.size());
    for (auto it = segments.rbegin(); it != segments.rend(); ++it)
        r.segments.push_back(it->reversed());
    return r;
}

double PathLoop::min_distance(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : segments) d = std::min(d, s.min_distance(p));
    return d;
}

int winding_number(const PathLoop& loop, cplx p) {
    double total = 0.0;
    for (const auto& s : loop.segments) total += s.arg_increment(p);
    const double w = total / kTwoPi;
    const double r = std::round(w);
    if (std::abs(w - r) > 1e-6) throw ConvergenceError("winding_number: non-integer result");
    return static_cast<int>(r);
}

namespace {

cplx trapezoid_circle(const Evaluator& f, const Segment& seg, size_t n) {
    // Periodic trapezoid rule in the angle; spectrally accurate for
    // integrands analytic in an annulus around the circle.
    cplx acc = 0.0;
    const double dt = (seg.t1 - seg.t0) / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) {
        const double t = seg.t0 + dt * static_cast<double>(k);
        const cplx z = seg.center + seg.radius * std::polar(1.0, t);
        const cplx dz = cplx(0.0, 1.0) * seg.radius * std::polar(1.0, t);
        acc += f(z) * dz;
    }
    return acc * dt;
}

cplx gauss_panels(const Evaluator& f, const Segment& seg, size_t panels) {
    cplx acc = 0.0;
    const double w = 1.0 / static_cast<double>(panels);
    for (size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * w;
        for (size_t j = 0; j < kGlNode.size(); ++j) {
            const double d = 0.5 * w * kGlNode[j];
            const double wj = 0.5 * w * kGlWeight[j];
            for (const double s : {mid - d, mid + d})
                acc += wj * f(seg.at(s)) * seg.deriv(s);
        }
    }
    return acc;
}

QuadResult segment_integral(const Evaluator& f, const Segment& seg, double tol) {
    const bool circle = seg.is_full_circle();
    size_t n = circle ? 16 : 1;
    cplx prev = circle ? trapezoid_circle(f, seg, n) : gauss_panels(f, seg, n);
    int stale = 0;
    double best_err = std::numeric_limits<double>::infinity();
    cplx best = prev;
    while ((circle ? n : n * 32) < (1u << 20)) {
        n *= 2;
        const cplx cur = circle ? trapezoid_circle(f, seg, n) : gauss_panels(f, seg, n);
        const double err = std::abs(cur - prev);
        if (err <= tol) return {cur, err};
        // Roundoff plateau: successive refinements stop improving.
        stale = (err >= 0.5 * best_err) ? stale + 1 : 0;
        if (err < best_err) {
            best_err = err;
            best = cur;
        }
        if (stale >= 2 && best_err <= 1e-13 * std::max(1.0, std::abs(cur))) return {best, best_err};
        prev = cur;
    }
    throw ConvergenceError("contour_integral: tolerance not reached");
}

}  // namespace

QuadResult contour_integral(const Evaluator& f, const PathLoop& loop, double tol) {
    loop.validate();
    QuadResult total;
    const double tol_seg = tol / static_cast<double>(loop.segments.size());
    for (const auto& seg : loop.segments) {
        const QuadResult r = segment_integral(f, seg, tol_seg);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Chebyshev machinery for the iterated integrals: per segment we build the
// Chebyshev interpolant of the integrand, take its antiderivative to obtain
// the running inner integral at every node, and integrate the product.
// ---------------------------------------------------------------------------

namespace {

struct ChebWorkspace {
    size_t n = 0;                 // polynomial order (n+1 nodes)
    std::vector<double> node;     // cos(pi k / n), k=0..n
    std::vector<cplx> va, vb;     // integrand samples
    std::vector<cplx> ca, anti;   // coefficients
    std::vector<cplx> prod;       // (A_cum + A(x)) * g_b(x)
    std::vector<cplx> cp;

    void resize(size_t order) {
        n = order;
        node.resize(n + 1);
        for (size_t k = 0; k <= n; ++k) node[k] = std::cos(kPi * static_cast<double>(k) / static_cast<double>(n));
        va.assign(n + 1, 0.0);
        vb.assign(n + 1, 0.0);
    }
};

// DCT of samples at Chebyshev-Lobatto nodes; returns c with
// f(x) = sum c_j T_j(x).
std::vector<cplx> cheb_coeffs(const std::vector<cplx>& v) {
    const size_t n = v.size() - 1;
    std::vector<cplx> c(n + 1, 0.0);
    for (size_t j = 0; j <= n; ++j) {
        cplx acc = 0.5 * (v[0] + (j % 2 == 0 ? v[n] : -v[n]));
        for (size_t k = 1; k < n; ++k)
            acc += v[k] * std::cos(kPi * static_cast<double>(j * k) / static_cast<double>(n));
        c[j] = acc * (2.0 / static_cast<double>(n));
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return c;
}

// Antiderivative coefficients, constant chosen so that F(-1) = 0.
std::vector<cplx> cheb_antiderivative(const std::vector<cplx>& c) {
    const size_t n = c.size() - 1;
    std::vector<cplx> b(n + 2, 0.0);
    auto cc = [&](size_t j) -> cplx { return j <= n ? c[j] : cplx(0.0); };
    b[1] = cc(0) - 0.5 * cc(2);
    for (size_t j = 2; j <= n + 1; ++j)
        b[j] = (cc(j - 1) - cc(j + 1)) / (2.0 * static_cast<double>(j));
    cplx at_minus1 = 0.0;
    for (size_t j = 1; j <= n + 1; ++j) at_minus1 += (j % 2 == 0 ? b[j] : -b[j]);
    b[0] = -at_minus1;
    return b;
}

cplx cheb_eval(const std::vector<cplx>& c, double x) {
    cplx b1 = 0.0, b2 = 0.0;
    for (size_t j = c.size(); j-- > 1;) {
        const cplx t = 2.0 * x * b1 - b2 + c[j];
        b2 = b1;
        b1 = t;
    }
    return x * b1 - b2 + c[0];
}

cplx cheb_definite_integral(const std::vector<cplx>& c) {
    cplx acc = 2.0 * c[0];
    for (size_t j = 2; j < c.size(); j += 2)
        acc += c[j] * (2.0 / (1.0 - static_cast<double>(j * j)));
    return acc;
}

// One full pass over the loop at fixed Chebyshev order.
cplx iterated_attempt(const Evaluator& fa, const Evaluator& fb, const PathLoop& loop, size_t order) {
    ChebWorkspace ws;
    ws.resize(order);
    cplx inner_cum = 0.0;
    cplx total = 0.0;
    for (const auto& seg : loop.segments) {
        for (size_t k = 0; k <= ws.n; ++k) {
            // Nodes ordered tail-to-head in x; s runs forward along the path.
            const double s = 0.5 * (ws.node[k] + 1.0);
            const cplx z = seg.at(s);
            const cplx dz = 0.5 * seg.deriv(s);  // ds/dx = 1/2
            ws.va[k] = fa(z) * dz;
            ws.vb[k] = fb(z) * dz;
        }
        ws.ca = cheb_coeffs(ws.va);
        ws.anti = cheb_antiderivative(ws.ca);
        ws.prod.assign(ws.n + 1, 0.0);
        for (size_t k = 0; k <= ws.n; ++k)
            ws.prod[k] = (inner_cum + cheb_eval(ws.anti, ws.node[k])) * ws.vb[k];
        ws.cp = cheb_coeffs(ws.prod);
        total += cheb_definite_integral(ws.cp);
        inner_cum += cheb_eval(ws.anti, 1.0);
    }
    return total;
}

}  // namespace

QuadResult iterated_integral2(const Evaluator& form_a, const Evaluator& form_b,
                              const PathLoop& loop, double tol) {
    loop.validate();
    size_t order = 32;
    cplx prev = iterated_attempt(form_a, form_b, loop, order);
    double best_err = std::numeric_limits<double>::infinity();
    cplx best = prev;
    int stale = 0;
    while (order <= 8192) {
        order *= 2;
        const cplx cur = iterated_attempt(form_a, form_b, loop, order);
        const double err = std::abs(cur - prev);
        if (err <= tol) return {cur, err};
        stale = (err >= 0.5 * best_err) ? stale + 1 : 0;
        if (err < best_err) {
            best_err = err;
            best = cur;
        }
        if (stale >= 2 && best_err <= 1e-12 * std::max(1.0, std::abs(cur))) return {best, best_err};
        prev = cur;
    }
    throw ConvergenceError("iterated_integral2: tolerance not reached");
}

PathLoop compose_loops(std::span<const std::pair<const PathLoop*, int>> word,
                       cplx basepoint, std::span<const cplx> punctures) {
    if (word.empty()) throw InvariantError("compose_loops: empty word");
    PathLoop out;
    out.basepoint = basepoint;
    for (const auto& [loop, exp] : word) {
        if (exp != 1 && exp != -1) throw InvariantError("compose_loops: exponent must be +-1");
        PathLoop piece = (exp == 1) ? *loop : loop->reversed();
        const bool needs_connector = std::abs(piece.basepoint - basepoint) > 1e-12;
        if (needs_connector) {
            const Segment out_conn = Segment::line(basepoint, piece.basepoint);
            for (const cplx p : punctures)
                if (out_conn.min_distance(p) < 1e-3)
                    throw InvariantError("compose_loops: connector passes a puncture");
            out.segments.push_back(out_conn);
            for (const auto& s : piece.segments) out.segments.push_back(s);
            out.segments.push_back(out_conn.reversed());
        } else {
            for (const auto& s : piece.segments) out.segments.push_back(s);
        }
    }
    out.validate();
    return out;
}

PathLoop compose_loops(std::span<const std::pair<const PathLoop*, int>> word,
                       std::span<const cplx> punctures) {
    if (word.empty()) throw InvariantError("compose_loops: empty word");
    return compose_loops(word, word.front().first->basepoint, punctures);
}

}  // namespace dclab::path
