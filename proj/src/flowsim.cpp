#include "dclab/flowsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dclab::flow {

namespace {

constexpr double kEscapeRadius = 1e3;
constexpr double kMaxReturnTime = 10.0 * 2.0 * kPi;

using Vec2 = std::array<double, 2>;

struct Rhs {
    const geom::Parameters& p;
    void operator()(const Vec2& y, Vec2& dy) const {
        vector_field(p, y[0], y[1], &dy[0], &dy[1]);
    }
};

// Dormand-Prince 5(4) with the standard quartic dense-output interpolant.
struct Dopri5 {
    Rhs f;
    double rtol, atol;

    Vec2 y{};
    double t = 0;
    double h = 1e-3;
    Vec2 k1{};  // FSAL

    // dense-output coefficients of the last accepted step
    Vec2 rc1{}, rc2{}, rc3{}, rc4{}, rc5{};
    double t_prev = 0, h_prev = 0;

    void init(const Vec2& y0, double t0) {
        y = y0;
        t = t0;
        f(y, k1);
        h = 1e-3;
    }

    // One accepted step; returns false on step underflow.
    bool step() {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        static constexpr double d1 = -12715105075.0 / 11282082432.0,
                                d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0,
                                d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0,
                                d7 = 69997945.0 / 29380423.0;

        Vec2 k2, k3, k4, k5, k6, k7, yt, ynew;
        for (int attempt = 0; attempt < 200; ++attempt) {
            if (h < 1e-14) return false;
            for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
            f(yt, k2);
            for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            f(yt, k3);
            for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            f(yt, k4);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            f(yt, k5);
            for (int i = 0; i < 2; ++i)
                yt[i] = y[i] +
                        h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            f(yt, k6);
            for (int i = 0; i < 2; ++i)
                ynew[i] = y[i] +
                          h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            f(ynew, k7);

            double err = 0;
            for (int i = 0; i < 2; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
                const double w = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += (e / w) * (e / w);
            }
            err = std::sqrt(0.5 * err);

            if (err <= 1.0) {
                // dense output
                for (int i = 0; i < 2; ++i) {
                    const double dy = ynew[i] - y[i];
                    const double bspl = h * k1[i] - dy;
                    rc1[i] = y[i];
                    rc2[i] = dy;
                    rc3[i] = bspl;
                    rc4[i] = dy - h * k7[i] - bspl;
                    rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                  d6 * k6[i] + d7 * k7[i]);
                }
                t_prev = t;
                h_prev = h;
                t += h;
                y = ynew;
                k1 = k7;
                const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h = std::min(h * fac, 0.5);
                return true;
            }
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
        return false;
    }

    // State at t_prev + theta * h_prev, theta in [0,1].
    Vec2 dense(double theta) const {
        Vec2 out;
        const double th1 = 1.0 - theta;
        for (int i = 0; i < 2; ++i)
            out[i] = rc1[i] +
                     theta * (rc2[i] + th1 * (rc3[i] + theta * (rc4[i] + th1 * rc5[i])));
        return out;
    }
};

void check_rel_tol(double rel_tol) {
    if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6))
        throw RangeError("integrator: rel_tol must lie in [1e-13, 1e-6]");
}

}  // namespace

void vector_field(const geom::Parameters& p, double x, double y, double* dx, double* dy) {
    const double x2 = x * x, y2 = y * y, xy = x * y;
    *dx = -y - x2 + y2 + p.l1 * x + p.l2 * (x2 + y2) + p.l4 * (x2 - y2) + 2.0 * p.l5 * xy;
    *dy = x - 2.0 * xy + p.l1 * y + p.l3 * (x2 + y2) + p.l5 * (x2 - y2) - 2.0 * p.l4 * xy;
}

Trajectory integrate_orbit(const geom::Parameters& lambda, FlowState start, double t_span,
                           double rel_tol) {
    check_rel_tol(rel_tol);
    Dopri5 ode{Rhs{lambda}, rel_tol, 0.01 * rel_tol};
    ode.init({start.x, start.y}, start.t);
    Trajectory tr;
    tr.states.push_back(start);
    const double t_end = start.t + t_span;
    while (ode.t < t_end) {
        ode.h = std::min(ode.h, t_end - ode.t);
        if (!ode.step()) throw StepUnderflowError("integrate_orbit: step size underflow");
        if (std::hypot(ode.y[0], ode.y[1]) > kEscapeRadius)
            throw EscapeError("integrate_orbit: orbit escaped");
        tr.states.push_back({ode.y[0], ode.y[1], ode.t});
    }
    return tr;
}

double section_y(Center center, double h) {
    if (center == Center::first) {
        if (!(h < 0.0)) throw RangeError("section_y: first center needs h < 0");
    } else {
        if (!(h > 1.0)) throw RangeError("section_y: second center needs h > 1");
    }
    const double y = h - std::sqrt(h * h - h);
    if (center == Center::second && y < 0.52)
        throw RangeError("section_y: section point too close to y = 1/2");
    return y;
}

double poincare_displacement(const geom::Parameters& lambda, Center center, double h,
                             double rel_tol) {
    check_rel_tol(rel_tol);
    if (lambda.norm_inf() > 0.1)
        throw RangeError("poincare_displacement: parameters outside the ball |lambda| <= 0.1");
    const double y0 = section_y(center, h);
    // Returns must land on the section segment itself; crossings of the line
    // x = 0 outside this y-window (orbits drifting out of the nest, or the
    // far side of the oval) are not section hits.
    const double y_min = (center == Center::first) ? -kEscapeRadius : 0.52;
    const double y_max = (center == Center::first) ? 0.0 : 1.0;

    double vx, vy;
    vector_field(lambda, 0.0, y0, &vx, &vy);
    if (std::abs(vx) < 1e-8)
        throw SingularInputError("poincare_displacement: section not transversal");
    const double dir = vx > 0 ? 1.0 : -1.0;

    Dopri5 ode{Rhs{lambda}, rel_tol, 0.01 * rel_tol};
    ode.init({0.0, y0}, 0.0);
    double x_prev = 0.0;
    bool first_step = true;
    while (ode.t < kMaxReturnTime) {
        if (!ode.step()) throw StepUnderflowError("poincare_displacement: step size underflow");
        if (std::hypot(ode.y[0], ode.y[1]) > kEscapeRadius)
            throw EscapeError("poincare_displacement: orbit escaped");
        const double x_new = ode.y[0];
        const bool crossed = !first_step && ((x_prev > 0) != (x_new > 0));
        if (crossed) {
            // locate x(theta) = 0 with the dense interpolant
            double lo = 0.0, hi = 1.0;
            double flo = x_prev;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = ode.dense(mid)[0];
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if ((hi - lo) * ode.h_prev < 1e-12) break;
            }
            const double theta = 0.5 * (lo + hi);
            const Vec2 pt = ode.dense(theta);
            double cx, cy;
            vector_field(lambda, pt[0], pt[1], &cx, &cy);
            if (cx * dir > 0.0 && pt[1] > y_min && pt[1] < y_max) {
                return geom::hamiltonian(pt[0], pt[1]) - h;
            }
        }
        x_prev = x_new;
        first_step = false;
    }
    throw OpenOrbitError("poincare_displacement: no return within 10 periods");
}

namespace {

struct GridScan {
    std::vector<double> hs, ds;     // displacement samples (NaN where failed)
    std::vector<std::string> notes;
};

GridScan scan_displacement(const geom::Parameters& lambda, Center center, HRange range, int n,
                           double rel_tol) {
    GridScan g;
    g.hs.resize(n);
    g.ds.resize(n);
    for (int k = 0; k < n; ++k) {
        const double h = range.lo + (range.hi - range.lo) * (k + 0.5) / n;
        g.hs[k] = h;
        try {
            g.ds[k] = poincare_displacement(lambda, center, h, rel_tol);
        } catch (const Error& e) {
            g.ds[k] = std::numeric_limits<double>::quiet_NaN();
            g.notes.push_back(std::string(e.what()) + " at h=" + std::to_string(h));
        }
    }
    return g;
}

// Sign changes above the noise floor, bisected in h to 1e-10.
std::vector<double> locate_cycles(const geom::Parameters& lambda, Center center,
                                  const GridScan& g, double rel_tol, double floor,
                                  CensusDiagnostics* diag) {
    std::vector<double> levels;
    for (size_t k = 1; k < g.ds.size(); ++k) {
        const double d0 = g.ds[k - 1], d1 = g.ds[k];
        if (std::isnan(d0) || std::isnan(d1)) continue;
        if ((d0 > 0) == (d1 > 0)) continue;
        if (std::max(std::abs(d0), std::abs(d1)) <= floor) {
            diag->sub_noise_crossings++;
            continue;
        }
        double lo = g.hs[k - 1], hi = g.hs[k], flo = d0;
        bool failed = false;
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            double fm;
            try {
                fm = poincare_displacement(lambda, center, mid, rel_tol);
            } catch (const Error& e) {
                diag->notes.push_back(std::string("bisection: ") + e.what());
                failed = true;
                break;
            }
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        if (failed) continue;
        const double z = 0.5 * (lo + hi);
        const double slope = (d1 - d0) / (g.hs[k] - g.hs[k - 1]);
        if (std::abs(slope) <= 1e-12) {
            diag->non_hyperbolic_h.push_back(z);
            continue;
        }
        if (levels.empty() || z - levels.back() > 1e-9) levels.push_back(z);
    }
    return levels;
}

std::vector<double> census_annulus(const geom::Parameters& lambda, Center center, HRange range,
                                   double rel_tol, CensusDiagnostics* diag) {
    const double floor = 100.0 * rel_tol * std::max(1.0, std::max(std::abs(range.lo), std::abs(range.hi)));
    diag->noise_floor = std::max(diag->noise_floor, floor);
    const GridScan coarse = scan_displacement(lambda, center, range, 256, rel_tol);
    const GridScan fine = scan_displacement(lambda, center, range, 512, rel_tol);
    for (const auto& n : coarse.notes) diag->notes.push_back(n);
    const auto lv_coarse = locate_cycles(lambda, center, coarse, rel_tol, floor, diag);
    CensusDiagnostics scratch;
    const auto lv_fine = locate_cycles(lambda, center, fine, rel_tol, floor, &scratch);
    // A sign change that is not reproduced under grid doubling is suspect.
    for (double z : lv_coarse) {
        bool matched = false;
        for (double w : lv_fine)
            if (std::abs(z - w) < 1e-6) matched = true;
        if (!matched) diag->tangency_h.push_back(z);
    }
    diag->sub_noise_crossings += scratch.sub_noise_crossings;
    for (double z : scratch.non_hyperbolic_h) diag->non_hyperbolic_h.push_back(z);
    return lv_fine;
}

}  // namespace

Census limit_cycle_census(const geom::Parameters& lambda, HRange first, HRange second,
                          double rel_tol) {
    Census c;
    c.first_levels = census_annulus(lambda, Center::first, first, rel_tol, &c.diag);
    c.second_levels = census_annulus(lambda, Center::second, second, rel_tol, &c.diag);
    c.i = static_cast<int>(c.first_levels.size());
    c.j = static_cast<int>(c.second_levels.size());
    return c;
}

}  // namespace dclab::flow
