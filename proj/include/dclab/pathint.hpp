#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dclab/core.hpp"

namespace dclab::path {

// Oriented smooth piece of a path, parameterized by s in [0,1].
struct Segment {
    enum class Kind { line, arc };
    Kind kind = Kind::line;

    // line: z(s) = z0 + s (z1 - z0)
    cplx z0{}, z1{};

    // arc: z(s) = center + radius e^{i (t0 + s (t1 - t0))}; t1 < t0 is a
    // clockwise arc, |t1 - t0| = 2 pi a full circle.
    cplx center{};
    double radius = 0.0;
    double t0 = 0.0, t1 = 0.0;

    static Segment line(cplx a, cplx b);
    static Segment arc(cplx center, double radius, double t0, double t1);
    static Segment full_circle(cplx center, double radius, double start_angle = 0.0);

    cplx at(double s) const;
    cplx deriv(double s) const;  // dz/ds
    cplx start() const { return at(0.0); }
    cplx end() const { return at(1.0); }
    bool is_full_circle() const;
    Segment reversed() const;

    double min_distance(cplx p) const;
    // Total increment of arg(z(s) - p) along the segment; p must be off the
    // segment.
    double arg_increment(cplx p) const;
};

// Closed piecewise-smooth oriented path. Consecutive endpoints must coincide
// (gap < 1e-12) and the last endpoint must return to the basepoint.
struct PathLoop {
    std::vector<Segment> segments;
    cplx basepoint{};

    void validate() const;
    PathLoop reversed() const;
    double min_distance(cplx p) const;
};

/// Winding number of the loop about p (exact up to rounding; integer result
/// checked to 1e-6).
int winding_number(const PathLoop& loop, cplx p);

using Evaluator = std::function<cplx(cplx)>;

struct QuadResult {
    cplx value{};
    double error = 0.0;
};

/// Contour integral of f(z) dz over the loop. Node-doubling error control:
/// periodic trapezoid rule on full circles, composite Gauss-Legendre panels
/// on arcs and line segments. Throws ConvergenceError past 2^20 nodes.
QuadResult contour_integral(const Evaluator& f, const PathLoop& loop, double tol = 1e-9);

/// Length-two iterated integral of a then b over the loop from its basepoint:
/// integral over 0 <= s1 <= s2 <= 1 of a(z(s1)) dz(s1) * b(z(s2)) dz(s2).
/// The first form is the inner (earlier) one.
QuadResult iterated_integral2(const Evaluator& form_a, const Evaluator& form_b,
                              const PathLoop& loop, double tol = 1e-8);

/// Concatenation of loops (exponent -1 traverses a loop backwards), read left
/// to right as traversal order. Loops not already based at `basepoint` are
/// attached with straight connectors basepoint -> loop.basepoint; connectors
/// must clear every listed puncture by 1e-3.
PathLoop compose_loops(std::span<const std::pair<const PathLoop*, int>> word,
                       cplx basepoint, std::span<const cplx> punctures = {});

/// Convenience overload: basepoint taken from the first loop in the word.
PathLoop compose_loops(std::span<const std::pair<const PathLoop*, int>> word,
                       std::span<const cplx> punctures = {});

}  // namespace dclab::path
