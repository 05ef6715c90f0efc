#pragma once

#include <string>
#include <vector>

#include "dclab/components.hpp"
#include "dclab/core.hpp"
#include "dclab/curvegeom.hpp"

namespace dclab::flow {

struct EscapeError : Error {
    using Error::Error;
};
struct OpenOrbitError : Error {
    using Error::Error;
};
struct StepUnderflowError : Error {
    using Error::Error;
};

struct FlowState {
    double x = 0, y = 0, t = 0;
};

/// Right-hand side of the perturbed system.
void vector_field(const geom::Parameters& lambda, double x, double y, double* dx, double* dy);

struct Trajectory {
    std::vector<FlowState> states;  // accepted integration steps
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4), dense output inside).
/// rel_tol in [1e-13, 1e-6]. Escape radius 1e3.
Trajectory integrate_orbit(const geom::Parameters& lambda, FlowState start, double t_span,
                           double rel_tol);

/// y on the section {x = 0} at level h: y = h - sqrt(h^2 - h), valid for
/// h < 0 (first center) and 1 < h (second center, with margin above y = 1/2).
double section_y(Center center, double h);

/// H(return point) - h for the first return to the section in the starting
/// direction; event time located to 1e-11.
double poincare_displacement(const geom::Parameters& lambda, Center center, double h,
                             double rel_tol);

struct CensusDiagnostics {
    double noise_floor = 0.0;              // displacement magnitudes below this are noise
    int sub_noise_crossings = 0;           // sign changes discarded as noise
    std::vector<double> tangency_h;        // sign changes that moved/vanished under doubling
    std::vector<double> non_hyperbolic_h;  // zeros with |slope| <= 1e-12
    std::vector<std::string> notes;        // open orbits, escapes, ...
};

struct Census {
    int i = 0, j = 0;
    std::vector<double> first_levels, second_levels;
    CensusDiagnostics diag;
};

struct HRange {
    double lo = 0, hi = 0;
};

inline constexpr HRange kFirstAnnulusRange{-0.8, -0.01};
inline constexpr HRange kSecondAnnulusRange{1.01, 5.0};

/// Scan the displacement over a 256-point grid per annulus, bracket sign
/// changes, bisect each to 1e-10 in h; one grid-doubling verification pass.
Census limit_cycle_census(const geom::Parameters& lambda,
                          HRange first = kFirstAnnulusRange,
                          HRange second = kSecondAnnulusRange, double rel_tol = 1e-9);

}  // namespace dclab::flow
