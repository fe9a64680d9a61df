#pragma once

#include <functional>
#include <limits>
#include <string>

#include "json.hpp"

namespace sdelb {

// A smooth scalar function with analytic derivative and a known support.
// eval returns exactly 0 outside the support, not merely a small value.
struct SmoothFn {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    double support_lo = -std::numeric_limits<double>::infinity();
    double support_hi = std::numeric_limits<double>::infinity();
    double sup_bound = 0.0;
};

// Structural data of the SDE family: horizon, switch times and the three
// coefficient functions. f acts on [0, tau1], g on [tau1, tau2], h past tau2.
struct CoefficientSet {
    double T = 1.0;
    double tau1 = 0.25;
    double tau2 = 0.5;
    SmoothFn f;
    SmoothFn g;
    SmoothFn h;
};

struct DerivedConstants {
    double alpha = 0.0;  // squared infimum of |f'| on [0, tau1/2]
    double beta = 0.0;   // integral of g^2 over [tau1, tau2]
    double gamma = 0.0;  // integral of h over [tau2, T]
    double c1 = 0.0;
    double c2 = 0.0;
};

// Bump-function coefficient set on the prescribed supports. The amplitudes
// default to values that keep the derived constants in a range where the
// slow target-rate plans of the experiment configs are representable with a
// small prefix; any positive amplitudes satisfy the structural conditions.
CoefficientSet make_default_coeffs(double T, double tau1, double tau2,
                                   double amp_f = 40.0, double amp_g = 7.25,
                                   double amp_h = 55000.0);

// Checks the support/positivity conditions on a sample grid; throws
// std::invalid_argument with a description when violated.
void validate_coeffs(const CoefficientSet& cs, int grid_points = 10000);

// alpha via dense grid minimisation of |f'| plus golden-section refinement;
// beta and gamma by adaptive quadrature at the given absolute tolerance.
DerivedConstants derived_constants(const CoefficientSet& cs, double quad_tol = 1e-10);

nlohmann::json constants_to_json(const DerivedConstants& dc);

}  // namespace sdelb
