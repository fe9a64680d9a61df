#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "json.hpp"
#include "sdelb/coeffs.hpp"

namespace sdelb {

// Target error sequence a_N and site-window sequence delta_N, stored as an
// explicit prefix indexed from N = 1. a must be strictly decreasing and
// positive; delta must stay in (0, T] and never increase (plans generated
// from clamped expressions may hold an initial plateau).
struct RatePlan {
    std::vector<double> a;
    std::vector<double> delta;
};

void validate_plan(const RatePlan& plan, double T);

// Piecewise-glued increasing function determined by knot/plateau pairs
// (b_N, d_N) for N >= n0, with an affine extension past the last knot.
struct PsiSpec {
    int n0 = 0;
    std::vector<double> b;  // knots, index i corresponds to N = n0 + i
    std::vector<double> d;  // plateau values at the knots
    double alpha = 0.0;
    double beta = 0.0;
    double tail_slope = 0.0;
};

// Least stored N with a_N + c2/N <= c1; throws if the prefix has none.
int compute_N0(const RatePlan& plan, double c1, double c2);

// Plateau value (1 + sqrt(96/(alpha*min(delta,tau1/2)^3))) * N^3. Shared by
// the knot construction and the bound evaluation so both produce the same
// floating-point number for the same inputs.
double plateau_value(double alpha, double delta, double tau1, int N);

// Builds knots b_N = sqrt(-beta*ln((a_N + c2/N)/c1)) and plateaus d_N for
// all stored N >= N0 and verifies both sequences are strictly increasing.
PsiSpec compute_knots(const RatePlan& plan, const DerivedConstants& consts, double tau1);

double psi_eval(const PsiSpec& spec, double x);

// Inverse of psi_eval: exact at stored plateau values, closed form on the
// left tail and the affine extension, bisection to 1e-12 between knots.
// Throws for y <= 0. If extrapolated is non-null it is set when y lies past
// the last stored plateau.
double psi_inv(const PsiSpec& spec, double y, bool* extrapolated = nullptr);

std::function<double(double)> psi_fn(const PsiSpec& spec);

nlohmann::json psi_to_json(const PsiSpec& spec);
PsiSpec psi_from_json(const nlohmann::json& j);

}  // namespace sdelb
