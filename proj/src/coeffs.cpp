#include "sdelb/coeffs.hpp"

#include <cmath>
#include <stdexcept>

#include "sdelb/quadrature.hpp"

namespace sdelb {

namespace {

constexpr double kExpClamp = 700.0;  // exp arguments below -700 underflow to 0

double clamped_exp(double arg) {
    if (arg < -kExpClamp) return 0.0;
    if (arg > kExpClamp) arg = kExpClamp;
    return std::exp(arg);
}

SmoothFn make_left_bump(double tau1, double amp) {
    // amp * exp(1/(x - tau1)) on (-inf, tau1), 0 elsewhere.
    SmoothFn fn;
    fn.support_hi = tau1;
    fn.sup_bound = amp;
    fn.eval = [tau1, amp](double x) {
        if (x >= tau1) return 0.0;
        return amp * clamped_exp(1.0 / (x - tau1));
    };
    fn.deriv = [tau1, amp](double x) {
        if (x >= tau1) return 0.0;
        const double d = x - tau1;
        return -amp * clamped_exp(1.0 / d) / (d * d);
    };
    return fn;
}

SmoothFn make_interior_bump(double tau1, double tau2, double amp) {
    // amp * exp(1/(tau1-x) + 1/(x-tau2) + 4/(tau2-tau1)) on (tau1, tau2);
    // the constant shifts the exponent so the peak value equals amp.
    SmoothFn fn;
    fn.support_lo = tau1;
    fn.support_hi = tau2;
    fn.sup_bound = amp;
    const double shift = 4.0 / (tau2 - tau1);
    fn.eval = [tau1, tau2, amp, shift](double x) {
        if (x <= tau1 || x >= tau2) return 0.0;
        return amp * clamped_exp(1.0 / (tau1 - x) + 1.0 / (x - tau2) + shift);
    };
    fn.deriv = [tau1, tau2, amp, shift](double x) {
        if (x <= tau1 || x >= tau2) return 0.0;
        const double dl = tau1 - x;
        const double dr = x - tau2;
        const double v = amp * clamped_exp(1.0 / dl + 1.0 / dr + shift);
        return v * (1.0 / (dl * dl) - 1.0 / (dr * dr));
    };
    return fn;
}

SmoothFn make_right_bump(double tau2, double amp) {
    // amp * exp(1/(tau2 - x)) on (tau2, inf), 0 elsewhere.
    SmoothFn fn;
    fn.support_lo = tau2;
    fn.sup_bound = amp;
    fn.eval = [tau2, amp](double x) {
        if (x <= tau2) return 0.0;
        return amp * clamped_exp(1.0 / (tau2 - x));
    };
    fn.deriv = [tau2, amp](double x) {
        if (x <= tau2) return 0.0;
        const double d = tau2 - x;
        return amp * clamped_exp(1.0 / d) / (d * d);
    };
    return fn;
}

// Golden-section minimisation of |fp| on [a, b]; assumes the bracket came
// from a dense grid scan, so a local refinement is all that is needed.
double golden_min_abs(const std::function<double(double)>& fp, double a, double b) {
    const double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::fabs(fp(c));
    double fd = std::fabs(fp(d));
    for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = std::fabs(fp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = std::fabs(fp(d));
        }
    }
    return std::min(fc, fd);
}

}  // namespace

CoefficientSet make_default_coeffs(double T, double tau1, double tau2, double amp_f,
                                   double amp_g, double amp_h) {
    if (!(0.0 < tau1 && tau1 < tau2 && tau2 < T))
        throw std::invalid_argument("make_default_coeffs: need 0 < tau1 < tau2 < T");
    if (!(amp_f > 0.0 && amp_g > 0.0 && amp_h > 0.0))
        throw std::invalid_argument("make_default_coeffs: amplitudes must be positive");
    CoefficientSet cs;
    cs.T = T;
    cs.tau1 = tau1;
    cs.tau2 = tau2;
    cs.f = make_left_bump(tau1, amp_f);
    cs.g = make_interior_bump(tau1, tau2, amp_g);
    cs.h = make_right_bump(tau2, amp_h);
    validate_coeffs(cs);
    return cs;
}

void validate_coeffs(const CoefficientSet& cs, int grid_points) {
    if (!(0.0 < cs.tau1 && cs.tau1 < cs.tau2 && cs.tau2 < cs.T))
        throw std::invalid_argument("coefficients: need 0 < tau1 < tau2 < T");
    const double lo = -0.5 * cs.T;
    const double hi = 1.5 * cs.T;
    bool g_nonzero = false;
    for (int i = 0; i <= grid_points; ++i) {
        const double x = lo + (hi - lo) * i / grid_points;
        if (x >= cs.tau1 && cs.f.eval(x) != 0.0)
            throw std::invalid_argument("coefficients: f does not vanish past tau1");
        if ((x <= cs.tau1 || x >= cs.tau2) && cs.g.eval(x) != 0.0)
            throw std::invalid_argument("coefficients: g not supported in [tau1, tau2]");
        if (x <= cs.tau2 && cs.h.eval(x) != 0.0)
            throw std::invalid_argument("coefficients: h does not vanish before tau2");
        if (std::fabs(cs.f.eval(x)) > cs.f.sup_bound * (1.0 + 1e-12) ||
            std::fabs(cs.g.eval(x)) > cs.g.sup_bound * (1.0 + 1e-12) ||
            std::fabs(cs.h.eval(x)) > cs.h.sup_bound * (1.0 + 1e-12))
            throw std::invalid_argument("coefficients: sup bound violated");
        if (cs.g.eval(x) != 0.0) g_nonzero = true;
    }
    if (!g_nonzero) throw std::invalid_argument("coefficients: g vanishes identically");
    // inf |f'| on [0, tau1/2] must be bounded away from zero
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid_points; ++i) {
        const double x = 0.5 * cs.tau1 * i / grid_points;
        min_abs = std::min(min_abs, std::fabs(cs.f.deriv(x)));
    }
    if (!(min_abs > 1e-12 * cs.f.sup_bound))
        throw std::invalid_argument("coefficients: |f'| not bounded away from 0 on [0, tau1/2]");
    const double gam = integrate(cs.h.eval, cs.tau2, cs.T, 1e-10);
    if (std::fabs(gam) < 1e-12 * cs.h.sup_bound)
        throw std::invalid_argument("coefficients: integral of h over [tau2, T] vanishes");
}

DerivedConstants derived_constants(const CoefficientSet& cs, double quad_tol) {
    if (!(quad_tol > 0.0)) throw std::invalid_argument("derived_constants: quad_tol must be > 0");
    DerivedConstants dc;

    // alpha: dense scan of |f'| over [0, tau1/2] followed by local refinement
    const int n = 100000;
    const double b = 0.5 * cs.tau1;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = b * i / n;
        const double v = std::fabs(cs.f.deriv(x));
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    const double floor = 1e-12 * std::max(1.0, cs.f.sup_bound);
    if (!(best > floor))
        throw std::invalid_argument("derived_constants: degenerate f, |f'| below positivity floor");
    const double lo = b * std::max(0, best_i - 1) / n;
    const double hi = b * std::min(n, best_i + 1) / n;
    const double refined = std::min(best, golden_min_abs(cs.f.deriv, lo, hi));
    dc.alpha = refined * refined;

    dc.beta = integrate([&](double t) { const double v = cs.g.eval(t); return v * v; },
                        cs.tau1, cs.tau2, quad_tol);
    dc.gamma = integrate(cs.h.eval, cs.tau2, cs.T, quad_tol);

    const double pi = 3.14159265358979323846;
    dc.c1 = dc.gamma * std::exp(-pi * pi / 4.0 - 1.0 / dc.beta) /
            (8.0 * pi * std::sqrt(2.0 * pi * dc.beta));
    dc.c2 = dc.gamma * std::exp(-pi * pi / 4.0) / (4.0 * pi);
    return dc;
}

nlohmann::json constants_to_json(const DerivedConstants& dc) {
    return nlohmann::json{{"alpha", dc.alpha},
                          {"beta", dc.beta},
                          {"gamma", dc.gamma},
                          {"c1", dc.c1},
                          {"c2", dc.c2}};
}

}  // namespace sdelb
