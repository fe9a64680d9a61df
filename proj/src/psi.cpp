#include "sdelb/psi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdelb {

namespace {

constexpr double kExpClamp = 700.0;

double clamped_exp(double arg) {
    return std::exp(std::clamp(arg, -kExpClamp, kExpClamp));
}

bool is_knot(double x, double b) { return std::fabs(x - b) <= 1e-15 * (1.0 + std::fabs(b)); }

}  // namespace

void validate_plan(const RatePlan& plan, double T) {
    if (plan.a.empty() || plan.a.size() != plan.delta.size())
        throw std::invalid_argument("rate plan: empty or mismatched sequences");
    for (std::size_t i = 0; i < plan.a.size(); ++i) {
        if (!(plan.a[i] > 0.0)) throw std::invalid_argument("rate plan: a must be positive");
        if (!(plan.delta[i] > 0.0 && plan.delta[i] <= T))
            throw std::invalid_argument("rate plan: delta must lie in (0, T]");
        if (i > 0 && !(plan.a[i] < plan.a[i - 1]))
            throw std::invalid_argument("rate plan: a must be strictly decreasing");
        if (i > 0 && plan.delta[i] > plan.delta[i - 1])
            throw std::invalid_argument("rate plan: delta must not increase");
    }
}

int compute_N0(const RatePlan& plan, double c1, double c2) {
    for (std::size_t i = 0; i < plan.a.size(); ++i) {
        const int N = static_cast<int>(i) + 1;
        if (plan.a[i] + c2 / N <= c1) return N;
    }
    throw std::runtime_error(
        "compute_N0: no stored N satisfies a_N + c2/N <= c1 (prefix of length " +
        std::to_string(plan.a.size()) + ", c1 = " + std::to_string(c1) +
        "); extend the prefix or use a faster-decaying target sequence");
}

double plateau_value(double alpha, double delta, double tau1, int N) {
    const double m = std::min(delta, 0.5 * tau1);
    const double n3 = static_cast<double>(N) * N * N;
    return (1.0 + std::sqrt(96.0 / (alpha * m * m * m))) * n3;
}

PsiSpec compute_knots(const RatePlan& plan, const DerivedConstants& consts, double tau1) {
    const int n0 = compute_N0(plan, consts.c1, consts.c2);
    PsiSpec spec;
    spec.n0 = n0;
    spec.alpha = consts.alpha;
    spec.beta = consts.beta;
    const int len = static_cast<int>(plan.a.size());
    spec.b.reserve(len - n0 + 1);
    spec.d.reserve(len - n0 + 1);
    for (int N = n0; N <= len; ++N) {
        const double ratio = (plan.a[N - 1] + consts.c2 / N) / consts.c1;
        const double arg = -consts.beta * std::log(ratio);
        spec.b.push_back(std::sqrt(std::max(arg, 0.0)));
        spec.d.push_back(plateau_value(consts.alpha, plan.delta[N - 1], tau1, N));
    }
    if (spec.b.size() < 2)
        throw std::runtime_error("compute_knots: need at least two knots past N0");
    for (std::size_t i = 1; i < spec.b.size(); ++i) {
        if (!(spec.b[i] > spec.b[i - 1]))
            throw std::runtime_error("compute_knots: knot sequence not strictly increasing");
        if (!(spec.d[i] > spec.d[i - 1]))
            throw std::runtime_error("compute_knots: plateau sequence not strictly increasing");
    }
    const std::size_t k = spec.b.size() - 1;
    spec.tail_slope = (spec.d[k] - spec.d[k - 1]) / (spec.b[k] - spec.b[k - 1]);
    return spec;
}

double psi_eval(const PsiSpec& spec, double x) {
    const auto& b = spec.b;
    const auto& d = spec.d;
    if (b.empty()) throw std::invalid_argument("psi_eval: empty spec");
    // exact plateau at knots; the tie rule keeps the stored values bit-exact
    const auto it = std::lower_bound(b.begin(), b.end(), x);
    if (it != b.end() && is_knot(x, *it)) return d[it - b.begin()];
    if (it != b.begin() && is_knot(x, *(it - 1))) return d[it - b.begin() - 1];

    if (x < b.front()) {
        return d.front() * (1.0 - clamped_exp(1.0 / (x - b.front())));
    }
    if (x > b.back()) {
        return d.back() + spec.tail_slope * (x - b.back());
    }
    const std::size_t hi = it - b.begin();  // b[hi-1] < x < b[hi]
    const std::size_t lo = hi - 1;
    const double arg = 1.0 / (x - b[lo]) - 1.0 / (b[hi] - x);
    return d[lo] + (d[hi] - d[lo]) / (1.0 + clamped_exp(arg));
}

double psi_inv(const PsiSpec& spec, double y, bool* extrapolated) {
    const auto& b = spec.b;
    const auto& d = spec.d;
    if (b.empty()) throw std::invalid_argument("psi_inv: empty spec");
    if (!(y > 0.0)) throw std::invalid_argument("psi_inv: y must be positive");
    if (!std::isfinite(y)) throw std::invalid_argument("psi_inv: y must be finite");
    if (extrapolated) *extrapolated = false;

    // snap to stored plateaus: the gluing is numerically flat near knots, so
    // values indistinguishable from d_N must invert to b_N exactly
    for (std::size_t i = 0; i < d.size(); ++i)
        if (std::fabs(y - d[i]) <= 1e-12 * d[i]) return b[i];

    if (y < d.front()) {
        // left branch d0*(1 - exp(1/(x - b0))) solved in closed form
        const double t = std::log1p(-y / d.front());  // negative
        return b.front() + 1.0 / t;
    }
    if (y > d.back()) {
        if (extrapolated) *extrapolated = true;
        return b.back() + (y - d.back()) / spec.tail_slope;
    }
    const std::size_t hi = std::lower_bound(d.begin(), d.end(), y) - d.begin();
    double lo_x = b[hi - 1];
    double hi_x = b[hi];
    for (int it = 0; it < 200 && (hi_x - lo_x) > 1e-12; ++it) {
        const double mid = 0.5 * (lo_x + hi_x);
        if (psi_eval(spec, mid) < y)
            lo_x = mid;
        else
            hi_x = mid;
    }
    return 0.5 * (lo_x + hi_x);
}

std::function<double(double)> psi_fn(const PsiSpec& spec) {
    return [spec](double x) { return psi_eval(spec, x); };
}

nlohmann::json psi_to_json(const PsiSpec& spec) {
    return nlohmann::json{{"n0", spec.n0},     {"b", spec.b},
                          {"d", spec.d},       {"alpha", spec.alpha},
                          {"beta", spec.beta}, {"tail_slope", spec.tail_slope}};
}

PsiSpec psi_from_json(const nlohmann::json& j) {
    PsiSpec spec;
    spec.n0 = j.at("n0").get<int>();
    spec.b = j.at("b").get<std::vector<double>>();
    spec.d = j.at("d").get<std::vector<double>>();
    spec.alpha = j.at("alpha").get<double>();
    spec.beta = j.at("beta").get<double>();
    spec.tail_slope = j.at("tail_slope").get<double>();
    if (spec.b.size() != spec.d.size() || spec.b.empty())
        throw std::invalid_argument("psi_from_json: malformed knot arrays");
    return spec;
}

}  // namespace sdelb
