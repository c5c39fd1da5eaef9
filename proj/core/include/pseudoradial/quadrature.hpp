#pragma once
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace pseudoradial::quad {

struct Result {
    double value = 0;
    double error = 0;  ///< change between the last two refinements
    int levels = 0;
    long evaluations = 0;
};

/// Double-exponential rule on [0, 1].
/// The integrand is called as f(tau, 1 - tau) with both arguments exact, so
/// integrable endpoint singularities can be evaluated without cancellation.
template <class F>
Result tanh_sinh_unit(F&& f, double rel_tol = 1e-13, int max_levels = 11)
{
    // Node at t: u = pi/2 sinh t, tau = 1/(1+e^{-2u}), weight pi cosh t e^{-2u}/(1+e^{-2u})^2.
    // The pair (+t, -t) shares e = e^{-2|u|} and swaps tau with its complement.
    constexpr double kTiny = 1e-300;
    Result r;
    auto pair_sum = [&](double t) {
        const double e = std::exp(-std::numbers::pi * std::sinh(t));
        if (e < kTiny) return std::pair{0.0, false};
        const double inv = 1 / (1 + e);
        const double w = std::numbers::pi * std::cosh(t) * e * inv * inv;
        const double big = inv, small = e * inv;
        double s = w * f(big, small);
        if (t != 0) s += w * f(small, big);
        r.evaluations += t != 0 ? 2 : 1;
        return std::pair{s, true};
    };

    double h = 1;
    double sum = 0;
    for (int k = 0;; ++k) {
        auto [s, ok] = pair_sum(k * h);
        if (!ok) break;
        sum += s;
    }
    double estimate = sum * h;
    for (int level = 1; level <= max_levels; ++level) {
        h /= 2;
        for (int k = 1;; k += 2) {
            auto [s, ok] = pair_sum(k * h);
            if (!ok) break;
            sum += s;
        }
        const double next = sum * h;
        r.error = std::abs(next - estimate);
        r.levels = level;
        estimate = next;
        if (level >= 3 && r.error <= rel_tol * std::abs(estimate)) break;
    }
    r.value = estimate;
    return r;
}

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
const std::array<std::pair<double, double>, 20>& gauss_legendre_20();

/// Adaptive composite Gauss-Legendre on [a, b] by interval halving.
template <class F>
Result gauss_legendre_adaptive(F&& f, double a, double b, double rel_tol = 1e-13, int max_depth = 50)
{
    const auto& rule = gauss_legendre_20();
    Result r;
    auto panel = [&](double lo, double hi) {
        const double mid = (lo + hi) / 2, half = (hi - lo) / 2;
        double s = 0;
        for (auto [x, w] : rule) s += w * f(mid + half * x);
        r.evaluations += 20;
        return s * half;
    };
    struct Item {
        double lo, hi, value;
        int depth;
    };
    const double whole = panel(a, b);
    std::vector<Item> stack{{a, b, whole, 0}};
    double total = 0;
    double scale = std::abs(whole);
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const double mid = (it.lo + it.hi) / 2;
        const double left = panel(it.lo, mid), right = panel(mid, it.hi);
        const double diff = std::abs(left + right - it.value);
        const double share = std::abs(it.hi - it.lo) / std::abs(b - a);
        // the second test stops refinement once the change is at the roundoff of the panel sums
        const double noise = 64 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
        if (diff <= rel_tol * scale * share || diff <= noise || it.depth >= max_depth) {
            total += left + right;
            r.error += diff;
            r.levels = std::max(r.levels, it.depth + 1);
        } else {
            stack.push_back({it.lo, mid, left, it.depth + 1});
            stack.push_back({mid, it.hi, right, it.depth + 1});
        }
        scale = std::max(scale, std::abs(total));
    }
    r.value = total;
    return r;
}

}  // namespace pseudoradial::quad
