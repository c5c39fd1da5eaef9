#include "pseudoradial/quadrature.hpp"

namespace pseudoradial::quad {

const std::array<std::pair<double, double>, 20>& gauss_legendre_20()
{
    static const auto rule = [] {
        constexpr int n = 20;
        std::array<std::pair<double, double>, n> out{};
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            out[i] = {x, 2 / ((1 - x * x) * dp * dp)};
        }
        return out;
    }();
    return rule;
}

}  // namespace pseudoradial::quad
