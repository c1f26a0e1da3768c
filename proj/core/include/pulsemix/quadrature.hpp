// quadrature.hpp — Gauss–Legendre rules on [-1, 1] and composite rules on [a, b].

#pragma once

#include <vector>

namespace pulsemix {

inline constexpr int kDefaultQuadPoints = 1024;
inline constexpr int kMaxPanelOrder = 16;

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        using R = decltype(f(0.0));
        R sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

// n-point rule on [-1, 1], nodes ascending
QuadratureRule gauss_legendre(int order);

// quad_points nodes split into equal panels of order min(quad_points, 16);
// when quad_points is not a multiple of the panel order the remainder is dropped.
QuadratureRule composite_gauss_legendre(double a, double b, int quad_points);

} // namespace pulsemix
