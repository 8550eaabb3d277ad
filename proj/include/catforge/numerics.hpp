#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "catforge/errors.hpp"

namespace catforge::numerics {

inline constexpr int kGaussOrder = 16;

struct Node {
    double x;
    double w;
};

// Nodes and weights of the composite order-16 Gauss-Legendre rule on [a, b]
// split into `panels` equal panels. Visits nodes in ascending x.
template <class F>
void for_each_gauss_node(double a, double b, std::size_t panels, F&& f) {
    using Rule = boost::math::quadrature::gauss<double, kGaussOrder>;
    if (panels == 0) throw DomainError("quadrature needs at least one panel");
    const auto& absc = Rule::abscissa();  // non-negative half, 0 first for odd order only
    const auto& wts = Rule::weights();
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        const double mid = lo + 0.5 * width;
        const double half = 0.5 * width;
        // Order 16 is even: abscissa() holds 8 positive nodes.
        for (std::size_t i = absc.size(); i-- > 0;) f(Node{mid - half * absc[i], half * wts[i]});
        for (std::size_t i = 0; i < absc.size(); ++i) f(Node{mid + half * absc[i], half * wts[i]});
    }
}

template <class F>
double integrate(double a, double b, std::size_t panels, F&& f) {
    double acc = 0.0;
    for_each_gauss_node(a, b, panels, [&](Node n) { acc += n.w * f(n.x); });
    return acc;
}

// Panel count so that no panel is wider than max_width.
inline std::size_t panels_for(double a, double b, double max_width) {
    const double n = std::ceil((b - a) / max_width);
    return n < 1.0 ? std::size_t{1} : static_cast<std::size_t>(n);
}

}  // namespace catforge::numerics
