#pragma once

#include <functional>
#include <optional>
#include <string>

#include "wdro/space.hpp"

namespace wdro {

// Witness that the loss is dominated by c0 * d(z, anchor)^p.
struct SmoothAnchor {
    double c0 = 0.0;
    Point anchor;
};

// A nonnegative loss function on the instance space, with the regularity
// metadata the risk machinery consumes: a uniform upper bound M, optionally a
// Lipschitz constant, optionally a smooth anchor.
struct Hypothesis {
    std::string family_tag;
    std::function<double(const Point&)> evaluate;
    double upper_bound = 0.0;
    std::optional<double> lipschitz_constant;
    std::optional<SmoothAnchor> smooth_anchor;

    double operator()(const Point& z) const { return evaluate(z); }

    static Hypothesis constant(double c, std::string tag = "constant") {
        Hypothesis h;
        h.family_tag = std::move(tag);
        h.evaluate = [c](const Point&) { return c; };
        h.upper_bound = c;
        h.lipschitz_constant = 0.0;
        return h;
    }
};

} // namespace wdro
