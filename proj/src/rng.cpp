#include "frailsurv/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace frailsurv {

double draw_gamma(Rng& rng, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("draw_gamma: shape and scale must be positive");
    if (shape < 1.0) {
        // boost to shape+1 and shrink by u^{1/shape}
        const double u = draw_uniform(rng);
        return draw_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = draw_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = draw_uniform(rng);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

}  // namespace frailsurv
