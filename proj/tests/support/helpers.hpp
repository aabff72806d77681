#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pcbwave/image.hpp"
#include "pcbwave/rng.hpp"

namespace pcbwave::testing {

inline Image random_image(Rng& rng, int height, int width, double lo = 0.0, double hi = 255.0) {
    Image img(height, width);
    for (double& v : img.values()) v = rng.uniform(lo, hi);
    return img;
}

inline double max_abs_diff(const Grid& a, const Grid& b) {
    double worst = std::abs(static_cast<double>(a.height() - b.height())) +
                   std::abs(static_cast<double>(a.width() - b.width()));
    if (worst > 0) return 1e300;  // shape mismatch dwarfs any tolerance
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

inline double sum_squares(const Grid& g) {
    double sum = 0.0;
    for (double v : g.values()) sum += v * v;
    return sum;
}

}  // namespace pcbwave::testing
