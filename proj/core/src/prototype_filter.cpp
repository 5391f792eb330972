#include "fbmc/prototype_filter.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmc/types.hpp"

namespace fbmc {

PrototypeFilter design_prototype_filter(int num_subcarriers, int overlap_factor) {
    if (overlap_factor != 4)
        throw std::invalid_argument("prototype filter: only overlap factor K=4 is supported");
    if (num_subcarriers < 16 || num_subcarriers % 2 != 0)
        throw std::invalid_argument("prototype filter: M must be even and >= 16");

    // PHYDYAS frequency samples for K=4.
    static constexpr double h1 = 0.97195983;
    static constexpr double h2 = 0.70710678118654752440;
    static constexpr double h3 = 0.23514695;

    const int len = num_subcarriers * overlap_factor;
    PrototypeFilter f;
    f.num_subcarriers = num_subcarriers;
    f.overlap_factor = overlap_factor;
    f.taps.resize(len);

    double energy = 0.0;
    for (int k = 0; k < len; ++k) {
        const double t = 2.0 * pi * (k + 0.5) / len;
        const double g = 1.0 - 2.0 * h1 * std::cos(t) + 2.0 * h2 * std::cos(2.0 * t)
                       - 2.0 * h3 * std::cos(3.0 * t);
        f.taps[k] = g;
        energy += g * g;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (double& g : f.taps) g *= scale;
    return f;
}

}  // namespace fbmc
