#pragma once

#include <vector>

namespace fbmc {

/// Real, linear-phase prototype filter together with the system dimensions.
/// Taps are normalized to unit energy so the ambiguity self-term is exactly 1.
struct PrototypeFilter {
    std::vector<double> taps;  // length overlap_factor * num_subcarriers
    int num_subcarriers = 0;   // M
    int overlap_factor = 0;    // K

    int length() const { return num_subcarriers * overlap_factor; }
    /// Phase reference of the subcarrier oscillators: the filter midpoint.
    double center() const { return 0.5 * (length() - 1); }
};

/// PHYDYAS frequency-sampling design for overlap factor K=4.
///
/// g[k] = 1 + 2*sum_{l=1..3} (-1)^l H_l cos(2*pi*l*(k+1/2)/(K*M)), k = 0..K*M-1,
/// H1 = 0.97195983, H2 = 1/sqrt(2), H3 = 0.23514695, then unit-energy
/// normalization. The half-sample offset keeps the taps symmetric about the
/// midpoint, which makes the cross-ambiguity entries land on the real/imaginary
/// axes.
///
/// Throws std::invalid_argument for unsupported (M, K).
PrototypeFilter design_prototype_filter(int num_subcarriers, int overlap_factor);

}  // namespace fbmc
