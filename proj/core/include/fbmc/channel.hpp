#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbmc/types.hpp"

namespace fbmc {

/// Relative multipath profile. Construction normalizes the linear tap powers
/// to unit total. Throws std::invalid_argument unless delays are strictly
/// increasing and start at 0.
struct PowerDelayProfile {
    std::vector<double> delays_s;
    std::vector<double> powers_db;

    PowerDelayProfile(std::vector<double> delays, std::vector<double> powers);
    std::vector<double> linear_powers() const;  // normalized, sums to 1

    /// 3GPP Extended Typical Urban, 9 taps, 5 us delay spread.
    static PowerDelayProfile etu();
};

/// Time-varying tapped-delay-line realization. Tap gains are generated with
/// a deterministic sum-of-sinusoids Rayleigh model (method of exact Doppler
/// spread, 16/17 sinusoids per quadrature arm) so the per-tap autocorrelation
/// tracks J0(2*pi*fd*tau).
struct ChannelRealization {
    std::vector<int> tap_delays_samples;
    std::vector<std::vector<cplx>> tap_gains;  // [tap][sample]
    double doppler_hz = 0.0;
    double sample_rate = 0.0;
    std::uint64_t seed = 0;

    size_t num_samples() const { return tap_gains.empty() ? 0 : tap_gains[0].size(); }
};

/// Adds circular complex Gaussian noise with variance sigma2 per sample.
std::vector<cplx> awgn(std::span<const cplx> samples, double sigma2, std::uint64_t seed);

/// Builds a seeded Rayleigh realization; delays quantize to the nearest
/// sample. doppler_hz == 0 yields time-constant taps.
ChannelRealization make_channel(const PowerDelayProfile& profile, double doppler_hz,
                                double sample_rate, size_t num_samples,
                                std::uint64_t seed);

/// y[k] = sum_t g_t[k] * x[k - d_t]. Throws std::invalid_argument when the
/// realization does not cover the stream.
std::vector<cplx> apply_channel(std::span<const cplx> samples,
                                const ChannelRealization& realization);

/// Frequency response seen by subcarrier m at sample k:
/// H(m, k) = sum_t g_t[k] e^{+j(2*pi/M) m d_t} (the sign matches the
/// e^{-j(2*pi/M) m k} subcarrier kernel used by both waveforms here).
cplx true_freq_response(const ChannelRealization& realization, size_t sample_index,
                        int subcarrier, int num_subcarriers);

}  // namespace fbmc
