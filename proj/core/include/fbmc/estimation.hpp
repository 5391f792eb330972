#pragma once

#include <vector>

#include "fbmc/grid.hpp"
#include "fbmc/ofdm.hpp"
#include "fbmc/pilots.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

/// One LS pilot observation: channel estimate anchored at (subcarrier, time).
/// Time is in grid symbol units and may be fractional (pair centers).
struct PilotEstimate {
    int subcarrier = 0;
    double time = 0.0;
    cplx value{};
};

/// Interpolated channel estimates over the full grid.
struct ChannelEstimateGrid {
    int num_subcarriers = 0;
    int num_symbols = 0;
    std::vector<cplx> values;

    cplx& at(int m, int n) { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
    cplx at(int m, int n) const { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
};

struct MetricRecord {
    double snr_db = 0.0;
    double mse = 0.0;
    double ber = 0.0;
    double pilot_power = 0.0;
};

/// LS estimate at a clean pilot: H_hat = clean / (x + yj).
/// Throws std::invalid_argument for a zero target.
cplx ls_estimate(cplx clean_pilot, const CleanPilotTarget& target);

/// Bilinear interpolation, time first then frequency; edges hold the nearest
/// pilot value. Throws std::invalid_argument when no pilots are given.
ChannelEstimateGrid interpolate(const std::vector<PilotEstimate>& pilots,
                                int num_subcarriers, int num_symbols);

enum class WaveformKind { fbmc, ofdm };

/// One-tap zero-forcing detection over data cells (mask == data, interior of
/// the guard band). FBMC: sign of Re(r / H_hat) -> 1 bit per cell; OFDM: QPSK
/// quadrant -> 2 bits per cell. |H_hat| below 1e-12 is an erasure and decodes
/// to an out-of-band marker (0xff) that always counts as wrong.
std::vector<std::uint8_t> equalize_detect_fbmc(const ComplexGrid& received,
                                               const ChannelEstimateGrid& estimates,
                                               const std::vector<CellKind>& mask,
                                               int guard_symbols);
std::vector<std::uint8_t> equalize_detect_ofdm(const QamGrid& received,
                                               const ChannelEstimateGrid& estimates,
                                               const std::vector<CellKind>& mask);

/// BER between tx and rx bit streams (erasure markers count as errors) plus
/// normalized estimation MSE from paired (H_hat, H_true) samples.
MetricRecord compute_metrics(const std::vector<std::pair<cplx, cplx>>& est_vs_oracle,
                             const std::vector<std::uint8_t>& tx_bits,
                             const std::vector<std::uint8_t>& rx_bits);

/// Accumulator merged across frames (order-independent).
struct MetricAccumulator {
    double sq_err_sum = 0.0;   // sum |H_hat - H|^2 at measured pilots
    double h_pow_sum = 0.0;    // sum |H|^2 at the same points
    size_t est_count = 0;
    size_t bit_errors = 0;
    size_t bit_count = 0;
    double pilot_power_sum = 0.0;
    size_t pilot_slot_groups = 0;

    void merge(const MetricAccumulator& o);
    double mse() const;  // normalized by mean |H|^2
    double ber() const;
};

}  // namespace fbmc
