#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbmc/channel.hpp"
#include "fbmc/estimation.hpp"
#include "fbmc/grid.hpp"
#include "fbmc/ofdm.hpp"
#include "fbmc/pilots.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

enum class ChannelKind { awgn, etu };
enum class PowerPolicy { boost_to_snr, normalized_total };

/// Experiment description. Defaults reproduce the desk-scale setups:
/// AWGN block M=64 with one pilot group, and an LTE-analog ETU frame M=256,
/// 28 OQAM symbols, pilot groups of four on every 6th subcarrier.
struct ExperimentConfig {
    WaveformKind waveform = WaveformKind::fbmc;
    PilotScheme scheme = PilotScheme::DDP2;
    int num_subcarriers = 64;
    int num_symbols = 16;          // OQAM half-symbol slots (OFDM uses half)
    int pilot_stride = 6;          // subcarrier stride, LTE-analog mode
    int group_size = 2;            // pilots per group (2 or 4)
    std::vector<int> group_symbols;  // first slot of each group in time
    std::vector<double> snr_sweep_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20,
                                        22, 24, 26, 28, 30};
    int frames_per_point = 2000;
    PowerPolicy power_policy = PowerPolicy::boost_to_snr;
    /// Square root of the per-pair clean-target power: AUP prime x = scale,
    /// DDP pair target x = y = scale/sqrt(2). Experiments overwrite it (SNR
    /// parity or the normalized-total calibration).
    double pilot_target_scale = 1.0;
    ChannelKind channel = ChannelKind::awgn;
    double doppler_hz = 92.6;
    double sample_rate_hz = 3.84e6;
    int ofdm_cp = 20;
    std::uint64_t seed = 1;
    int guard_symbols = 4;         // K
    int threads = 0;               // 0: hardware concurrency

    // Channel profile override (delays in seconds, relative powers in dB).
    std::vector<double> profile_delays_s;
    std::vector<double> profile_powers_db;

    static ExperimentConfig awgn_block();
    static ExperimentConfig etu_frame();
    /// Flat key=value file; unknown keys are an error.
    static ExperimentConfig from_file(const std::string& path, const ExperimentConfig& base);
};

struct SchemeCurve {
    std::string scheme;    // "AUP", "DDP2", "DDP4", "OFDM"
    std::string waveform;  // "FBMC" / "OFDM"
    std::vector<MetricRecord> records;  // one per sweep point
    double power_ratio = 0.0;           // eta, vs the OFDM pilot
};

struct ExperimentResult {
    std::vector<double> snr_sweep_db;
    std::vector<SchemeCurve> curves;
    std::uint64_t seed = 0;
    int frames = 0;
};

/// One transmit frame plus everything needed to score it.
struct BuiltFrame {
    OqamGrid oqam;                  // FBMC payload (unused for OFDM)
    QamGrid qam;                    // OFDM payload
    std::vector<PilotGroup> groups; // solved pilot groups (FBMC)
    std::vector<std::pair<int, int>> ofdm_pilots;  // (m, symbol)
    std::vector<CellKind> ofdm_mask;               // OFDM grid layout
    std::vector<std::uint8_t> tx_bits;
    double pilot_power = 0.0;       // realized pilot power this frame
};

/// Deterministic frame construction for (config, frame_index).
BuiltFrame build_frame(const ExperimentConfig& config, const FbmcModem& modem,
                       std::uint64_t frame_index);

/// AWGN power-boosting experiment: per-SNR clean-pilot MSE for OFDM,
/// FBMC+AUP and FBMC+DDP2 with SNR-parity pilot targets, plus measured
/// power-boosting ratios.
ExperimentResult run_power_experiment(const ExperimentConfig& config);

/// ETU fading experiment: MSE and uncoded BER for FBMC+AUP(4),
/// FBMC+DDP4 and OFDM under the normalized-power policy.
ExperimentResult run_etu_experiment(const ExperimentConfig& config);

/// CSV rows: snr_db,mse,ber,pilot_power,scheme,waveform,seed,frames.
void write_csv(const ExperimentResult& result, const std::string& path);

/// Per-frame substream seed derivation (splitmix-style, order-free).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Deterministic parallel map over [0, count): results land in order.
void parallel_frames(int threads, std::uint64_t count,
                     const std::function<void(std::uint64_t)>& body);

}  // namespace fbmc
