#pragma once

#include <span>
#include <vector>

#include "fbmc/types.hpp"

namespace fbmc {

/// Complex QAM grid for the CP-OFDM benchmark, M subcarriers x N symbols.
struct QamGrid {
    int num_subcarriers = 0;
    int num_symbols = 0;
    std::vector<cplx> values;

    QamGrid() = default;
    QamGrid(int m, int n)
        : num_subcarriers(m), num_symbols(n),
          values(static_cast<size_t>(m) * n, cplx{}) {}

    cplx& at(int m, int n) { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
    cplx at(int m, int n) const { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
};

/// Unitary CP-OFDM round trip. The synthesis kernel is e^{-j(2*pi/M) k m},
/// matching the FBMC subcarrier orientation so both waveforms see the same
/// channel frequency response.
std::vector<cplx> ofdm_modulate(const QamGrid& grid, int cp_length);
QamGrid ofdm_demodulate(std::span<const cplx> samples, int num_subcarriers,
                        int num_symbols, int cp_length);

}  // namespace fbmc
