#include "fbmc/ofdm.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmc/fft.hpp"

namespace fbmc {

namespace {

std::vector<cplx> transform(std::vector<cplx> x, int sign) {
    if (is_pow2(static_cast<int>(x.size()))) {
        fft_pow2(x, sign);
        return x;
    }
    return dft_ref(x, sign);
}

}  // namespace

std::vector<cplx> ofdm_modulate(const QamGrid& grid, int cp_length) {
    const int M = grid.num_subcarriers;
    if (M <= 0 || cp_length < 0 || cp_length > M)
        throw std::invalid_argument("ofdm_modulate: bad dimensions");
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    std::vector<cplx> s;
    s.reserve(static_cast<size_t>(grid.num_symbols) * (M + cp_length));
    std::vector<cplx> x(M);
    for (int n = 0; n < grid.num_symbols; ++n) {
        for (int m = 0; m < M; ++m) x[m] = grid.at(m, n) * scale;
        auto body = transform(x, -1);
        s.insert(s.end(), body.end() - cp_length, body.end());
        s.insert(s.end(), body.begin(), body.end());
    }
    return s;
}

QamGrid ofdm_demodulate(std::span<const cplx> samples, int num_subcarriers,
                        int num_symbols, int cp_length) {
    const int M = num_subcarriers;
    const size_t sym_len = static_cast<size_t>(M) + cp_length;
    if (samples.size() < sym_len * num_symbols)
        throw std::length_error("ofdm_demodulate: stream too short");
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    QamGrid out(M, num_symbols);
    std::vector<cplx> x(M);
    for (int n = 0; n < num_symbols; ++n) {
        const size_t base = static_cast<size_t>(n) * sym_len + cp_length;
        for (int m = 0; m < M; ++m) x[m] = samples[base + m];
        auto bins = transform(x, +1);
        for (int m = 0; m < M; ++m) out.at(m, n) = bins[m] * scale;
    }
    return out;
}

}  // namespace fbmc
