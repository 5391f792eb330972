#include "fbmc/modem.hpp"

#include <cmath>
#include <stdexcept>

#include "fbmc/fft.hpp"

namespace fbmc {

namespace {

// j^(m+n) * (-1)^(m*n): the per-cell factor left after pulling the carrier
// apart into a pure e^{-j(2*pi/M) m u} kernel plus the midpoint twiddle.
inline cplx cell_factor(const PhaseConvention& conv, int m, int n) {
    cplx f = conv.factor(m, n);
    if ((m & 1) && (n & 1)) f = -f;
    return f;
}

}  // namespace

FbmcModem::FbmcModem(PrototypeFilter filter, PhaseConvention convention)
    : filter_(std::move(filter)), conv_(convention) {
    const int M = filter_.num_subcarriers;
    const int L = filter_.length();
    const double D = filter_.center();
    twiddle_base_.resize(M);
    for (int m = 0; m < M; ++m) {
        const double ang = 2.0 * pi * m * D / M;
        twiddle_base_[m] = cplx(std::cos(ang), std::sin(ang));  // e^{+j(2pi/M) m D}
    }
    base_.resize(static_cast<size_t>(M) * L);
    for (int m = 0; m < M; ++m)
        for (int u = 0; u < L; ++u) {
            const double ang = -2.0 * pi * m * (u - D) / M;
            base_[static_cast<size_t>(m) * L + u] =
                filter_.taps[u] * cplx(std::cos(ang), std::sin(ang));
        }
}

size_t FbmcModem::stream_length(int num_symbols) const {
    const int M = filter_.num_subcarriers;
    return static_cast<size_t>(num_symbols - 1) * (M / 2) + filter_.length();
}

std::vector<cplx> FbmcModem::synthesis_filter(int m, int n) const {
    const int L = filter_.length();
    std::vector<cplx> out(L);
    const cplx f = cell_factor(conv_, m, n);
    const cplx* b = base_.data() + static_cast<size_t>(m) * L;
    for (int u = 0; u < L; ++u) out[u] = f * b[u];
    return out;
}

std::vector<cplx> FbmcModem::modulate_ref(const OqamGrid& grid) const {
    if (grid.num_subcarriers != filter_.num_subcarriers)
        throw std::invalid_argument("modulate: grid dimensions do not match the filter");
    const int M = filter_.num_subcarriers;
    const int L = filter_.length();
    std::vector<cplx> s(stream_length(grid.num_symbols), cplx{});
    for (int n = 0; n < grid.num_symbols; ++n) {
        const size_t base = static_cast<size_t>(n) * (M / 2);
        for (int m = 0; m < M; ++m) {
            const double a = grid.at(m, n);
            if (a == 0.0) continue;
            const auto gmn = synthesis_filter(m, n);
            for (int u = 0; u < L; ++u) s[base + u] += a * gmn[u];
        }
    }
    return s;
}

std::vector<cplx> FbmcModem::modulate(const OqamGrid& grid) const {
    if (grid.num_subcarriers != filter_.num_subcarriers)
        throw std::invalid_argument("modulate: grid dimensions do not match the filter");
    const int M = filter_.num_subcarriers;
    const int L = filter_.length();
    const bool pow2 = is_pow2(M);
    std::vector<cplx> s(stream_length(grid.num_symbols), cplx{});
    std::vector<cplx> x(M);
    for (int n = 0; n < grid.num_symbols; ++n) {
        bool any = false;
        for (int m = 0; m < M; ++m) {
            const double a = grid.at(m, n);
            x[m] = a == 0.0 ? cplx{} : a * cell_factor(conv_, m, n) * twiddle_base_[m];
            any = any || a != 0.0;
        }
        if (!any) continue;
        std::vector<cplx> X;
        if (pow2) {
            X = x;
            fft_pow2(X, -1);
        } else {
            X = dft_ref(x, -1);
        }
        const size_t base = static_cast<size_t>(n) * (M / 2);
        for (int u = 0; u < L; ++u) s[base + u] += filter_.taps[u] * X[u % M];
    }
    return s;
}

ComplexGrid FbmcModem::demodulate(std::span<const cplx> samples, int num_symbols) const {
    const int M = filter_.num_subcarriers;
    const int L = filter_.length();
    if (samples.size() < stream_length(num_symbols))
        throw std::length_error("demodulate: stream too short for the requested symbol count");
    const bool pow2 = is_pow2(M);
    ComplexGrid out(M, num_symbols);
    std::vector<cplx> z(M);
    for (int n = 0; n < num_symbols; ++n) {
        const size_t base = static_cast<size_t>(n) * (M / 2);
        std::fill(z.begin(), z.end(), cplx{});
        for (int u = 0; u < L; ++u) z[u % M] += samples[base + u] * filter_.taps[u];
        std::vector<cplx> B;
        if (pow2) {
            B = z;
            fft_pow2(B, +1);
        } else {
            B = dft_ref(z, +1);
        }
        for (int m = 0; m < M; ++m)
            out.at(m, n) = std::conj(cell_factor(conv_, m, n) * twiddle_base_[m]) * B[m];
    }
    return out;
}

ComplexGrid FbmcModem::demodulate_ref(std::span<const cplx> samples, int num_symbols) const {
    const int M = filter_.num_subcarriers;
    if (samples.size() < stream_length(num_symbols))
        throw std::length_error("demodulate: stream too short for the requested symbol count");
    ComplexGrid out(M, num_symbols);
    for (int n = 0; n < num_symbols; ++n)
        for (int m = 0; m < M; ++m) out.at(m, n) = demodulate_at(samples, m, n);
    return out;
}

cplx FbmcModem::demodulate_at(std::span<const cplx> samples, int m, int n) const {
    const int M = filter_.num_subcarriers;
    const int L = filter_.length();
    const size_t base = static_cast<size_t>(n) * (M / 2);
    if (samples.size() < base + static_cast<size_t>(L))
        throw std::length_error("demodulate_at: stream too short");
    const cplx* b = base_.data() + static_cast<size_t>(m) * L;
    cplx acc{};
    for (int u = 0; u < L; ++u) acc += samples[base + u] * std::conj(b[u]);
    return acc * std::conj(cell_factor(conv_, m, n));
}

}  // namespace fbmc
