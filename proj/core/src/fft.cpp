#include "fbmc/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmc {

void fft_pow2(std::span<cplx> data, int sign) {
    const size_t n = data.size();
    if (!is_pow2(static_cast<int>(n)))
        throw std::invalid_argument("fft_pow2: size must be a power of two");

    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> dft_ref(std::span<const cplx> in, int sign) {
    const size_t n = in.size();
    std::vector<cplx> out(n);
    for (size_t m = 0; m < n; ++m) {
        cplx acc{};
        for (size_t k = 0; k < n; ++k) {
            const double ang = sign * 2.0 * pi * static_cast<double>(m * k % n) / static_cast<double>(n);
            acc += in[k] * cplx(std::cos(ang), std::sin(ang));
        }
        out[m] = acc;
    }
    return out;
}

}  // namespace fbmc
