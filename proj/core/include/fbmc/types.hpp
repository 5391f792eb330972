#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace fbmc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Cell roles inside a transmit grid.
enum class CellKind : std::uint8_t { data, pilot, reserved };

}  // namespace fbmc
