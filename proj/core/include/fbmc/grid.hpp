#pragma once

#include <stdexcept>
#include <vector>

#include "fbmc/types.hpp"

namespace fbmc {

/// Quarter-turn phase factor j_{m,n} = j^(m+n) applied to every PAM symbol.
struct PhaseConvention {
    cplx factor(int m, int n) const {
        static constexpr double re[4] = {1.0, 0.0, -1.0, 0.0};
        static constexpr double im[4] = {0.0, 1.0, 0.0, -1.0};
        const int q = ((m + n) % 4 + 4) % 4;
        return {re[q], im[q]};
    }
};

/// Real-valued PAM symbol plane, M subcarriers by N half-symbol slots.
struct OqamGrid {
    int num_subcarriers = 0;  // M
    int num_symbols = 0;      // N (OQAM half-symbol slots)
    double symbol_power = 0.5;
    std::vector<double> values;   // m + n*M
    std::vector<CellKind> mask;   // same layout

    OqamGrid() = default;
    OqamGrid(int m, int n, double rho2 = 0.5)
        : num_subcarriers(m), num_symbols(n), symbol_power(rho2),
          values(static_cast<size_t>(m) * n, 0.0),
          mask(static_cast<size_t>(m) * n, CellKind::data) {}

    double& at(int m, int n) { return values[idx(m, n)]; }
    double at(int m, int n) const { return values[idx(m, n)]; }
    CellKind& kind(int m, int n) { return mask[idx(m, n)]; }
    CellKind kind(int m, int n) const { return mask[idx(m, n)]; }

    size_t idx(int m, int n) const {
        if (m < 0 || m >= num_subcarriers || n < 0 || n >= num_symbols)
            throw std::out_of_range("OqamGrid index");
        return static_cast<size_t>(n) * num_subcarriers + m;
    }
};

/// Complex analysis-filter outputs, same layout as the transmit grid.
struct ComplexGrid {
    int num_subcarriers = 0;
    int num_symbols = 0;
    std::vector<cplx> values;

    ComplexGrid() = default;
    ComplexGrid(int m, int n)
        : num_subcarriers(m), num_symbols(n),
          values(static_cast<size_t>(m) * n, cplx{}) {}

    cplx& at(int m, int n) { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
    cplx at(int m, int n) const { return values[static_cast<size_t>(n) * num_subcarriers + m]; }
};

}  // namespace fbmc
