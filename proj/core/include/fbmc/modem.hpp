#pragma once

#include <span>
#include <vector>

#include "fbmc/grid.hpp"
#include "fbmc/prototype_filter.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

/// FBMC/OQAM synthesis and analysis filter bank.
///
/// Baseband convention: subcarrier m rides on e^{-j(2*pi/M) m (k - D)} with
/// D the filter midpoint, and every symbol carries the quarter-turn factor
/// j^(m+n). Symbols are spaced by M/2 samples. This is the orientation under
/// which the cross-ambiguity table lands on the classic PHYDYAS sign pattern.
class FbmcModem {
public:
    FbmcModem(PrototypeFilter filter, PhaseConvention convention = {});

    const PrototypeFilter& filter() const { return filter_; }
    const PhaseConvention& convention() const { return conv_; }

    /// Samples produced for a grid of N symbols: (N-1)*M/2 + K*M.
    size_t stream_length(int num_symbols) const;

    /// Fast polyphase/FFT synthesis. Falls back to the direct path when M is
    /// not a power of two.
    std::vector<cplx> modulate(const OqamGrid& grid) const;

    /// Direct-sum reference synthesis (the Eq.-level oracle).
    std::vector<cplx> modulate_ref(const OqamGrid& grid) const;

    /// Fast analysis over all (m, n). Throws std::length_error when the
    /// stream is shorter than stream_length(num_symbols).
    ComplexGrid demodulate(std::span<const cplx> samples, int num_symbols) const;

    /// Direct-sum reference analysis.
    ComplexGrid demodulate_ref(std::span<const cplx> samples, int num_symbols) const;

    /// Single analysis-filter output r_{m,n}.
    cplx demodulate_at(std::span<const cplx> samples, int m, int n) const;

    /// Synthesis filter g_{m,n}[k] for k in [n*M/2, n*M/2 + K*M).
    std::vector<cplx> synthesis_filter(int m, int n) const;

private:
    PrototypeFilter filter_;
    PhaseConvention conv_;
    std::vector<cplx> twiddle_base_;  // e^{+j(2*pi/M) m D}, m = 0..M-1
    // g[u] * e^{-j(2*pi/M) m (u - D)} per subcarrier, the n-independent part of
    // the synthesis filter (hot path of demodulate_at).
    std::vector<cplx> base_;
};

}  // namespace fbmc
