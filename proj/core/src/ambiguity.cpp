#include "fbmc/ambiguity.hpp"

#include <cmath>
#include <stdexcept>

namespace fbmc {

namespace {

inline cplx quarter_turn(int q) {
    static constexpr double re[4] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double im[4] = {0.0, 1.0, 0.0, -1.0};
    const int i = (q % 4 + 4) % 4;
    return {re[i], im[i]};
}

cplx raw_ambiguity(const PrototypeFilter& filter, int dm, int dn) {
    const int M = filter.num_subcarriers;
    const int L = filter.length();
    const double D = filter.center();
    const int shift = dn * (M / 2);
    const int k_lo = std::max(0, shift);
    const int k_hi = std::min(L, L + shift);
    cplx acc{};
    for (int k = k_lo; k < k_hi; ++k) {
        const double ang = -2.0 * pi * dm * (k - D) / M;
        acc += filter.taps[k - shift] * filter.taps[k] * cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

}  // namespace

AmbiguityTable::AmbiguityTable(const PrototypeFilter& filter, int dm_max, int dn_max,
                               double negligible_floor)
    : dm_max_(dm_max), dn_max_(dn_max), floor_(negligible_floor) {
    if (dm_max < 0 || dn_max < 0)
        throw std::invalid_argument("AmbiguityTable: window half-widths must be >= 0");
    raw_.resize(static_cast<size_t>(2 * dm_max + 1) * (2 * dn_max + 1));
    for (int dn = -dn_max; dn <= dn_max; ++dn)
        for (int dm = -dm_max; dm <= dm_max; ++dm)
            raw_[idx(dm, dn)] = raw_ambiguity(filter, dm, dn);
}

size_t AmbiguityTable::idx(int dm, int dn) const {
    if (dm < -dm_max_ || dm > dm_max_ || dn < -dn_max_ || dn > dn_max_)
        throw std::out_of_range("AmbiguityTable: shift outside the tabulated window");
    return static_cast<size_t>(dn + dn_max_) * (2 * dm_max_ + 1) + (dm + dm_max_);
}

cplx AmbiguityTable::lambda(int dm, int dn, int ref_n) const {
    cplx v = quarter_turn(dm + dn) * raw_[idx(dm, dn)];
    if ((ref_n * dm) & 1) v = -v;
    return v;
}

double AmbiguityTable::beta(int dm, int dn, int ref_n) const {
    return lambda(dm, dn, ref_n).imag();
}

cplx ambiguity(const PrototypeFilter& filter, const PhaseConvention& convention,
               int dm, int dn, int ref_n) {
    // The quarter-turn factor of the convention is j^(m+n); the pairwise
    // product j_{m+dm,n+dn} * conj(j_{m,n}) collapses to j^(dm+dn) times the
    // ref-parity sign, independent of m.
    (void)convention;
    cplx v = quarter_turn(dm + dn) * raw_ambiguity(filter, dm, dn);
    if ((ref_n * dm) & 1) v = -v;
    return v;
}

AmbiguityTable interference_table(const PrototypeFilter& filter,
                                  const PhaseConvention& convention,
                                  int dm_max, int dn_max, double negligible_floor) {
    (void)convention;
    return AmbiguityTable(filter, dm_max, dn_max, negligible_floor);
}

}  // namespace fbmc
