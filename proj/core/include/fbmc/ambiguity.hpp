#pragma once

#include <vector>

#include "fbmc/grid.hpp"
#include "fbmc/prototype_filter.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

/// Dense window of ambiguity values around the origin.
///
/// raw(dm, dn) is the bare filter cross-ambiguity
///   A(dm, dn) = sum_k g[k - dn*M/2] g[k] e^{-j(2*pi/M) dm (k - D)},
/// the quantity the classic PHYDYAS interference table lists. The full
/// ambiguity with phase factors, referenced at an even symbol index, is
///   Lambda(dm, dn) = j^(dm+dn) * A(dm, dn);
/// a reference at odd n flips the sign of odd-dm entries. Off the origin
/// Lambda is imaginary up to the near-PR residual, and beta = Im(Lambda).
class AmbiguityTable {
public:
    AmbiguityTable(const PrototypeFilter& filter, int dm_max, int dn_max,
                   double negligible_floor = 1e-3);

    int dm_max() const { return dm_max_; }
    int dn_max() const { return dn_max_; }
    double negligible_floor() const { return floor_; }

    cplx raw(int dm, int dn) const { return raw_[idx(dm, dn)]; }
    cplx lambda(int dm, int dn, int ref_n = 0) const;
    /// Real interference coefficient beta_{(m+dm, n+dn) -> (m, n)}.
    double beta(int dm, int dn, int ref_n = 0) const;
    bool negligible(int dm, int dn) const { return std::abs(raw_[idx(dm, dn)]) < floor_; }

private:
    size_t idx(int dm, int dn) const;
    int dm_max_, dn_max_;
    double floor_;
    std::vector<cplx> raw_;
};

/// Single ambiguity value Lambda_{(m+dm, n+dn), (m, n)} with reference symbol
/// index ref_n. Shift-invariant apart from the deterministic parity factor
/// (-1)^(ref_n * dm).
cplx ambiguity(const PrototypeFilter& filter, const PhaseConvention& convention,
               int dm, int dn, int ref_n = 0);

/// Dense table over the window [-dm_max, dm_max] x [-dn_max, dn_max].
AmbiguityTable interference_table(const PrototypeFilter& filter,
                                  const PhaseConvention& convention,
                                  int dm_max, int dn_max,
                                  double negligible_floor = 1e-3);

}  // namespace fbmc
