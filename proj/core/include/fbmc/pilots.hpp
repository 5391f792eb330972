#pragma once

#include <array>
#include <optional>
#include <vector>

#include "fbmc/ambiguity.hpp"
#include "fbmc/grid.hpp"
#include "fbmc/modem.hpp"
#include "fbmc/types.hpp"

namespace fbmc {

/// Aggregate intrinsic interference at one grid position.
struct NeighborhoodInterference {
    double i_value = 0.0;
    std::vector<std::pair<int, int>> excluded_positions;
};

/// Pre-defined clean reference x + yj and its per-component power.
struct CleanPilotTarget {
    double x = 0.0;
    double y = 0.0;
    double e2 = 0.0;  // E(x^2) (and E(y^2) where applicable)
};

enum class PilotScheme { AUP, CPP, DDP2, DDP4 };

/// Transmitted PAM pilot amplitudes plus the receiver-side combining weights.
struct PilotSolution {
    std::vector<double> pilot_values;
    std::vector<cplx> combining_weights;
    PilotScheme scheme_id = PilotScheme::AUP;
};

/// Sum of beta * a over the table window around `position`, skipping the
/// center and `excluded`. Throws std::invalid_argument when the position sits
/// closer than K symbols to a frame edge.
NeighborhoodInterference compute_interference(
    const OqamGrid& grid, const AmbiguityTable& table,
    std::pair<int, int> position,
    const std::vector<std::pair<int, int>>& excluded);

/// General interference-neutralization solve for a pilot pair: find real
/// (p1, p2) such that r_1 + alpha r_2 = x + yj in the flat noiseless model
///   r_1 = p1 + j(i1 + beta p2),  r_2 = p2 + j(i2 - beta p1).
/// Throws std::domain_error when the 2x2 real system is singular.
std::pair<double, double> solve_neutralization(cplx alpha,
                                               const CleanPilotTarget& target,
                                               double i1, double i2,
                                               double beta);

/// Auxiliary-pilot scheme: prime pilot carries x, the (m, n+1) auxiliary
/// cancels the interference on the prime (alpha = 0 special case).
PilotSolution aup_pilots(double target_x, const OqamGrid& grid,
                         const AmbiguityTable& table, std::pair<int, int> prime_pos);

/// Composite pilot pair: three slots (n-1, n, n+1); the outer slots cancel
/// the data interference on the center prime and additionally superimpose
/// the data symbol a_star at amplitude a_star/sqrt(2) each, phased so the two
/// superimposed halves cancel at the prime. Returns {c_{n-1}, prime, c_{n+1}}.
PilotSolution cpp_pilots(double a_star, double prime_x, const OqamGrid& grid,
                         const AmbiguityTable& table, std::pair<int, int> center_pos);

/// Dual dependent pilots with alpha in {+j, -j}; the branch with the smaller
/// transmit power for this realization is selected. Throws std::domain_error
/// when |beta| == 1.
PilotSolution ddp_pair(const CleanPilotTarget& target, double i1, double i2,
                       double beta);

/// Group of four dependent pilots at consecutive slots; the receiver forms
/// c1 = r0 + a1*r1 and c2 = r2 + a2*r3. `couplings[i][j]` is the response at
/// slot i to a unit pilot at slot j (model: Lambda from the table; exact:
/// measured through the filter bank); `leakage[i]` is the external data
/// contribution at slot i. Solves the 4x4 real system Re/Im{c1,c2} = targets.
PilotSolution ddp_group4(const std::array<CleanPilotTarget, 2>& targets,
                         const std::array<cplx, 4>& leakage,
                         const std::array<std::array<cplx, 4>, 4>& couplings,
                         cplx alpha1, cplx alpha2);

/// Model-level couplings for 4 consecutive same-subcarrier slots, from the
/// ambiguity table.
std::array<std::array<cplx, 4>, 4> group4_couplings(const AmbiguityTable& table);

/// Weighted sums r_{2i} + w_{2i+1} r_{2i+1} per pair of entries; weights are
/// applied elementwise first (weights[2i] multiplies received[2i]).
std::vector<cplx> combine_received(const std::vector<cplx>& received,
                                   const std::vector<cplx>& weights);

/// Closed-form expected pilot power per Eq.-level analysis.
/// AUP:  e2 + rho2*S1 / beta^2,  S1 = sum of beta^2 over the window minus
///       the partner slot.  DDP2: (e2_total + 2*rho2*S1) / (1+|beta|)^2.
double predicted_power(PilotScheme scheme, double rho2, double target_power_total,
                       const AmbiguityTable& table);

/// Clean-pilot SNR: AUP e2/sigma2; DDP2 e2_total / (2*sigma2*(1+|beta|)).
double predicted_snr(PilotScheme scheme, double target_power_total, double sigma2,
                     const AmbiguityTable& table);

// ---------------------------------------------------------------------------
// Exact neutralization against the real filter bank.
// ---------------------------------------------------------------------------

/// One pilot group inside a frame: `slots` are (m, n) positions on one
/// subcarrier, consecutive in n. AUP groups fix primes at the interior slots;
/// DDP groups are fully dependent.
struct PilotGroup {
    PilotScheme scheme = PilotScheme::DDP2;
    std::vector<std::pair<int, int>> slots;
    std::vector<CleanPilotTarget> targets;       // one per clean pilot output
    std::vector<std::vector<cplx>> combining;    // per output: weight per slot
    std::vector<double> solved_values;           // filled by solve_pilots_exact
};

/// AUP pair: prime at slots[0], auxiliary at slots[1]; output = r_prime.
PilotGroup make_aup_pair_group(int m, int n, double target_x);
/// AUP group of four: primes at the two interior slots, auxiliaries outside.
PilotGroup make_aup4_group(int m, int n0, double x1, double x2);
/// DDP pair with minimum-power combining weight for the given beta sign.
PilotGroup make_ddp_pair_group(int m, int n, const CleanPilotTarget& target, double beta);
/// DDP group of four: two pairwise combinings.
PilotGroup make_ddp4_group(int m, int n0, const CleanPilotTarget& t1,
                           const CleanPilotTarget& t2, double beta);

/// Solves every group so that the combined clean pilots, measured through
/// modulate/demodulate on a distortion-free link, hit their targets to
/// machine precision. Data interference, near-PR real leakage and cross-group
/// coupling are all cancelled; a couple of refinement sweeps absorb the
/// (tiny) couplings between groups. Pilot values are written into `grid`.
void solve_pilots_exact(OqamGrid& grid, std::vector<PilotGroup>& groups,
                        const FbmcModem& modem, int refinement_sweeps = 2);

/// Receiver side of a group: combined clean pilot(s) from the demodulated
/// grid.
std::vector<cplx> combine_group(const ComplexGrid& received, const PilotGroup& group);

}  // namespace fbmc
