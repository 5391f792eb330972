#include "fbmc/pilots.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace fbmc {

namespace {

// Dense real linear solve with partial pivoting (tiny systems: 2x2 / 4x4).
std::vector<double> solve_real(std::vector<std::vector<double>> a,
                               std::vector<double> b,
                               const char* what) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12)
            throw std::domain_error(what);
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

double sum_beta2_minus_partner(const AmbiguityTable& table) {
    double s = 0.0;
    for (int dn = -table.dn_max(); dn <= table.dn_max(); ++dn)
        for (int dm = -table.dm_max(); dm <= table.dm_max(); ++dm) {
            if (dm == 0 && (dn == 0 || dn == 1)) continue;  // center + partner
            const double b = table.beta(dm, dn, 0);
            s += b * b;
        }
    return s;
}

}  // namespace

NeighborhoodInterference compute_interference(
    const OqamGrid& grid, const AmbiguityTable& table,
    std::pair<int, int> position,
    const std::vector<std::pair<int, int>>& excluded) {
    const auto [m, n] = position;
    if (n < table.dn_max() || n + table.dn_max() >= grid.num_symbols)
        throw std::invalid_argument(
            "compute_interference: position too close to the frame edge");
    auto is_excluded = [&](int mm, int nn) {
        for (const auto& e : excluded)
            if (e.first == mm && e.second == nn) return true;
        return false;
    };
    NeighborhoodInterference out;
    out.excluded_positions = excluded;
    for (int dn = -table.dn_max(); dn <= table.dn_max(); ++dn)
        for (int dm = -table.dm_max(); dm <= table.dm_max(); ++dm) {
            if (dm == 0 && dn == 0) continue;
            const int mm = m + dm;
            const int nn = n + dn;
            if (mm < 0 || mm >= grid.num_subcarriers) continue;
            if (is_excluded(mm, nn)) continue;
            if (table.negligible(dm, dn)) continue;
            out.i_value += table.beta(dm, dn, n) * grid.at(mm, nn);
        }
    return out;
}

std::pair<double, double> solve_neutralization(cplx alpha,
                                               const CleanPilotTarget& target,
                                               double i1, double i2,
                                               double beta) {
    // c = r1 + alpha r2 with r1 = p1 + j(i1 + beta p2), r2 = p2 + j(i2 - beta p1):
    //   Re(c) = (1 + ai*beta) p1 + ar p2 - ai i2
    //   Im(c) = -ar beta p1 + (beta + ai) p2 + i1 + ar i2
    const double ar = alpha.real();
    const double ai = alpha.imag();
    std::vector<std::vector<double>> a = {{1.0 + ai * beta, ar},
                                          {-ar * beta, beta + ai}};
    std::vector<double> b = {target.x + ai * i2, target.y - i1 - ar * i2};
    auto p = solve_real(std::move(a), std::move(b),
                        "solve_neutralization: singular 2x2 system");
    return {p[0], p[1]};
}

PilotSolution aup_pilots(double target_x, const OqamGrid& grid,
                         const AmbiguityTable& table, std::pair<int, int> prime_pos) {
    const auto [m, n] = prime_pos;
    const double beta = table.beta(0, 1, n);
    const double i1 =
        compute_interference(grid, table, prime_pos, {{m, n + 1}}).i_value;
    auto [p1, p2] = solve_neutralization(cplx{0.0, 0.0},
                                         {target_x, 0.0, target_x * target_x},
                                         i1, 0.0, beta);
    PilotSolution sol;
    sol.pilot_values = {p1, p2};
    sol.combining_weights = {cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    sol.scheme_id = PilotScheme::AUP;
    return sol;
}

PilotSolution cpp_pilots(double a_star, double prime_x, const OqamGrid& grid,
                         const AmbiguityTable& table, std::pair<int, int> center_pos) {
    const auto [m, n] = center_pos;
    const double beta_p = table.beta(0, 1, n);   // coupling from slot n+1
    const double beta_m = table.beta(0, -1, n);  // coupling from slot n-1 (= -beta_p)
    const double ic = compute_interference(grid, table, center_pos,
                                           {{m, n - 1}, {m, n + 1}})
                          .i_value;
    // Superimposed halves a*/sqrt(2) are phased so beta_m*c_a- + beta_p*c_a+ = 0;
    // the antisymmetric cancellation component removes the data interference ic.
    const double half = a_star / std::sqrt(2.0);
    const double c_plus_a = -(beta_m / beta_p) * half;
    const double cancel = -ic / (beta_p * (1.0 - beta_m / beta_p));
    PilotSolution sol;
    sol.pilot_values = {half - cancel, prime_x, c_plus_a + cancel};
    sol.combining_weights = {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    sol.scheme_id = PilotScheme::CPP;
    return sol;
}

PilotSolution ddp_pair(const CleanPilotTarget& target, double i1, double i2,
                       double beta) {
    if (std::abs(std::abs(beta) - 1.0) < 1e-12)
        throw std::domain_error("ddp_pair: |beta| == 1 makes one branch singular");
    PilotSolution best;
    double best_power = -1.0;
    for (const double ai : {1.0, -1.0}) {
        const cplx alpha{0.0, ai};
        auto [p1, p2] = solve_neutralization(alpha, target, i1, i2, beta);
        const double power = p1 * p1 + p2 * p2;
        if (best_power < 0.0 || power < best_power) {
            best.pilot_values = {p1, p2};
            best.combining_weights = {cplx{1.0, 0.0}, alpha};
            best_power = power;
        }
    }
    best.scheme_id = PilotScheme::DDP2;
    return best;
}

PilotSolution ddp_group4(const std::array<CleanPilotTarget, 2>& targets,
                         const std::array<cplx, 4>& leakage,
                         const std::array<std::array<cplx, 4>, 4>& couplings,
                         cplx alpha1, cplx alpha2) {
    // c1 = (row0 + alpha1 row1) . p + (L0 + alpha1 L1), same shape for c2.
    std::array<cplx, 4> row_c1{}, row_c2{};
    for (int j = 0; j < 4; ++j) {
        row_c1[j] = couplings[0][j] + alpha1 * couplings[1][j];
        row_c2[j] = couplings[2][j] + alpha2 * couplings[3][j];
    }
    const cplx off1 = leakage[0] + alpha1 * leakage[1];
    const cplx off2 = leakage[2] + alpha2 * leakage[3];

    std::vector<std::vector<double>> a(4, std::vector<double>(4));
    for (int j = 0; j < 4; ++j) {
        a[0][j] = row_c1[j].real();
        a[1][j] = row_c1[j].imag();
        a[2][j] = row_c2[j].real();
        a[3][j] = row_c2[j].imag();
    }
    std::vector<double> b = {targets[0].x - off1.real(), targets[0].y - off1.imag(),
                             targets[1].x - off2.real(), targets[1].y - off2.imag()};
    char what[128];
    std::snprintf(what, sizeof(what),
                  "ddp_group4: singular system for alpha1=(%g,%g) alpha2=(%g,%g)",
                  alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag());
    auto p = solve_real(std::move(a), std::move(b), what);

    PilotSolution sol;
    sol.pilot_values.assign(p.begin(), p.end());
    sol.combining_weights = {cplx{1.0, 0.0}, alpha1, cplx{1.0, 0.0}, alpha2};
    sol.scheme_id = PilotScheme::DDP4;
    return sol;
}

std::array<std::array<cplx, 4>, 4> group4_couplings(const AmbiguityTable& table) {
    std::array<std::array<cplx, 4>, 4> c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            c[i][j] = table.lambda(0, j - i, 0);
    return c;
}

std::vector<cplx> combine_received(const std::vector<cplx>& received,
                                   const std::vector<cplx>& weights) {
    if (received.size() != weights.size() || received.size() % 2 != 0)
        throw std::invalid_argument("combine_received: size mismatch or odd length");
    std::vector<cplx> out(received.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = weights[2 * i] * received[2 * i] +
                 weights[2 * i + 1] * received[2 * i + 1];
    return out;
}

double predicted_power(PilotScheme scheme, double rho2, double target_power_total,
                       const AmbiguityTable& table) {
    const double beta = std::abs(table.beta(0, 1, 0));
    const double s1 = sum_beta2_minus_partner(table);
    switch (scheme) {
        case PilotScheme::AUP:
            return target_power_total + rho2 * s1 / (beta * beta);
        case PilotScheme::DDP2:
            return (target_power_total + 2.0 * rho2 * s1) /
                   ((1.0 + beta) * (1.0 + beta));
        default:
            throw std::invalid_argument("predicted_power: closed form only for AUP/DDP2");
    }
}

double predicted_snr(PilotScheme scheme, double target_power_total, double sigma2,
                     const AmbiguityTable& table) {
    const double beta = std::abs(table.beta(0, 1, 0));
    switch (scheme) {
        case PilotScheme::AUP:
            return target_power_total / sigma2;
        case PilotScheme::DDP2:
            // Adjacent analysis slots have correlated noise; the combined noise
            // variance is 2*(1+beta)*sigma2, not 2*sigma2.
            return target_power_total / (2.0 * sigma2 * (1.0 + beta));
        default:
            throw std::invalid_argument("predicted_snr: closed form only for AUP/DDP2");
    }
}

// ---------------------------------------------------------------------------
// Exact neutralization against the real filter bank.
// ---------------------------------------------------------------------------

PilotGroup make_aup_pair_group(int m, int n, double target_x) {
    PilotGroup g;
    g.scheme = PilotScheme::AUP;
    g.slots = {{m, n}, {m, n + 1}};
    g.targets = {{target_x, 0.0, target_x * target_x}};
    g.combining = {{cplx{1.0, 0.0}, cplx{0.0, 0.0}}};
    return g;
}

PilotGroup make_aup4_group(int m, int n0, double x1, double x2) {
    PilotGroup g;
    g.scheme = PilotScheme::AUP;
    g.slots = {{m, n0}, {m, n0 + 1}, {m, n0 + 2}, {m, n0 + 3}};
    g.targets = {{x1, 0.0, x1 * x1}, {x2, 0.0, x2 * x2}};
    g.combining = {{cplx{}, cplx{1.0, 0.0}, cplx{}, cplx{}},
                   {cplx{}, cplx{}, cplx{1.0, 0.0}, cplx{}}};
    return g;
}

PilotGroup make_ddp_pair_group(int m, int n, const CleanPilotTarget& target,
                               double beta) {
    PilotGroup g;
    g.scheme = PilotScheme::DDP2;
    g.slots = {{m, n}, {m, n + 1}};
    g.targets = {target};
    // Minimum-power branch: the (1+|beta|) denominators, i.e. alpha = sign(beta)*j.
    const cplx alpha{0.0, beta >= 0.0 ? 1.0 : -1.0};
    g.combining = {{cplx{1.0, 0.0}, alpha}};
    return g;
}

PilotGroup make_ddp4_group(int m, int n0, const CleanPilotTarget& t1,
                           const CleanPilotTarget& t2, double beta) {
    PilotGroup g;
    g.scheme = PilotScheme::DDP4;
    g.slots = {{m, n0}, {m, n0 + 1}, {m, n0 + 2}, {m, n0 + 3}};
    g.targets = {t1, t2};
    const cplx alpha{0.0, beta >= 0.0 ? 1.0 : -1.0};
    g.combining = {{cplx{1.0, 0.0}, alpha, cplx{}, cplx{}},
                   {cplx{}, cplx{}, cplx{1.0, 0.0}, alpha}};
    return g;
}

namespace {

// Exact within-group coupling through the filter bank: response of the
// analysis filter at slot `obs` to a unit pilot at slot `src`.
cplx exact_coupling(const FbmcModem& modem, std::pair<int, int> src,
                    std::pair<int, int> obs) {
    const int M = modem.filter().num_subcarriers;
    const int L = modem.filter().length();
    const auto gs = modem.synthesis_filter(src.first, src.second);
    const auto go = modem.synthesis_filter(obs.first, obs.second);
    const long s0 = static_cast<long>(src.second) * (M / 2);
    const long o0 = static_cast<long>(obs.second) * (M / 2);
    const long lo = std::max(s0, o0);
    const long hi = std::min(s0 + L, o0 + L);
    cplx acc{};
    for (long k = lo; k < hi; ++k) acc += gs[k - s0] * std::conj(go[k - o0]);
    return acc;
}

}  // namespace

void solve_pilots_exact(OqamGrid& grid, std::vector<PilotGroup>& groups,
                        const FbmcModem& modem, int refinement_sweeps) {
    // Per-group real system: A * p = combined targets, with A built from the
    // exact within-group couplings. Starting from zeroed pilots, each sweep
    // measures the combined residual through modulate/demodulate (capturing
    // data leakage, near-PR real residuals and cross-group coupling) and
    // applies the correction; the cross-group part shrinks geometrically.
    for (auto& g : groups) {
        const size_t s = g.slots.size();
        if (g.combining.size() * 2 != s)
            throw std::invalid_argument("solve_pilots_exact: group is not square");
        g.solved_values.assign(s, 0.0);
        for (const auto& [m, n] : g.slots) {
            grid.at(m, n) = 0.0;
            grid.kind(m, n) = CellKind::pilot;
        }
    }

    // Same-subcarrier couplings depend only on the slot offset (the carrier
    // phases cancel in the inner product), so cache them by dn.
    std::map<int, cplx> by_dn;
    auto coupling = [&](std::pair<int, int> src, std::pair<int, int> obs) {
        if (src.first != obs.first) return exact_coupling(modem, src, obs);
        const int dn = src.second - obs.second;
        auto it = by_dn.find(dn);
        if (it != by_dn.end()) return it->second;
        const int obs_n = std::max(0, -dn);
        const cplx v = exact_coupling(modem, {0, obs_n + dn}, {0, obs_n});
        by_dn.emplace(dn, v);
        return v;
    };

    // Factor matrices (A = combining o couplings), one per group.
    std::vector<std::vector<std::vector<double>>> mats;
    mats.reserve(groups.size());
    for (const auto& g : groups) {
        const size_t s = g.slots.size();
        std::vector<std::vector<cplx>> k(s, std::vector<cplx>(s));
        for (size_t i = 0; i < s; ++i)
            for (size_t j = 0; j < s; ++j)
                k[i][j] = coupling(g.slots[j], g.slots[i]);
        std::vector<std::vector<double>> a(s, std::vector<double>(s));
        for (size_t o = 0; o < g.combining.size(); ++o) {
            for (size_t j = 0; j < s; ++j) {
                cplx row{};
                for (size_t i = 0; i < s; ++i) row += g.combining[o][i] * k[i][j];
                a[2 * o][j] = row.real();
                a[2 * o + 1][j] = row.imag();
            }
        }
        mats.push_back(std::move(a));
    }

    for (int sweep = 0; sweep <= refinement_sweeps; ++sweep) {
        const auto stream = modem.modulate(grid);
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            auto& g = groups[gi];
            const size_t s = g.slots.size();
            std::vector<cplx> r(s);
            for (size_t i = 0; i < s; ++i)
                r[i] = modem.demodulate_at(stream, g.slots[i].first, g.slots[i].second);
            std::vector<double> rhs(s);
            for (size_t o = 0; o < g.combining.size(); ++o) {
                cplx c{};
                for (size_t i = 0; i < s; ++i) c += g.combining[o][i] * r[i];
                rhs[2 * o] = g.targets[o].x - c.real();
                rhs[2 * o + 1] = g.targets[o].y - c.imag();
            }
            const auto delta = solve_real(mats[gi], rhs,
                                          "solve_pilots_exact: singular group system");
            for (size_t i = 0; i < s; ++i) {
                g.solved_values[i] += delta[i];
                grid.at(g.slots[i].first, g.slots[i].second) = g.solved_values[i];
            }
        }
    }
}

std::vector<cplx> combine_group(const ComplexGrid& received, const PilotGroup& group) {
    std::vector<cplx> out(group.combining.size());
    for (size_t o = 0; o < group.combining.size(); ++o) {
        cplx c{};
        for (size_t i = 0; i < group.slots.size(); ++i)
            c += group.combining[o][i] *
                 received.at(group.slots[i].first, group.slots[i].second);
        out[o] = c;
    }
    return out;
}

}  // namespace fbmc
