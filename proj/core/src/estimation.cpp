#include "fbmc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fbmc {

namespace {

constexpr std::uint8_t kErasure = 0xff;
constexpr double kErasureFloor = 1e-12;

}  // namespace

cplx ls_estimate(cplx clean_pilot, const CleanPilotTarget& target) {
    const cplx x(target.x, target.y);
    if (std::abs(x) < kErasureFloor)
        throw std::invalid_argument("ls_estimate: zero pilot target");
    return clean_pilot / x;
}

ChannelEstimateGrid interpolate(const std::vector<PilotEstimate>& pilots,
                                int num_subcarriers, int num_symbols) {
    if (pilots.empty())
        throw std::invalid_argument("interpolate: no pilot estimates");

    // Group by subcarrier, sort each track in time.
    std::map<int, std::vector<std::pair<double, cplx>>> tracks;
    for (const auto& p : pilots) {
        if (p.subcarrier < 0 || p.subcarrier >= num_subcarriers)
            throw std::invalid_argument("interpolate: pilot subcarrier out of range");
        tracks[p.subcarrier].emplace_back(p.time, p.value);
    }
    for (auto& [m, tr] : tracks)
        std::sort(tr.begin(), tr.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

    // Time interpolation per pilot subcarrier (linear, edge hold).
    auto interp_track = [](const std::vector<std::pair<double, cplx>>& tr, double t) {
        if (t <= tr.front().first) return tr.front().second;
        if (t >= tr.back().first) return tr.back().second;
        size_t hi = 1;
        while (tr[hi].first < t) ++hi;
        const auto& [t0, v0] = tr[hi - 1];
        const auto& [t1, v1] = tr[hi];
        const double w = (t - t0) / (t1 - t0);
        return v0 + w * (v1 - v0);
    };

    std::vector<int> rows;
    rows.reserve(tracks.size());
    for (const auto& [m, tr] : tracks) rows.push_back(m);

    ChannelEstimateGrid out;
    out.num_subcarriers = num_subcarriers;
    out.num_symbols = num_symbols;
    out.values.resize(static_cast<size_t>(num_subcarriers) * num_symbols);

    std::vector<cplx> col(rows.size());
    for (int n = 0; n < num_symbols; ++n) {
        for (size_t i = 0; i < rows.size(); ++i)
            col[i] = interp_track(tracks[rows[i]], static_cast<double>(n));
        for (int m = 0; m < num_subcarriers; ++m) {
            cplx v;
            if (m <= rows.front()) {
                v = col.front();
            } else if (m >= rows.back()) {
                v = col.back();
            } else {
                size_t hi = 1;
                while (rows[hi] < m) ++hi;
                const double w = static_cast<double>(m - rows[hi - 1]) /
                                 (rows[hi] - rows[hi - 1]);
                v = col[hi - 1] + w * (col[hi] - col[hi - 1]);
            }
            out.at(m, n) = v;
        }
    }
    return out;
}

std::vector<std::uint8_t> equalize_detect_fbmc(const ComplexGrid& received,
                                               const ChannelEstimateGrid& estimates,
                                               const std::vector<CellKind>& mask,
                                               int guard_symbols) {
    const int M = received.num_subcarriers;
    const int N = received.num_symbols;
    if (mask.size() != static_cast<size_t>(M) * N)
        throw std::invalid_argument("equalize_detect_fbmc: mask size mismatch");
    std::vector<std::uint8_t> bits;
    for (int n = guard_symbols; n < N - guard_symbols; ++n)
        for (int m = 0; m < M; ++m) {
            if (mask[static_cast<size_t>(n) * M + m] != CellKind::data) continue;
            const cplx h = estimates.at(m, n);
            if (std::abs(h) < kErasureFloor) {
                bits.push_back(kErasure);
                continue;
            }
            const double a = (received.at(m, n) / h).real();
            bits.push_back(a >= 0.0 ? 1 : 0);
        }
    return bits;
}

std::vector<std::uint8_t> equalize_detect_ofdm(const QamGrid& received,
                                               const ChannelEstimateGrid& estimates,
                                               const std::vector<CellKind>& mask) {
    const int M = received.num_subcarriers;
    const int N = received.num_symbols;
    if (mask.size() != static_cast<size_t>(M) * N)
        throw std::invalid_argument("equalize_detect_ofdm: mask size mismatch");
    std::vector<std::uint8_t> bits;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m) {
            if (mask[static_cast<size_t>(n) * M + m] != CellKind::data) continue;
            const cplx h = estimates.at(m, n);
            if (std::abs(h) < kErasureFloor) {
                bits.push_back(kErasure);
                bits.push_back(kErasure);
                continue;
            }
            const cplx x = received.at(m, n) / h;
            bits.push_back(x.real() >= 0.0 ? 1 : 0);
            bits.push_back(x.imag() >= 0.0 ? 1 : 0);
        }
    return bits;
}

MetricRecord compute_metrics(const std::vector<std::pair<cplx, cplx>>& est_vs_oracle,
                             const std::vector<std::uint8_t>& tx_bits,
                             const std::vector<std::uint8_t>& rx_bits) {
    if (tx_bits.size() != rx_bits.size())
        throw std::invalid_argument("compute_metrics: bit stream length mismatch");
    MetricRecord rec;
    double err = 0.0, pow = 0.0;
    for (const auto& [est, oracle] : est_vs_oracle) {
        err += std::norm(est - oracle);
        pow += std::norm(oracle);
    }
    rec.mse = pow > 0.0 ? err / pow : 0.0;
    size_t wrong = 0;
    for (size_t i = 0; i < tx_bits.size(); ++i)
        if (tx_bits[i] != rx_bits[i]) ++wrong;
    rec.ber = tx_bits.empty() ? 0.0 : static_cast<double>(wrong) / tx_bits.size();
    return rec;
}

void MetricAccumulator::merge(const MetricAccumulator& o) {
    sq_err_sum += o.sq_err_sum;
    h_pow_sum += o.h_pow_sum;
    est_count += o.est_count;
    bit_errors += o.bit_errors;
    bit_count += o.bit_count;
    pilot_power_sum += o.pilot_power_sum;
    pilot_slot_groups += o.pilot_slot_groups;
}

double MetricAccumulator::mse() const {
    return h_pow_sum > 0.0 ? sq_err_sum / h_pow_sum : 0.0;
}

double MetricAccumulator::ber() const {
    return bit_count > 0 ? static_cast<double>(bit_errors) / bit_count : 0.0;
}

}  // namespace fbmc
