// Acceptance gate: one criterion per invocation (argv[1] in 1..10), one
// PASS/FAIL line per criterion, exit 0 only on PASS. Tolerances are pinned
// here and never loosened to fit measurements.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "fbmc/ambiguity.hpp"
#include "fbmc/channel.hpp"
#include "fbmc/estimation.hpp"
#include "fbmc/harness.hpp"
#include "fbmc/modem.hpp"
#include "fbmc/ofdm.hpp"
#include "fbmc/pilots.hpp"
#include "fbmc/prototype_filter.hpp"

using fbmc::cplx;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

const fbmc::PrototypeFilter& filter64() {
    static const auto f = fbmc::design_prototype_filter(64, 4);
    return f;
}

const fbmc::FbmcModem& modem64() {
    static const fbmc::FbmcModem m(filter64());
    return m;
}

double db(double x) { return 10.0 * std::log10(x); }

// ---------------------------------------------------------------------------
// 1. 3x7 ambiguity window vs the reference table: magnitudes within 2e-3 and
//    the real/imaginary/sign pattern exact.
// ---------------------------------------------------------------------------

Outcome criterion1() {
    constexpr double ref_re[3][7] = {
        {0, -0.125, 0, 0.2393, 0, -0.125, 0},
        {-0.067, 0, 0.564, 1.0, 0.564, 0, -0.067},
        {0, -0.125, 0, 0.239, 0, -0.125, 0},
    };
    constexpr double ref_im[3][7] = {
        {0.043, 0, -0.206, 0, 0.206, 0, -0.043},
        {0, 0, 0, 0, 0, 0, 0},
        {-0.043, 0, 0.206, 0, -0.206, 0, 0.043},
    };
    const fbmc::AmbiguityTable table(filter64(), 1, 3);
    double worst = 0.0;
    bool pattern_ok = true;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -3; dn <= 3; ++dn) {
            const cplx a = table.raw(dm, dn);
            const double ere = ref_re[dm + 1][dn + 3];
            const double eim = ref_im[dm + 1][dn + 3];
            worst = std::max(worst, std::max(std::abs(a.real() - ere),
                                             std::abs(a.imag() - eim)));
            // axis and sign: a significant component must sit on the expected
            // axis with the expected sign, and the other axis must be small.
            auto sign_ok = [](double got, double want) {
                if (std::abs(want) < 1e-9) return std::abs(got) < 2e-3;
                return got * want > 0.0;
            };
            if (!sign_ok(a.real(), ere) || !sign_ok(a.imag(), eim))
                pattern_ok = false;
        }
    const bool pass = worst <= 2e-3 && pattern_ok;
    return {pass, fmt("worst |deviation| = %.2e (<= 2e-3), sign pattern %s",
                      worst, pattern_ok ? "exact" : "BROKEN")};
}

// ---------------------------------------------------------------------------
// 2. Adjacent-slot interference coefficient beta = 0.5646 +- 0.001.
// ---------------------------------------------------------------------------

Outcome criterion2() {
    const double beta =
        fbmc::ambiguity(filter64(), fbmc::PhaseConvention{}, 0, 1, 0).imag();
    const bool pass = std::abs(beta - 0.5646) <= 1e-3;
    return {pass, fmt("beta = %.6f (0.5646 +- 0.001)", beta)};
}

// ---------------------------------------------------------------------------
// 3. Monte-Carlo E(i^2) at rho^2 = 1/2 is 0.33 +- 0.01 and matches the closed
//    form rho^2 * sum(beta^2) within 1%.
// ---------------------------------------------------------------------------

Outcome criterion3() {
    const fbmc::AmbiguityTable table(filter64(), 1, 3);
    const double rho2 = 0.5;

    double closed = 0.0;
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -3; dn <= 3; ++dn) {
            if (dm == 0 && dn == 0) continue;  // the pilot slot itself
            if (dm == 0 && dn == 1) continue;  // the dependent partner slot
            const double b = table.beta(dm, dn, 8);
            closed += b * b;
        }
    closed *= rho2;

    const int trials = 50000;
    std::vector<double> sq(trials);
    fbmc::parallel_frames(0, trials, [&](std::uint64_t t) {
        fbmc::OqamGrid grid(16, 16, rho2);
        std::mt19937_64 rng(0x9000 + t);
        const double amp = std::sqrt(rho2);
        for (auto& v : grid.values) v = (rng() & 1ULL) ? amp : -amp;
        const double i =
            fbmc::compute_interference(grid, table, {8, 8}, {{8, 9}}).i_value;
        sq[t] = i * i;
    });
    double mc = 0.0;
    for (double v : sq) mc += v;
    mc /= trials;

    const bool in_band = std::abs(mc - 0.33) <= 0.01;
    const double rel = std::abs(mc - closed) / closed;
    const bool pass = in_band && rel <= 0.01;
    return {pass, fmt("E(i^2) = %.4f (0.33 +- 0.01 -> %s), closed form %.4f, "
                      "relative gap %.2f%% (<= 1%%)",
                      mc, in_band ? "in" : "OUT", closed, 100.0 * rel)};
}

// ---------------------------------------------------------------------------
// 4. Combined-noise variance of the dependent-pair combination
//    n_{m,n} + alpha n_{m,n+1} (|alpha| = 1) after analysis filtering:
//    bound 3 sigma^2 +- 2%.
// ---------------------------------------------------------------------------

Outcome criterion4() {
    const auto& modem = modem64();
    const double sigma2 = 1.0;
    const double beta =
        fbmc::ambiguity(filter64(), fbmc::PhaseConvention{}, 0, 1, 0).imag();
    const cplx alpha = beta >= 0.0 ? cplx(0, 1) : cplx(0, -1);

    const int streams = 400, N = 16;
    const size_t len = modem.stream_length(N);
    std::vector<double> per(streams);
    fbmc::parallel_frames(0, streams, [&](std::uint64_t s) {
        const std::vector<cplx> silent(len, cplx{});
        const auto noisy = fbmc::awgn(silent, sigma2, 0xA000 + s);
        const auto r = modem.demodulate(noisy, N);
        double acc = 0.0;
        size_t cnt = 0;
        for (int n = 4; n + 1 < N - 4; ++n)
            for (int m = 0; m < 64; ++m) {
                acc += std::norm(r.at(m, n) + alpha * r.at(m, n + 1));
                ++cnt;
            }
        per[s] = acc / static_cast<double>(cnt);
    });
    double var = 0.0;
    for (double v : per) var += v;
    var /= streams;

    const bool pass = std::abs(var / sigma2 - 3.0) <= 0.06;
    return {pass, fmt("Var(n1 + alpha n2) = %.4f sigma^2 (3.00 +- 0.06); "
                      "correlation model predicts %.4f sigma^2",
                      var / sigma2, 2.0 * (1.0 + std::abs(beta)))};
}

// ---------------------------------------------------------------------------
// 5. Power-boosting ratios under SNR parity: eta_AUP = 2.01 +- 0.05 and
//    eta_DDP = 1.49 +- 0.05.
// ---------------------------------------------------------------------------

Outcome criterion5() {
    auto cfg = fbmc::ExperimentConfig::awgn_block();
    cfg.snr_sweep_db = {10.0};  // eta is SNR-independent under this policy
    cfg.frames_per_point = 20000;
    cfg.seed = 515;
    const auto result = fbmc::run_power_experiment(cfg);
    const double eta_aup = result.curves[1].power_ratio;
    const double eta_ddp = result.curves[2].power_ratio;
    const bool aup_ok = std::abs(eta_aup - 2.01) <= 0.05;
    const bool ddp_ok = std::abs(eta_ddp - 1.49) <= 0.05;
    return {aup_ok && ddp_ok,
            fmt("eta_AUP = %.4f (2.01 +- 0.05 -> %s), eta_DDP = %.4f "
                "(1.49 +- 0.05 -> %s)",
                eta_aup, aup_ok ? "in" : "OUT", eta_ddp, ddp_ok ? "in" : "OUT")};
}

// ---------------------------------------------------------------------------
// 6. AWGN clean-pilot MSE curves for OFDM / AUP / DDP coincide within 0.3 dB
//    at every sweep point 0..30 dB.
// ---------------------------------------------------------------------------

Outcome criterion6() {
    auto cfg = fbmc::ExperimentConfig::awgn_block();
    cfg.frames_per_point = 16000;
    cfg.seed = 606;
    const auto result = fbmc::run_power_experiment(cfg);
    double worst = 0.0;
    double worst_snr = 0.0;
    for (size_t p = 0; p < result.snr_sweep_db.size(); ++p) {
        double lo = 1e300, hi = -1e300;
        for (const auto& c : result.curves) {
            const double v = db(c.records[p].mse);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > worst) {
            worst = hi - lo;
            worst_snr = result.snr_sweep_db[p];
        }
    }
    return {worst <= 0.3, fmt("max curve spread = %.3f dB at %g dB SNR "
                              "(<= 0.3 dB over 0..30 dB)",
                              worst, worst_snr)};
}

// ---------------------------------------------------------------------------
// 7. Neutralization exactness: 10^4 random frames, every scheme's noiseless
//    flat-channel clean pilot equals its target within 1e-9.
// ---------------------------------------------------------------------------

Outcome criterion7() {
    const auto& modem = modem64();
    const double beta =
        fbmc::ambiguity(filter64(), fbmc::PhaseConvention{}, 0, 1, 0).imag();
    const int frames = 10000;
    std::vector<double> err(frames);
    fbmc::parallel_frames(0, frames, [&](std::uint64_t f) {
        fbmc::OqamGrid grid(64, 16, 0.5);
        std::mt19937_64 rng(0x7000 + f);
        const double amp = std::sqrt(0.5);
        for (auto& v : grid.values) v = (rng() & 1ULL) ? amp : -amp;

        std::vector<fbmc::PilotGroup> groups;
        const fbmc::CleanPilotTarget pair{std::sqrt(1.5), std::sqrt(1.5), 1.5};
        switch (f % 4) {
            case 0: groups.push_back(fbmc::make_aup_pair_group(32, 7, 1.0)); break;
            case 1: groups.push_back(fbmc::make_aup4_group(32, 6, 1.0, 1.0)); break;
            case 2: groups.push_back(fbmc::make_ddp_pair_group(32, 7, pair, beta)); break;
            default: groups.push_back(fbmc::make_ddp4_group(32, 6, pair, pair, beta)); break;
        }
        fbmc::solve_pilots_exact(grid, groups, modem, 2);
        const auto r = modem.demodulate(modem.modulate(grid), 16);
        double worst = 0.0;
        for (const auto& g : groups) {
            const auto combined = fbmc::combine_group(r, g);
            for (size_t o = 0; o < combined.size(); ++o) {
                const cplx target(g.targets[o].x, g.targets[o].y);
                worst = std::max(worst, std::abs(combined[o] - target));
            }
        }
        err[f] = worst;
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return {worst <= 1e-9,
            fmt("worst |clean - target| over 10^4 frames x {AUP, AUP4, DDP2, "
                "DDP4} = %.2e (<= 1e-9)",
                worst)};
}

// ---------------------------------------------------------------------------
// 8. ETU MSE behavior: DDP4 beats AUP by 4..8 dB averaged over 10..20 dB SNR,
//    and DDP4 loses at most ~1 dB (pinned 1.25 dB) to OFDM below 20 dB.
// ---------------------------------------------------------------------------

fbmc::ExperimentResult etu_run(std::uint64_t seed, int frames,
                               std::vector<double> sweep) {
    auto cfg = fbmc::ExperimentConfig::etu_frame();
    cfg.snr_sweep_db = std::move(sweep);
    cfg.frames_per_point = frames;
    cfg.seed = seed;
    return fbmc::run_etu_experiment(cfg);
}

Outcome criterion8() {
    const auto result = etu_run(808, 800, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
    const auto& ofdm = result.curves[0];
    const auto& aup = result.curves[1];
    const auto& ddp = result.curves[2];

    double gain = 0.0;
    int gain_points = 0;
    double worst_loss = -1e300;
    for (size_t p = 0; p < result.snr_sweep_db.size(); ++p) {
        const double snr = result.snr_sweep_db[p];
        if (snr >= 10.0 && snr <= 20.0) {
            gain += db(aup.records[p].mse) - db(ddp.records[p].mse);
            ++gain_points;
        }
        if (snr < 20.0)
            worst_loss = std::max(worst_loss,
                                  db(ddp.records[p].mse) - db(ofdm.records[p].mse));
    }
    gain /= gain_points;
    const bool gain_ok = gain >= 4.0 && gain <= 8.0;
    const bool track_ok = worst_loss <= 1.25;
    return {gain_ok && track_ok,
            fmt("DDP4-over-AUP gain = %.2f dB (4..8 dB -> %s), worst DDP4 loss "
                "to OFDM below 20 dB = %.2f dB (<= 1.25 dB -> %s)",
                gain, gain_ok ? "in" : "OUT", worst_loss, track_ok ? "in" : "OUT")};
}

// ---------------------------------------------------------------------------
// 9. ETU BER behavior: DDP4 within 0.5 dB of OFDM at BER = 1e-2; AUP strictly
//    worse than DDP4 wherever both exceed BER 1e-3.
// ---------------------------------------------------------------------------

double snr_at_ber(const std::vector<double>& snr, const fbmc::SchemeCurve& curve,
                  double target) {
    for (size_t p = 0; p + 1 < snr.size(); ++p) {
        const double b0 = curve.records[p].ber;
        const double b1 = curve.records[p + 1].ber;
        if (b0 >= target && b1 < target && b1 > 0.0) {
            const double w = (std::log10(b0) - std::log10(target)) /
                             (std::log10(b0) - std::log10(b1));
            return snr[p] + w * (snr[p + 1] - snr[p]);
        }
    }
    return std::nan("");
}

Outcome criterion9() {
    const auto result =
        etu_run(909, 800, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30});
    const auto& ofdm = result.curves[0];
    const auto& aup = result.curves[1];
    const auto& ddp = result.curves[2];

    const double s_ofdm = snr_at_ber(result.snr_sweep_db, ofdm, 1e-2);
    const double s_ddp = snr_at_ber(result.snr_sweep_db, ddp, 1e-2);
    const bool cross_ok = std::isfinite(s_ofdm) && std::isfinite(s_ddp) &&
                          std::abs(s_ddp - s_ofdm) <= 0.5;

    bool aup_worse = true;
    for (size_t p = 0; p < result.snr_sweep_db.size(); ++p)
        if (aup.records[p].ber > 1e-3 && ddp.records[p].ber > 1e-3 &&
            !(aup.records[p].ber > ddp.records[p].ber))
            aup_worse = false;

    return {cross_ok && aup_worse,
            fmt("SNR@BER=1e-2: OFDM %.2f dB, DDP4 %.2f dB, gap %.2f dB "
                "(<= 0.5 -> %s); AUP strictly worse where both BER > 1e-3: %s",
                s_ofdm, s_ddp, std::abs(s_ddp - s_ofdm), cross_ok ? "in" : "OUT",
                aup_worse ? "yes" : "NO")};
}

// ---------------------------------------------------------------------------
// 10. Oracle suites: fast modem == direct reference within 1e-9; apply_channel
//     == brute-force tapped delay line exactly; perfect-CSI detection BER
//     matches the Gaussian closed form within 5% relative.
// ---------------------------------------------------------------------------

Outcome criterion10() {
    const auto& modem = modem64();

    // (a) fast vs reference modem paths
    fbmc::OqamGrid grid(64, 12, 0.5);
    std::mt19937_64 rng(0xCAFE);
    for (auto& v : grid.values) v = (rng() & 1ULL) ? 0.7071 : -0.7071;
    const auto fast = modem.modulate(grid);
    const auto ref = modem.modulate_ref(grid);
    double mod_dev = 0.0;
    for (size_t i = 0; i < fast.size(); ++i)
        mod_dev = std::max(mod_dev, std::abs(fast[i] - ref[i]));
    const auto rf = modem.demodulate(fast, 12);
    const auto rr = modem.demodulate_ref(fast, 12);
    for (size_t i = 0; i < rf.values.size(); ++i)
        mod_dev = std::max(mod_dev, std::abs(rf.values[i] - rr.values[i]));
    const bool modem_ok = mod_dev < 1e-9;

    // (b) apply_channel vs explicit tapped delay line (bit-exact)
    std::vector<cplx> x(400);
    for (auto& v : x)
        v = cplx(static_cast<double>(rng() % 2001) / 1000.0 - 1.0,
                 static_cast<double>(rng() % 2001) / 1000.0 - 1.0);
    const auto ch = fbmc::make_channel(fbmc::PowerDelayProfile::etu(), 92.6,
                                       3.84e6, 500, 55);
    const auto y = fbmc::apply_channel(x, ch);
    int max_delay = 0;
    for (int d : ch.tap_delays_samples) max_delay = std::max(max_delay, d);
    std::vector<cplx> brute(x.size() + max_delay, cplx{});
    for (size_t t = 0; t < ch.tap_gains.size(); ++t) {
        const int d = ch.tap_delays_samples[t];
        for (size_t k = 0; k < x.size(); ++k)
            brute[k + d] +=
                ch.tap_gains[t][std::min(k + d, ch.num_samples() - 1)] * x[k];
    }
    bool conv_ok = y.size() == brute.size();
    for (size_t i = 0; conv_ok && i < y.size(); ++i) conv_ok = (y[i] == brute[i]);

    // (c) perfect-CSI BER vs Q(sqrt(1/sigma^2)) for both waveforms
    const double sigma2 = 0.1848;  // puts BER near 1e-2
    const double q = 0.5 * std::erfc(std::sqrt(1.0 / sigma2) / std::sqrt(2.0));

    const int frames = 3000, N = 16, guard = 4;
    fbmc::ChannelEstimateGrid ones;
    ones.num_subcarriers = 64;
    ones.num_symbols = N;
    ones.values.assign(static_cast<size_t>(64) * N, cplx(1.0, 0.0));
    const std::vector<fbmc::CellKind> all_data(static_cast<size_t>(64) * N,
                                               fbmc::CellKind::data);
    std::vector<std::array<double, 2>> per(frames);  // {errors, bits}
    fbmc::parallel_frames(0, frames, [&](std::uint64_t f) {
        fbmc::OqamGrid g(64, N, 0.5);
        std::mt19937_64 r2(0xB000 + f);
        const double amp = std::sqrt(0.5);
        for (auto& v : g.values) v = (r2() & 1ULL) ? amp : -amp;
        const auto noisy = fbmc::awgn(modem.modulate(g), sigma2, 0xB1000 + f);
        const auto rx = modem.demodulate(noisy, N);
        const auto bits = fbmc::equalize_detect_fbmc(rx, ones, all_data, guard);
        size_t i = 0;
        double errs = 0.0;
        for (int n = guard; n < N - guard; ++n)
            for (int m = 0; m < 64; ++m, ++i)
                if ((g.at(m, n) > 0.0 ? 1 : 0) != bits[i]) errs += 1.0;
        per[f] = {errs, static_cast<double>(bits.size())};
    });
    double errs = 0.0, bits = 0.0;
    for (const auto& p : per) {
        errs += p[0];
        bits += p[1];
    }
    const double ber_fbmc = errs / bits;

    fbmc::ChannelEstimateGrid ones_ofdm;
    ones_ofdm.num_subcarriers = 64;
    ones_ofdm.num_symbols = 20;
    ones_ofdm.values.assign(static_cast<size_t>(64) * 20, cplx(1.0, 0.0));
    const std::vector<fbmc::CellKind> all_data_ofdm(static_cast<size_t>(64) * 20,
                                                    fbmc::CellKind::data);
    std::vector<std::array<double, 2>> per_o(frames);
    fbmc::parallel_frames(0, frames, [&](std::uint64_t f) {
        fbmc::QamGrid g(64, 20);
        std::mt19937_64 r2(0xC000 + f);
        const double s2 = std::sqrt(0.5);
        for (auto& v : g.values) {
            const auto b = r2();
            v = cplx((b & 1ULL) ? s2 : -s2, (b & 2ULL) ? s2 : -s2);
        }
        const auto noisy = fbmc::awgn(fbmc::ofdm_modulate(g, 16), sigma2, 0xC1000 + f);
        const auto rx = fbmc::ofdm_demodulate(noisy, 64, 20, 16);
        const auto bits2 = fbmc::equalize_detect_ofdm(rx, ones_ofdm, all_data_ofdm);
        size_t i = 0;
        double e = 0.0;
        for (const auto& v : g.values) {
            if ((v.real() > 0.0 ? 1 : 0) != bits2[i++]) e += 1.0;
            if ((v.imag() > 0.0 ? 1 : 0) != bits2[i++]) e += 1.0;
        }
        per_o[f] = {e, static_cast<double>(bits2.size())};
    });
    double errs_o = 0.0, bits_o = 0.0;
    for (const auto& p : per_o) {
        errs_o += p[0];
        bits_o += p[1];
    }
    const double ber_ofdm = errs_o / bits_o;

    const double rel_f = std::abs(ber_fbmc - q) / q;
    const double rel_o = std::abs(ber_ofdm - q) / q;
    const bool ber_ok = rel_f <= 0.05 && rel_o <= 0.05;

    return {modem_ok && conv_ok && ber_ok,
            fmt("modem fast-vs-ref %.1e (<= 1e-9 -> %s); channel conv %s; "
                "perfect-CSI BER FBMC %.4e / OFDM %.4e vs Q %.4e "
                "(rel %.1f%%/%.1f%% <= 5%%)",
                mod_dev, modem_ok ? "ok" : "FAIL",
                conv_ok ? "bit-exact" : "MISMATCH", ber_fbmc, ber_ofdm, q,
                100.0 * rel_f, 100.0 * rel_o)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }
    const int crit = std::atoi(argv[1]);
    static const char* names[] = {
        "ambiguity table reproduction",
        "beta constant",
        "interference power E(i^2)",
        "combined-noise variance",
        "power-boosting ratios",
        "AWGN MSE curve alignment",
        "neutralization exactness",
        "ETU MSE gains",
        "ETU uncoded BER",
        "oracle suites",
    };
    Outcome (*fns[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7, criterion8,
                          criterion9, criterion10};
    if (crit < 1 || crit > 10) {
        std::fprintf(stderr, "criterion out of range: %d\n", crit);
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = fns[crit - 1]();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s — %s [%.1f s]\n", crit, names[crit - 1],
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    return o.pass ? 0 : 1;
}
