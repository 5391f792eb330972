// fbmclab: FBMC/OQAM scattered-pilot laboratory CLI.
//
// Subcommands:
//   table    - emit the 3x7 ambiguity window and check it against the built-in
//              reference table (exit 2 on tolerance failure)
//   power    - AWGN power-boosting experiment (SNR-parity policy)
//   awgn     - AWGN MSE sweep (same experiment, plot-oriented defaults)
//   etu      - ETU fading experiment (normalized pilot power)
//   selftest - fast invariant suite (exit 2 on failure)

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "fbmc/ambiguity.hpp"
#include "fbmc/channel.hpp"
#include "fbmc/harness.hpp"
#include "fbmc/modem.hpp"
#include "fbmc/ofdm.hpp"
#include "fbmc/pilots.hpp"
#include "fbmc/prototype_filter.hpp"

namespace {

struct CommonOpts {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> frames;
    std::optional<std::string> snr;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "config file (key=value lines)");
    cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--out", o.out, "output CSV path");
    cmd->add_option("--frames", o.frames, "frames per SNR point");
    cmd->add_option("--snr", o.snr, "SNR sweep start:step:stop in dB");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

fbmc::ExperimentConfig resolve(const CommonOpts& o, fbmc::ExperimentConfig base) {
    if (o.config) base = fbmc::ExperimentConfig::from_file(*o.config, base);
    if (o.seed) base.seed = *o.seed;
    if (o.frames) base.frames_per_point = *o.frames;
    if (o.threads) base.threads = *o.threads;
    if (o.snr) {
        // reuse the config-file parser for start:step:stop
        const std::string tmp = "/tmp/.fbmclab_snr";  // not used; parse inline
        (void)tmp;
        fbmc::ExperimentConfig probe = base;
        // from_file handles "snr=..." strings; do it directly:
        std::string spec = *o.snr;
        double start, step, stop;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) == 3 &&
            step > 0) {
            probe.snr_sweep_db.clear();
            for (double v = start; v <= stop + 1e-9; v += step)
                probe.snr_sweep_db.push_back(v);
            base = probe;
        } else {
            throw CLI::ValidationError("--snr", "expected start:step:stop");
        }
    }
    return base;
}

// Reference 3x7 interference table (rows m-1, m, m+1 by time offsets n-3..n+3).
constexpr double kRefRe[3][7] = {
    {0, -0.125, 0, 0.2393, 0, -0.125, 0},
    {-0.067, 0, 0.564, 1.0, 0.564, 0, -0.067},
    {0, -0.125, 0, 0.239, 0, -0.125, 0},
};
constexpr double kRefIm[3][7] = {
    {0.043, 0, -0.206, 0, 0.206, 0, -0.043},
    {0, 0, 0, 0, 0, 0, 0},
    {-0.043, 0, 0.206, 0, -0.206, 0, 0.043},
};

int cmd_table(const CommonOpts& o) {
    const auto filter = fbmc::design_prototype_filter(64, 4);
    const fbmc::AmbiguityTable table(filter, 1, 3);

    bool ok = true;
    double worst = 0.0;
    std::ofstream csv;
    if (o.out) {
        csv.open(*o.out);
        if (!csv) throw std::runtime_error("cannot open " + *o.out);
        csv << "dm,dn,re,im\n";
    }
    for (int dm = -1; dm <= 1; ++dm)
        for (int dn = -3; dn <= 3; ++dn) {
            const std::complex<double> a = table.raw(dm, dn);
            const double ere = kRefRe[dm + 1][dn + 3];
            const double eim = kRefIm[dm + 1][dn + 3];
            const double err = std::max(std::abs(a.real() - ere),
                                        std::abs(a.imag() - eim));
            worst = std::max(worst, err);
            if (err > 2e-3) ok = false;
            if (csv.is_open()) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f\n", dm, dn,
                              a.real(), a.imag());
                csv << buf;
            }
        }
    std::printf("ambiguity table vs reference: worst deviation %.2e -> %s\n",
                worst, ok ? "OK" : "FAIL");
    return ok ? 0 : 2;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&](bool pass, const char* name) {
        std::printf("  [%s] %s\n", pass ? "ok" : "FAIL", name);
        if (!pass) ++failures;
    };

    const auto filter = fbmc::design_prototype_filter(64, 4);
    double energy = 0.0;
    for (double t : filter.taps) energy += t * t;
    check(std::abs(energy - 1.0) < 1e-12, "prototype filter unit energy");

    const double beta =
        fbmc::ambiguity(filter, fbmc::PhaseConvention{}, 0, 1, 0).imag();
    check(std::abs(beta - 0.5646) < 1e-3, "beta(0,1) = 0.5646 +- 1e-3");

    const fbmc::FbmcModem modem(filter);
    fbmc::OqamGrid grid(64, 16, 0.5);
    std::mt19937_64 rng(7);
    for (auto& v : grid.values) v = (rng() & 1ULL) ? 0.7071 : -0.7071;
    const auto fast = modem.modulate(grid);
    const auto ref = modem.modulate_ref(grid);
    double dev = 0.0;
    for (size_t i = 0; i < fast.size(); ++i) dev = std::max(dev, std::abs(fast[i] - ref[i]));
    check(dev < 1e-9, "fast synthesis == direct reference (1e-9)");

    // Noiseless flat-channel neutralization for every scheme.
    bool exact = true;
    for (const auto scheme : {fbmc::PilotScheme::AUP, fbmc::PilotScheme::DDP2,
                              fbmc::PilotScheme::DDP4}) {
        auto cfg = fbmc::ExperimentConfig::awgn_block();
        cfg.scheme = scheme;
        cfg.group_size = scheme == fbmc::PilotScheme::DDP4 ? 4 : 2;
        cfg.pilot_target_scale = scheme == fbmc::PilotScheme::AUP ? 1.0 : std::sqrt(3.0);
        const auto bf = fbmc::build_frame(cfg, modem, 0);
        const auto stream = modem.modulate(bf.oqam);
        const auto r = modem.demodulate(stream, cfg.num_symbols);
        for (const auto& g : bf.groups) {
            const auto combined = fbmc::combine_group(r, g);
            for (size_t i = 0; i < combined.size(); ++i) {
                const std::complex<double> target(g.targets[i].x, g.targets[i].y);
                if (std::abs(combined[i] - target) > 1e-9) exact = false;
            }
        }
    }
    check(exact, "clean pilots hit their targets (noiseless, 1e-9)");

    fbmc::QamGrid q(64, 4);
    std::mt19937_64 rng2(9);
    for (auto& v : q.values)
        v = std::complex<double>((rng2() & 1ULL) ? 1 : -1, (rng2() & 2ULL) ? 1 : -1);
    const auto s = fbmc::ofdm_modulate(q, 16);
    const auto q2 = fbmc::ofdm_demodulate(s, 64, 4, 16);
    double qdev = 0.0;
    for (size_t i = 0; i < q.values.size(); ++i)
        qdev = std::max(qdev, std::abs(q.values[i] - q2.values[i]));
    check(qdev < 1e-9, "OFDM round trip is unitary");

    std::printf("selftest: %s\n", failures == 0 ? "PASS" : "FAIL");
    return failures == 0 ? 0 : 2;
}

int run_and_write(const fbmc::ExperimentResult& result, const CommonOpts& o) {
    if (o.out) fbmc::write_csv(result, *o.out);
    for (const auto& curve : result.curves) {
        std::printf("%-5s (%s): eta=%.4f", curve.scheme.c_str(),
                    curve.waveform.c_str(), curve.power_ratio);
        if (!curve.records.empty())
            std::printf("  mse[%g dB]=%.4g  ber=%.4g",
                        curve.records.back().snr_db, curve.records.back().mse,
                        curve.records.back().ber);
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FBMC/OQAM scattered-pilot transceiver laboratory"};
    app.require_subcommand(1);

    CommonOpts to, po, ao, eo;
    auto* table = app.add_subcommand("table", "emit/check the ambiguity table");
    add_common(table, to);
    auto* power = app.add_subcommand("power", "AWGN power-boosting ratios");
    add_common(power, po);
    auto* awgn = app.add_subcommand("awgn", "AWGN MSE sweep");
    add_common(awgn, ao);
    auto* etu = app.add_subcommand("etu", "ETU fading MSE/BER sweep");
    add_common(etu, eo);
    app.add_subcommand("selftest", "fast invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (table->parsed()) return cmd_table(to);
        if (app.got_subcommand("selftest")) return cmd_selftest();
        if (power->parsed())
            return run_and_write(
                fbmc::run_power_experiment(resolve(po, fbmc::ExperimentConfig::awgn_block())),
                po);
        if (awgn->parsed()) {
            auto cfg = fbmc::ExperimentConfig::awgn_block();
            cfg.frames_per_point = 4000;
            return run_and_write(fbmc::run_power_experiment(resolve(ao, cfg)), ao);
        }
        if (etu->parsed())
            return run_and_write(
                fbmc::run_etu_experiment(resolve(eo, fbmc::ExperimentConfig::etu_frame())),
                eo);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
