#include "fbmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fbmc/ambiguity.hpp"
#include "fbmc/fft.hpp"
#include "fbmc/modem.hpp"
#include "fbmc/prototype_filter.hpp"

namespace fbmc {

namespace {

// Independent substreams of the master seed.
constexpr std::uint64_t kStreamFbmcData = 1;
constexpr std::uint64_t kStreamOfdmData = 2;
constexpr std::uint64_t kStreamChannel = 3;
constexpr std::uint64_t kStreamNoise = 4;
constexpr std::uint64_t kStreamCalibration = 5;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double sqr(double v) { return v * v; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ (stream * 0xd1342543de82ef95ULL)) ^ index);
}

void parallel_frames(int threads, std::uint64_t count,
                     const std::function<void(std::uint64_t)>& body) {
    int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    if (count < static_cast<std::uint64_t>(t)) t = static_cast<int>(count ? count : 1);
    if (t == 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::awgn_block() {
    ExperimentConfig c;
    c.waveform = WaveformKind::fbmc;
    c.scheme = PilotScheme::DDP2;
    c.num_subcarriers = 64;
    c.num_symbols = 16;
    c.pilot_stride = 0;  // single group at the block center
    c.group_size = 2;
    c.group_symbols = {7};
    c.frames_per_point = 20000;
    c.power_policy = PowerPolicy::boost_to_snr;
    c.channel = ChannelKind::awgn;
    c.ofdm_cp = 16;
    return c;
}

ExperimentConfig ExperimentConfig::etu_frame() {
    ExperimentConfig c;
    c.waveform = WaveformKind::fbmc;
    c.scheme = PilotScheme::DDP4;
    c.num_subcarriers = 256;
    c.num_symbols = 28;
    c.pilot_stride = 6;
    c.group_size = 4;
    c.group_symbols = {8, 22};
    c.frames_per_point = 2000;
    c.power_policy = PowerPolicy::normalized_total;
    c.channel = ChannelKind::etu;
    c.doppler_hz = 92.6;
    c.sample_rate_hz = 3.84e6;
    c.ofdm_cp = 20;
    return c;
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<double> parse_snr_spec(const std::string& s) {
    if (s.find(':') == std::string::npos) return parse_double_list(s);
    double start, step, stop;
    char c1, c2;
    std::stringstream ss(s);
    if (!(ss >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0)
        throw std::invalid_argument("bad snr range: " + s);
    std::vector<double> out;
    for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path,
                                             const ExperimentConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    ExperimentConfig c = base;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            const auto b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string();
            const auto e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "waveform") {
            if (val == "fbmc") c.waveform = WaveformKind::fbmc;
            else if (val == "ofdm") c.waveform = WaveformKind::ofdm;
            else throw std::invalid_argument("bad waveform: " + val);
        } else if (key == "scheme") {
            if (val == "aup") c.scheme = PilotScheme::AUP;
            else if (val == "ddp2") c.scheme = PilotScheme::DDP2;
            else if (val == "ddp4") c.scheme = PilotScheme::DDP4;
            else throw std::invalid_argument("bad scheme: " + val);
        } else if (key == "num_subcarriers") c.num_subcarriers = std::stoi(val);
        else if (key == "num_symbols") c.num_symbols = std::stoi(val);
        else if (key == "pilot_stride") c.pilot_stride = std::stoi(val);
        else if (key == "group_size") c.group_size = std::stoi(val);
        else if (key == "group_symbols") c.group_symbols = parse_int_list(val);
        else if (key == "snr") c.snr_sweep_db = parse_snr_spec(val);
        else if (key == "frames_per_point") c.frames_per_point = std::stoi(val);
        else if (key == "power_policy") {
            if (val == "boost_to_snr") c.power_policy = PowerPolicy::boost_to_snr;
            else if (val == "normalized_total") c.power_policy = PowerPolicy::normalized_total;
            else throw std::invalid_argument("bad power_policy: " + val);
        } else if (key == "channel") {
            if (val == "awgn") c.channel = ChannelKind::awgn;
            else if (val == "etu") c.channel = ChannelKind::etu;
            else throw std::invalid_argument("bad channel: " + val);
        } else if (key == "doppler_hz") c.doppler_hz = std::stod(val);
        else if (key == "sample_rate_hz") c.sample_rate_hz = std::stod(val);
        else if (key == "ofdm_cp") c.ofdm_cp = std::stoi(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "guard_symbols") c.guard_symbols = std::stoi(val);
        else if (key == "threads") c.threads = std::stoi(val);
        else if (key == "pilot_target_scale") c.pilot_target_scale = std::stod(val);
        else if (key == "profile_delays_s") c.profile_delays_s = parse_double_list(val);
        else if (key == "profile_powers_db") c.profile_powers_db = parse_double_list(val);
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Frame construction
// ---------------------------------------------------------------------------

namespace {

std::vector<int> pilot_subcarriers(const ExperimentConfig& c) {
    std::vector<int> subs;
    if (c.pilot_stride > 0) {
        for (int m = 0; m < c.num_subcarriers; m += c.pilot_stride) subs.push_back(m);
    } else {
        subs.push_back(c.num_subcarriers / 2);
    }
    return subs;
}

std::vector<PilotGroup> make_groups(const ExperimentConfig& c, double beta_plus) {
    const double scale = c.pilot_target_scale;
    const double xy = scale / std::sqrt(2.0);
    const CleanPilotTarget pair_target{xy, xy, xy * xy};
    std::vector<PilotGroup> groups;
    std::set<std::pair<int, int>> used;
    for (int m : pilot_subcarriers(c)) {
        for (int n0 : c.group_symbols) {
            // Pilots may extend into the guard band (guard symbols are only
            // excluded from metrics), but need a margin so the combined
            // outputs and their interference windows stay inside the frame.
            if (n0 < 2 || n0 + c.group_size > c.num_symbols - 2)
                throw std::invalid_argument(
                    "pilot group too close to the frame edge");
            PilotGroup g;
            switch (c.scheme) {
                case PilotScheme::AUP:
                    g = c.group_size == 4 ? make_aup4_group(m, n0, scale, scale)
                                          : make_aup_pair_group(m, n0, scale);
                    break;
                case PilotScheme::DDP2:
                    g = make_ddp_pair_group(m, n0, pair_target, beta_plus);
                    break;
                case PilotScheme::DDP4:
                    g = make_ddp4_group(m, n0, pair_target, pair_target, beta_plus);
                    break;
                default:
                    throw std::invalid_argument("unsupported scheme in the harness");
            }
            if (static_cast<int>(g.slots.size()) != c.group_size)
                throw std::invalid_argument("group size does not match the scheme");
            for (const auto& slot : g.slots)
                if (!used.insert(slot).second)
                    throw std::invalid_argument("pilot layout collision");
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

/// Anchor times (grid symbol units, fractional for pair combinings) of a
/// group's clean outputs.
std::vector<double> group_output_times(const PilotGroup& g) {
    const double n0 = g.slots.front().second;
    switch (g.scheme) {
        case PilotScheme::AUP:
            if (g.slots.size() == 4) return {n0 + 1.0, n0 + 2.0};
            return {n0};
        case PilotScheme::DDP2:
            return {n0 + 0.5};
        case PilotScheme::DDP4:
            return {n0 + 0.5, n0 + 2.5};
        default:
            throw std::invalid_argument("group_output_times: unsupported scheme");
    }
}

}  // namespace

BuiltFrame build_frame(const ExperimentConfig& config, const FbmcModem& modem,
                       std::uint64_t frame_index) {
    BuiltFrame bf;
    const int M = config.num_subcarriers;
    if (config.waveform == WaveformKind::fbmc) {
        if (M != modem.filter().num_subcarriers)
            throw std::invalid_argument("build_frame: modem/config size mismatch");
        const int N = config.num_symbols;
        OqamGrid grid(M, N, 0.5);
        std::mt19937_64 rng(derive_seed(config.seed, kStreamFbmcData, frame_index));
        const double amp = std::sqrt(0.5);  // PAM-2 at rho^2 = 1/2
        for (auto& v : grid.values) v = (rng() & 1ULL) ? amp : -amp;

        const double beta_plus =
            ambiguity(modem.filter(), modem.convention(), 0, 1, 0).imag();
        auto groups = make_groups(config, beta_plus);
        solve_pilots_exact(grid, groups, modem, 2);

        double pp = 0.0;
        for (const auto& g : groups)
            for (double p : g.solved_values) pp += p * p;
        bf.pilot_power = pp;

        for (int n = config.guard_symbols; n < N - config.guard_symbols; ++n)
            for (int m = 0; m < M; ++m)
                if (grid.kind(m, n) == CellKind::data)
                    bf.tx_bits.push_back(grid.at(m, n) > 0.0 ? 1 : 0);
        bf.oqam = std::move(grid);
        bf.groups = std::move(groups);
        return bf;
    }

    // OFDM reference frame: one complex pilot wherever FBMC carries two PAM
    // pilots (pairs at adjacent subcarriers when FBMC uses groups of four).
    const int N = config.num_symbols / 2;
    QamGrid grid(M, N);
    std::vector<CellKind> mask(static_cast<size_t>(M) * N, CellKind::data);
    std::mt19937_64 rng(derive_seed(config.seed, kStreamOfdmData, frame_index));
    const double s2 = 1.0 / std::sqrt(2.0);
    for (auto& v : grid.values) {
        const std::uint64_t bits = rng();
        v = cplx((bits & 1ULL) ? s2 : -s2, (bits & 2ULL) ? s2 : -s2);
    }

    const cplx pilot_value = config.pilot_target_scale * cplx(s2, s2);
    const int edge = config.guard_symbols / 2;
    std::set<int> symbols;
    for (int n0 : config.group_symbols) symbols.insert(n0 / 2);
    std::set<std::pair<int, int>> used;
    for (int m0 : pilot_subcarriers(config)) {
        for (int n : symbols) {
            const int count = config.group_size == 4 ? 2 : 1;
            for (int dm = 0; dm < count; ++dm) {
                const int m = m0 + dm;
                if (m >= M || n < edge || n >= N - edge)
                    throw std::invalid_argument("OFDM pilot layout out of range");
                if (!used.insert({m, n}).second)
                    throw std::invalid_argument("pilot layout collision");
                grid.at(m, n) = pilot_value;
                mask[static_cast<size_t>(n) * M + m] = CellKind::pilot;
                bf.ofdm_pilots.emplace_back(m, n);
                bf.pilot_power += std::norm(pilot_value);
            }
        }
    }
    for (int n = 0; n < N; ++n) {
        const bool guard = n < edge || n >= N - edge;
        for (int m = 0; m < M; ++m) {
            auto& k = mask[static_cast<size_t>(n) * M + m];
            if (guard && k == CellKind::data) k = CellKind::reserved;
        }
    }
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            if (mask[static_cast<size_t>(n) * M + m] == CellKind::data) {
                bf.tx_bits.push_back(grid.at(m, n).real() > 0.0 ? 1 : 0);
                bf.tx_bits.push_back(grid.at(m, n).imag() > 0.0 ? 1 : 0);
            }
    bf.qam = std::move(grid);
    bf.ofdm_mask = std::move(mask);
    return bf;
}

// ---------------------------------------------------------------------------
// Per-frame processing
// ---------------------------------------------------------------------------

namespace {

MetricAccumulator run_fbmc_frame(const ExperimentConfig& cfg, const FbmcModem& modem,
                                 std::uint64_t gidx, double sigma2,
                                 const ChannelRealization* ch) {
    BuiltFrame bf = build_frame(cfg, modem, gidx);
    const int M = cfg.num_subcarriers;
    const double D = modem.filter().center();

    auto stream = modem.modulate(bf.oqam);
    std::vector<cplx> y = ch ? apply_channel(stream, *ch) : std::move(stream);
    y = awgn(y, sigma2, derive_seed(cfg.seed, kStreamNoise, gidx));
    const ComplexGrid r = modem.demodulate(y, cfg.num_symbols);

    MetricAccumulator acc;
    std::vector<PilotEstimate> estimates;
    for (const auto& g : bf.groups) {
        const auto combined = combine_group(r, g);
        const auto times = group_output_times(g);
        for (size_t o = 0; o < combined.size(); ++o) {
            const cplx est = ls_estimate(combined[o], g.targets[o]);
            cplx h{1.0, 0.0};
            if (ch) {
                const auto k = static_cast<size_t>(
                    std::llround(times[o] * (M / 2) + D));
                h = true_freq_response(*ch, k, g.slots.front().first, M);
            }
            acc.sq_err_sum += std::norm(est - h);
            acc.h_pow_sum += std::norm(h);
            ++acc.est_count;
            estimates.push_back({g.slots.front().first, times[o], est});
        }
        acc.pilot_slot_groups += g.slots.size() / 2;  // PAM pilot pairs
    }
    acc.pilot_power_sum += bf.pilot_power;

    const auto grid_est = interpolate(estimates, M, cfg.num_symbols);
    const auto rx_bits =
        equalize_detect_fbmc(r, grid_est, bf.oqam.mask, cfg.guard_symbols);
    acc.bit_count += bf.tx_bits.size();
    for (size_t i = 0; i < bf.tx_bits.size(); ++i)
        if (bf.tx_bits[i] != rx_bits[i]) ++acc.bit_errors;
    return acc;
}

MetricAccumulator run_ofdm_frame(const ExperimentConfig& cfg, const FbmcModem& modem,
                                 std::uint64_t gidx, double sigma2,
                                 const ChannelRealization* ch) {
    BuiltFrame bf = build_frame(cfg, modem, gidx);
    const int M = cfg.num_subcarriers;
    const int N = cfg.num_symbols / 2;
    const int cp = cfg.ofdm_cp;

    auto stream = ofdm_modulate(bf.qam, cp);
    std::vector<cplx> y = ch ? apply_channel(stream, *ch) : std::move(stream);
    y = awgn(y, sigma2, derive_seed(cfg.seed, kStreamNoise, gidx));
    const QamGrid r = ofdm_demodulate(y, M, N, cp);

    MetricAccumulator acc;
    std::vector<PilotEstimate> estimates;
    for (const auto& [m, n] : bf.ofdm_pilots) {
        const cplx x = bf.qam.at(m, n);
        const cplx est = r.at(m, n) / x;
        cplx h{1.0, 0.0};
        if (ch) {
            const auto k =
                static_cast<size_t>(n) * (M + cp) + cp + static_cast<size_t>(M) / 2;
            h = true_freq_response(*ch, k, m, M);
        }
        acc.sq_err_sum += std::norm(est - h);
        acc.h_pow_sum += std::norm(h);
        ++acc.est_count;
        estimates.push_back({m, static_cast<double>(n), est});
    }
    acc.pilot_power_sum += bf.pilot_power;
    acc.pilot_slot_groups += bf.ofdm_pilots.size();  // one pair per complex pilot

    const auto grid_est = interpolate(estimates, M, N);
    const auto rx_bits = equalize_detect_ofdm(r, grid_est, bf.ofdm_mask);
    acc.bit_count += bf.tx_bits.size();
    for (size_t i = 0; i < bf.tx_bits.size(); ++i)
        if (bf.tx_bits[i] != rx_bits[i]) ++acc.bit_errors;
    return acc;
}

MetricRecord to_record(const MetricAccumulator& acc, double snr_db) {
    MetricRecord rec;
    rec.snr_db = snr_db;
    rec.mse = acc.mse();
    rec.ber = acc.ber();
    rec.pilot_power = acc.pilot_slot_groups > 0
                          ? acc.pilot_power_sum / acc.pilot_slot_groups
                          : 0.0;
    return rec;
}

double mean_pair_power(const std::vector<MetricAccumulator>& accs) {
    double power = 0.0;
    double pairs = 0.0;
    for (const auto& a : accs) {
        power += a.pilot_power_sum;
        pairs += static_cast<double>(a.pilot_slot_groups);
    }
    return pairs > 0.0 ? power / pairs : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

ExperimentResult run_power_experiment(const ExperimentConfig& config) {
    if (config.channel != ChannelKind::awgn ||
        config.power_policy != PowerPolicy::boost_to_snr)
        throw std::invalid_argument(
            "run_power_experiment: requires AWGN channel and boost-to-SNR policy");

    ExperimentConfig co = config;
    co.waveform = WaveformKind::ofdm;
    co.pilot_target_scale = 1.0;  // |X|^2 = 1 at SNR parity
    ExperimentConfig ca = config;
    ca.waveform = WaveformKind::fbmc;
    ca.scheme = PilotScheme::AUP;
    ca.group_size = 2;
    ca.pilot_target_scale = 1.0;  // e^2 = 1 at SNR parity
    ExperimentConfig cd = ca;
    cd.scheme = PilotScheme::DDP2;
    // SNR parity with the combined-noise correlation neglected:
    // total clean-target power 3 (x = y = sqrt(1.5)).
    cd.pilot_target_scale = std::sqrt(3.0);

    const FbmcModem modem(design_prototype_filter(config.num_subcarriers, 4));

    ExperimentResult result;
    result.snr_sweep_db = config.snr_sweep_db;
    result.seed = config.seed;
    result.frames = config.frames_per_point;
    result.curves = {{"OFDM", "OFDM", {}, 1.0},
                     {"AUP", "FBMC", {}, 0.0},
                     {"DDP2", "FBMC", {}, 0.0}};

    const std::uint64_t frames = config.frames_per_point;
    std::vector<std::vector<MetricAccumulator>> totals(3);
    for (size_t p = 0; p < config.snr_sweep_db.size(); ++p) {
        const double snr = config.snr_sweep_db[p];
        const double sigma2 = std::pow(10.0, -snr / 10.0);
        std::vector<std::array<MetricAccumulator, 3>> per(frames);
        parallel_frames(config.threads, frames, [&](std::uint64_t f) {
            const std::uint64_t g = p * frames + f;
            per[f][0] = run_ofdm_frame(co, modem, g, sigma2, nullptr);
            per[f][1] = run_fbmc_frame(ca, modem, g, sigma2, nullptr);
            per[f][2] = run_fbmc_frame(cd, modem, g, sigma2, nullptr);
        });
        for (int s = 0; s < 3; ++s) {
            MetricAccumulator acc;
            for (const auto& frame_acc : per) acc.merge(frame_acc[s]);
            result.curves[s].records.push_back(to_record(acc, snr));
            totals[s].push_back(acc);
        }
    }
    const double ofdm_power = mean_pair_power(totals[0]);
    for (int s = 0; s < 3; ++s)
        result.curves[s].power_ratio = mean_pair_power(totals[s]) / ofdm_power;
    return result;
}

namespace {

/// Expected per-pair transmit power is quadratic in the target scale,
/// P(t) = a t^2 + b: `a` is deterministic (one frame, three solves), `b` is
/// the data-driven part, estimated over dedicated calibration frames.
double calibrate_scale(ExperimentConfig cfg, const FbmcModem& modem,
                       double target_pair_power, int calibration_frames) {
    cfg.seed = derive_seed(cfg.seed, kStreamCalibration, 0);
    auto pair_power = [&](double t, std::uint64_t f) {
        ExperimentConfig c = cfg;
        c.pilot_target_scale = t;
        const BuiltFrame bf = build_frame(c, modem, f);
        double pairs = 0.0;
        for (const auto& g : bf.groups) pairs += g.slots.size() / 2.0;
        return bf.pilot_power / pairs;
    };
    const double a =
        0.5 * (pair_power(1.0, 0) + pair_power(-1.0, 0)) - pair_power(0.0, 0);
    double b = 0.0;
    for (int f = 0; f < calibration_frames; ++f)
        b += pair_power(0.0, static_cast<std::uint64_t>(f));
    b /= calibration_frames;
    const double t2 = (target_pair_power - b) / a;
    if (!(t2 > 0.0))
        throw std::runtime_error("pilot power calibration infeasible for this layout");
    return std::sqrt(t2);
}

}  // namespace

ExperimentResult run_etu_experiment(const ExperimentConfig& config) {
    if (config.power_policy != PowerPolicy::normalized_total)
        throw std::invalid_argument(
            "run_etu_experiment: requires the normalized-total power policy");

    const PowerDelayProfile profile =
        config.profile_delays_s.empty()
            ? PowerDelayProfile::etu()
            : PowerDelayProfile(config.profile_delays_s, config.profile_powers_db);

    const FbmcModem modem(design_prototype_filter(config.num_subcarriers, 4));

    ExperimentConfig co = config;
    co.waveform = WaveformKind::ofdm;
    co.pilot_target_scale = 1.0;  // P = 1 per complex pilot
    ExperimentConfig ca = config;
    ca.waveform = WaveformKind::fbmc;
    ca.scheme = PilotScheme::AUP;
    ExperimentConfig cd = ca;
    cd.scheme = PilotScheme::DDP4;
    if (config.group_size == 2) cd.scheme = PilotScheme::DDP2;

    // P = 1 per pilot pair. AUP: enforced in expectation over data (measured
    // calibration; its closed-form power model exceeds the unit cap, so the
    // realized quadratic is inverted instead). DDP: target magnitude from the
    // closed-form pair power model, inverted numerically.
    ca.pilot_target_scale = calibrate_scale(ca, modem, 1.0, 400);
    {
        const AmbiguityTable table(modem.filter(), 1, 3);
        double lo = 0.0, hi = 4.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (predicted_power(PilotScheme::DDP2, 0.5, mid * mid, table) < 1.0 ? lo
                                                                             : hi) = mid;
        }
        cd.pilot_target_scale = 0.5 * (lo + hi);
    }

    const size_t fbmc_len = modem.stream_length(config.num_symbols);
    const size_t ofdm_len = static_cast<size_t>(config.num_symbols / 2) *
                            (config.num_subcarriers + config.ofdm_cp);
    const size_t chan_len = std::max(fbmc_len, ofdm_len) + 64;

    ExperimentResult result;
    result.snr_sweep_db = config.snr_sweep_db;
    result.seed = config.seed;
    result.frames = config.frames_per_point;
    result.curves = {{"OFDM", "OFDM", {}, 1.0},
                     {"AUP", "FBMC", {}, 0.0},
                     {cd.scheme == PilotScheme::DDP4 ? "DDP4" : "DDP2", "FBMC", {}, 0.0}};

    const std::uint64_t frames = config.frames_per_point;
    std::vector<std::vector<MetricAccumulator>> totals(3);
    for (size_t p = 0; p < config.snr_sweep_db.size(); ++p) {
        const double snr = config.snr_sweep_db[p];
        const double sigma2 = std::pow(10.0, -snr / 10.0);
        std::vector<std::array<MetricAccumulator, 3>> per(frames);
        parallel_frames(config.threads, frames, [&](std::uint64_t f) {
            const std::uint64_t g = p * frames + f;
            const ChannelRealization ch =
                make_channel(profile, config.doppler_hz, config.sample_rate_hz,
                             chan_len, derive_seed(config.seed, kStreamChannel, g));
            per[f][0] = run_ofdm_frame(co, modem, g, sigma2, &ch);
            per[f][1] = run_fbmc_frame(ca, modem, g, sigma2, &ch);
            per[f][2] = run_fbmc_frame(cd, modem, g, sigma2, &ch);
        });
        for (int s = 0; s < 3; ++s) {
            MetricAccumulator acc;
            for (const auto& frame_acc : per) acc.merge(frame_acc[s]);
            result.curves[s].records.push_back(to_record(acc, snr));
            totals[s].push_back(acc);
        }
    }
    const double ofdm_power = mean_pair_power(totals[0]);
    for (int s = 0; s < 3; ++s)
        result.curves[s].power_ratio = mean_pair_power(totals[s]) / ofdm_power;
    return result;
}

void write_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "snr_db,mse,ber,pilot_power,scheme,waveform,seed,frames\n";
    char buf[256];
    for (const auto& curve : result.curves) {
        for (const auto& rec : curve.records) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%s,%s,%llu,%d\n",
                          rec.snr_db, rec.mse, rec.ber, rec.pilot_power,
                          curve.scheme.c_str(), curve.waveform.c_str(),
                          static_cast<unsigned long long>(result.seed), result.frames);
            out << buf;
        }
    }
}

}  // namespace fbmc
