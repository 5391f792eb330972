#include "fbmc/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fbmc {

PowerDelayProfile::PowerDelayProfile(std::vector<double> delays, std::vector<double> powers)
    : delays_s(std::move(delays)), powers_db(std::move(powers)) {
    if (delays_s.empty() || delays_s.size() != powers_db.size())
        throw std::invalid_argument("PowerDelayProfile: empty or mismatched arrays");
    if (delays_s.front() != 0.0)
        throw std::invalid_argument("PowerDelayProfile: first delay must be 0");
    for (size_t i = 1; i < delays_s.size(); ++i)
        if (delays_s[i] <= delays_s[i - 1])
            throw std::invalid_argument("PowerDelayProfile: delays must be strictly increasing");
}

std::vector<double> PowerDelayProfile::linear_powers() const {
    std::vector<double> p(powers_db.size());
    double total = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] = std::pow(10.0, powers_db[i] / 10.0);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

PowerDelayProfile PowerDelayProfile::etu() {
    return PowerDelayProfile(
        {0.0, 50e-9, 120e-9, 200e-9, 230e-9, 500e-9, 1600e-9, 2300e-9, 5000e-9},
        {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0});
}

std::vector<cplx> awgn(std::span<const cplx> samples, double sigma2, std::uint64_t seed) {
    if (sigma2 < 0.0) throw std::invalid_argument("awgn: negative variance");
    std::vector<cplx> out(samples.begin(), samples.end());
    if (sigma2 == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(sigma2 / 2.0));
    for (auto& v : out) {
        const double re = dist(rng);
        const double im = dist(rng);
        v += cplx(re, im);
    }
    return out;
}

ChannelRealization make_channel(const PowerDelayProfile& profile, double doppler_hz,
                                double sample_rate, size_t num_samples,
                                std::uint64_t seed) {
    if (sample_rate <= 0.0 || num_samples == 0)
        throw std::invalid_argument("make_channel: bad sample rate or length");
    ChannelRealization ch;
    ch.doppler_hz = doppler_hz;
    ch.sample_rate = sample_rate;
    ch.seed = seed;

    const auto powers = profile.linear_powers();
    const size_t taps = powers.size();
    ch.tap_delays_samples.resize(taps);
    for (size_t t = 0; t < taps; ++t)
        ch.tap_delays_samples[t] =
            static_cast<int>(std::lround(profile.delays_s[t] * sample_rate));

    // Method of exact Doppler spread: per tap, two sums of sinusoids (16 for
    // the in-phase arm, 17 for quadrature) with frequencies
    // fd * sin(pi (2n-1) / (4 N)) and random phases; the per-tap
    // autocorrelation tracks J0(2 pi fd tau).
    constexpr int kN1 = 16;
    constexpr int kN2 = 17;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);

    ch.tap_gains.assign(taps, std::vector<cplx>(num_samples, cplx{}));
    const double ts = 1.0 / sample_rate;
    std::vector<double> re(num_samples), im(num_samples);
    for (size_t t = 0; t < taps; ++t) {
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
        for (int arm = 0; arm < 2; ++arm) {
            const int nn = arm == 0 ? kN1 : kN2;
            const double amp = std::sqrt(2.0 / nn);
            auto& dst = arm == 0 ? re : im;
            for (int n = 1; n <= nn; ++n) {
                const double f = doppler_hz * std::sin(pi * (2 * n - 1) / (4.0 * nn));
                const double th = phase(rng);
                const double dphi = 2.0 * pi * f * ts;
                // cos(omega k ts + theta) via a phasor recurrence.
                double c = std::cos(th), s = std::sin(th);
                const double dc = std::cos(dphi), ds = std::sin(dphi);
                for (size_t k = 0; k < num_samples; ++k) {
                    dst[k] += amp * c;
                    const double cn = c * dc - s * ds;
                    s = c * ds + s * dc;
                    c = cn;
                }
            }
        }
        const double scale = std::sqrt(powers[t] / 2.0);
        for (size_t k = 0; k < num_samples; ++k)
            ch.tap_gains[t][k] = scale * cplx(re[k], im[k]);
    }
    return ch;
}

std::vector<cplx> apply_channel(std::span<const cplx> samples,
                                const ChannelRealization& realization) {
    if (realization.tap_gains.empty())
        throw std::invalid_argument("apply_channel: empty realization");
    if (realization.num_samples() < samples.size())
        throw std::invalid_argument("apply_channel: realization shorter than the stream");
    int max_delay = 0;
    for (int d : realization.tap_delays_samples) {
        if (d < 0 || static_cast<size_t>(d) >= samples.size())
            throw std::invalid_argument("apply_channel: delay exceeds the stream");
        max_delay = std::max(max_delay, d);
    }
    const size_t last = realization.num_samples() - 1;
    std::vector<cplx> out(samples.size() + max_delay, cplx{});
    for (size_t t = 0; t < realization.tap_gains.size(); ++t) {
        const int d = realization.tap_delays_samples[t];
        const auto& g = realization.tap_gains[t];
        for (size_t k = 0; k < samples.size(); ++k)
            out[k + d] += g[std::min(k + d, last)] * samples[k];
    }
    return out;
}

cplx true_freq_response(const ChannelRealization& realization, size_t sample_index,
                        int subcarrier, int num_subcarriers) {
    const size_t last = realization.num_samples() - 1;
    const size_t k = std::min(sample_index, last);
    cplx acc{};
    for (size_t t = 0; t < realization.tap_gains.size(); ++t) {
        const double d = realization.tap_delays_samples[t];
        const double ang = 2.0 * pi * subcarrier * d / num_subcarriers;
        acc += realization.tap_gains[t][k] * cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

}  // namespace fbmc
