// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toa_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace zzopt {
namespace {

constexpr double kSpeedOfLight = 299792458.0;

// splitmix64, used to derive independent per-trial substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

int run_threads(int requested, int jobs) {
    int n = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(jobs, 1));
}

}  // namespace

PilotSymbol make_symbol(std::span<const double> rho, double total_power,
                        PhaseRule rule, std::mt19937_64& rng) {
    if (!(total_power > 0.0)) throw std::invalid_argument("make_symbol: total power must be > 0");
    PilotSymbol sym;
    sym.total_power = total_power;
    sym.x.resize(rho.size());
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    for (size_t k = 0; k < rho.size(); ++k) {
        const double mag = std::sqrt(total_power * rho[k]);
        if (mag == 0.0) {
            sym.x[k] = 0.0;
        } else if (rule == PhaseRule::UnitPhase) {
            sym.x[k] = mag;
        } else {
            const double th = uni(rng);
            sym.x[k] = std::polar(mag, th);
        }
    }
    return sym;
}

std::vector<cplx> apply_channel(const PilotSymbol& sym, const ChannelParams& ch,
                                const OfdmConfig& cfg, std::mt19937_64& rng) {
    const int K = cfg.K;
    std::vector<cplx> y(K);
    const double tau0 = ch.z0 * cfg.sample_period();
    const double amp = std::sqrt(ch.gain);
    const double sigma = std::sqrt(0.5 * ch.noise_var);  // per real component
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < K; ++k) {
        const double d = subcarrier_distance(k, K);
        const double phase = -2.0 * std::numbers::pi * d * cfg.delta_f * tau0 + ch.phi0;
        cplx v = 0.0;
        if (sigma > 0.0) v = cplx(sigma * gauss(rng), sigma * gauss(rng));
        y[k] = amp * std::polar(1.0, phase) * sym.x[k] + v;
    }
    return y;
}

cplx correlate(std::span<const cplx> y, const PilotSymbol& sym,
               const OfdmConfig& cfg, double z) {
    const int K = cfg.K;
    cplx acc = 0.0;
    const double w = 2.0 * std::numbers::pi * z / K;
    for (int k = 0; k < K; ++k) {
        if (sym.x[k] == cplx(0.0)) continue;
        acc += std::conj(sym.x[k]) * y[k] * std::polar(1.0, w * subcarrier_distance(k, K));
    }
    return acc;
}

CorrelatorGrid::CorrelatorGrid(const OfdmConfig& cfg, int oversample) : cfg_(cfg) {
    if (oversample < 1) throw std::invalid_argument("CorrelatorGrid: oversample must be >= 1");
    const int n = static_cast<int>(std::lround(cfg.na * oversample));
    z_.resize(n + 1);
    phasor_.resize(static_cast<size_t>(n + 1) * cfg.K);
    for (int i = 0; i <= n; ++i) {
        z_[i] = static_cast<double>(i) / oversample;
        const double w = 2.0 * std::numbers::pi * z_[i] / cfg.K;
        for (int k = 0; k < cfg.K; ++k)
            phasor_[static_cast<size_t>(i) * cfg.K + k] =
                std::polar(1.0, w * subcarrier_distance(k, cfg.K));
    }
}

void CorrelatorGrid::correlate_all(std::span<const cplx> y, const PilotSymbol& sym,
                                   std::span<cplx> out) const {
    const int K = cfg_.K;
    std::vector<cplx> u(K);
    for (int k = 0; k < K; ++k) u[k] = std::conj(sym.x[k]) * y[k];
    for (int i = 0; i < points(); ++i) {
        const cplx* ph = &phasor_[static_cast<size_t>(i) * K];
        cplx acc = 0.0;
        for (int k = 0; k < K; ++k) acc += u[k] * ph[k];
        out[i] = acc;
    }
}

double estimate_toa(std::span<const cplx> y, const PilotSymbol& sym,
                    DetectionScheme scheme, std::optional<double> phi0_known,
                    const CorrelatorGrid& grid) {
    if (scheme == DetectionScheme::Coherent && !phi0_known)
        throw std::invalid_argument("estimate_toa: coherent detection needs the carrier phase");

    const int n = grid.points();
    std::vector<cplx> corr(n);
    grid.correlate_all(y, sym, corr);

    std::vector<double> metric(n);
    if (scheme == DetectionScheme::Coherent) {
        const cplx rot = std::polar(1.0, -*phi0_known);
        for (int i = 0; i < n; ++i) metric[i] = (rot * corr[i]).real();
    } else {
        for (int i = 0; i < n; ++i) metric[i] = std::norm(corr[i]);
    }

    int best = 0;
    for (int i = 1; i < n; ++i)
        if (metric[i] > metric[best]) best = i;

    double z = grid.z(best);
    if (best > 0 && best < n - 1) {
        const double m0 = metric[best - 1], m1 = metric[best], m2 = metric[best + 1];
        const double denom = m0 - 2.0 * m1 + m2;
        if (denom < 0.0) {
            const double delta = 0.5 * (m0 - m2) / denom;
            z += delta * (grid.z(best + 1) - grid.z(best));
        }
    }
    return std::clamp(z, 0.0, grid.cfg().na);
}

double estimate_snr_raw(std::span<const std::vector<cplx>> symbols,
                        const PilotSymbol& sym, double noise_var_hat,
                        const CorrelatorGrid& grid) {
    if (symbols.empty()) throw std::invalid_argument("estimate_snr_raw: need at least one symbol");
    const int n = grid.points();
    std::vector<cplx> sum(n, 0.0), corr(n);
    for (const auto& y : symbols) {
        grid.correlate_all(y, sym, corr);
        for (int i = 0; i < n; ++i) sum[i] += corr[i];
    }
    double peak = 0.0;
    for (int i = 0; i < n; ++i) peak = std::max(peak, std::norm(sum[i]));
    return peak / noise_var_hat;
}

SimReport run_campaign(std::span<const double> rho, const OfdmConfig& cfg,
                       const CampaignConfig& cc) {
    if (cc.trials - cc.discard < 2)
        throw std::domain_error("run_campaign: need at least discard + 2 trials");

    // Power bookkeeping: g = 1, P = K (unit-magnitude subcarriers for the
    // uniform allocation), sigma^2 = K / gamma so that g P / sigma^2 = gamma.
    const double total_power = static_cast<double>(cfg.K);
    const double noise_var = cc.gamma > 0.0 ? total_power / cc.gamma : 1.0;
    const double signal_gain = cc.gamma > 0.0 ? 1.0 : 0.0;

    const CorrelatorGrid grid(cfg, cc.oversample);

    SimReport rep;
    rep.estimated_gamma = std::numeric_limits<double>::quiet_NaN();
    rep.estimated_gamma_raw = std::numeric_limits<double>::quiet_NaN();

    // Optional SNR measurement stage: uniform pilots, fixed channel phase.
    if (cc.snr_symbols > 0) {
        std::mt19937_64 rng(mix_seed(cc.seed, 0xfee1ull));
        const PowerAllocation uni = PowerAllocation::uniform(cfg.K);
        const PilotSymbol sym = make_symbol(uni.rho, total_power, PhaseRule::UnitPhase, rng);
        ChannelParams ch{signal_gain, cc.z0, 0.0, noise_var};
        std::vector<std::vector<cplx>> ys(cc.snr_symbols);
        for (int m = 0; m < cc.snr_symbols; ++m) ys[m] = apply_channel(sym, ch, cfg, rng);
        rep.estimated_gamma_raw = estimate_snr_raw(ys, sym, noise_var, grid);
        rep.estimated_gamma = rep.estimated_gamma_raw /
                              (static_cast<double>(cc.snr_symbols) * cc.snr_symbols * total_power);
    }

    // TOA measurement stage, one independent RNG substream per trial.
    std::vector<double> z_hat(cc.trials);
    const int n_threads = run_threads(cc.threads, cc.trials);
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int m = next.fetch_add(1);
            if (m >= cc.trials) return;
            std::mt19937_64 rng(mix_seed(cc.seed, static_cast<std::uint64_t>(m) + 1));
            ChannelParams ch;
            ch.gain = signal_gain;
            ch.noise_var = noise_var;
            std::uniform_real_distribution<double> uni_z(0.0, cfg.na);
            std::uniform_real_distribution<double> uni_phi(0.0, 2.0 * std::numbers::pi);
            ch.z0 = cc.draw_z0 ? uni_z(rng) : cc.z0;
            ch.phi0 = cc.scheme == DetectionScheme::Noncoherent ? uni_phi(rng) : 0.0;
            const PilotSymbol sym = make_symbol(rho, total_power, cc.phase_rule, rng);
            const auto y = apply_channel(sym, ch, cfg, rng);
            const std::optional<double> phi0_known =
                cc.scheme == DetectionScheme::Coherent ? std::optional<double>(ch.phi0)
                                                       : std::nullopt;
            double est = estimate_toa(y, sym, cc.scheme, phi0_known, grid);
            if (cc.draw_z0) est -= ch.z0;  // per-trial error when the prior is sampled
            z_hat[m] = est;
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const int used = cc.trials - cc.discard;
    double mean = 0.0;
    for (int m = cc.discard; m < cc.trials; ++m) mean += z_hat[m];
    mean /= used;
    double ss = 0.0;
    for (int m = cc.discard; m < cc.trials; ++m) ss += (z_hat[m] - mean) * (z_hat[m] - mean);

    rep.mean_estimate = mean;
    rep.trials_used = used;
    rep.rmse_samples = std::sqrt(ss / (used - 1));
    rep.rmse_seconds = rep.rmse_samples * cfg.sample_period();
    rep.rmse_meters = rep.rmse_seconds * kSpeedOfLight;
    return rep;
}

}  // namespace zzopt
