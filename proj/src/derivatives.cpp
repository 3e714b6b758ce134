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

#include "derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "special_functions.hpp"

namespace zzopt {
namespace {

constexpr double kPeakGuard = 1e-14;   // 1 - A_C below this counts as the peak
constexpr double kLambdaClampLo = 1e-12;
constexpr double kLambdaClampHi = 1.0 - 1e-12;

}  // namespace

std::vector<double> expand(std::span<const double> rho_tilde) {
    double s = 0.0;
    for (double v : rho_tilde) {
        if (!(v >= 0.0)) throw std::domain_error("expand: negative reduced entry");
        s += v;
    }
    if (s > 1.0 + 1e-12) throw std::domain_error("expand: reduced powers exceed 1");
    std::vector<double> rho(rho_tilde.size() + 1);
    rho[0] = 1.0 - s;
    std::copy(rho_tilde.begin(), rho_tilde.end(), rho.begin() + 1);
    return rho;
}

std::vector<double> reduce_gradient(std::span<const double> grad_full) {
    std::vector<double> g(grad_full.size() - 1);
    for (size_t n = 0; n < g.size(); ++n) g[n] = grad_full[n + 1] - grad_full[0];
    return g;
}

double dpmin_dlambda_coherent(double gamma, double lambda) {
    const double one_minus = 1.0 - lambda;
    if (one_minus < kPeakGuard) return 0.0;  // analytic limit at the peak
    return std::sqrt(gamma) / (2.0 * std::sqrt(2.0 * std::numbers::pi)) *
           std::exp(-0.5 * gamma * one_minus) / std::sqrt(one_minus);
}

double hess_scale_coherent(double gamma, double lambda) {
    const double one_minus = 1.0 - lambda;
    if (one_minus < kPeakGuard) return 0.0;
    return std::sqrt(gamma) / (4.0 * std::sqrt(2.0 * std::numbers::pi)) *
           std::exp(-0.5 * gamma * one_minus) *
           (gamma + 1.0 / one_minus) / std::sqrt(one_minus);
}

// Derivative of the noncoherent Pmin with respect to lambda = A_N. The Marcum
// chain terms and the Bessel term are combined algebraically so that the
// lambda -> 0 null is removable:
//   dPmin/dlambda = (gamma/8) e^{-gamma/2} [ ((1+s)/s) R1 + I0(ab)/s - R1 ],
// with s = sqrt(1 - lambda), ab = (gamma/2) sqrt(lambda), and
// R1 = I1(ab)/sqrt(lambda) which tends to gamma/4 as lambda -> 0.
double dpmin_dlambda_noncoherent(double gamma, double lambda) {
    if (gamma <= 0.0) return 0.0;
    const double lam = std::clamp(lambda, kLambdaClampLo, kLambdaClampHi);
    const double s = std::sqrt(1.0 - lam);
    const double sqrt_lam = std::sqrt(lam);
    const double ab = 0.5 * gamma * sqrt_lam;
    const double escale = std::exp(ab - 0.5 * gamma);  // e^{-gamma/2} absorbed
    double r1;  // e^{-gamma/2} I1(ab) / sqrt(lambda)
    if (ab < 1e-8) {
        r1 = 0.25 * gamma * std::exp(-0.5 * gamma);  // I1(x) ~ x/2
    } else {
        r1 = bessel_i1_scaled(ab) * escale / sqrt_lam;
    }
    const double i0 = bessel_i0_scaled(ab) * escale;
    return 0.125 * gamma * ((1.0 + s) / s * r1 + i0 / s - r1);
}

namespace {

// Reduced-space directional factors at one grid delay. For the coherent case
// d lambda / d rho_tilde[n] = cos_{n+1} - 1; for the noncoherent case
// d A_N / d rho_tilde[n] = 2 C (cos_{n+1} - 1) + 2 S sin_{n+1}.
void fill_dlambda_coherent(const AcfTable& t, int i, std::span<double> out) {
    const int km1 = t.cfg().K - 1;
    for (int n = 0; n < km1; ++n) out[n] = t.cosv(i, n + 1) - 1.0;
}

void fill_dlambda_noncoherent(const AcfTable& t, int i, double c, double s,
                              std::span<double> out) {
    const int km1 = t.cfg().K - 1;
    for (int n = 0; n < km1; ++n)
        out[n] = 2.0 * c * (t.cosv(i, n + 1) - 1.0) + 2.0 * s * t.sinv(i, n + 1);
}

}  // namespace

std::vector<double> grad_pmin_coherent(double z, std::span<const double> rho_tilde,
                                       double gamma, const OfdmConfig& cfg) {
    const auto rho = expand(rho_tilde);
    const double lambda = acf_coherent(z, rho, cfg);
    const double dp = dpmin_dlambda_coherent(gamma, lambda);
    std::vector<double> g(rho_tilde.size());
    const double w = 2.0 * std::numbers::pi * z / cfg.K;
    for (size_t n = 0; n < g.size(); ++n)
        g[n] = dp * (std::cos(w * subcarrier_distance(static_cast<int>(n) + 1, cfg.K)) - 1.0);
    return g;
}

Matrix hess_pmin_coherent(double z, std::span<const double> rho_tilde,
                          double gamma, const OfdmConfig& cfg) {
    const auto rho = expand(rho_tilde);
    const double lambda = acf_coherent(z, rho, cfg);
    const double scale = hess_scale_coherent(gamma, lambda);
    const int km1 = static_cast<int>(rho_tilde.size());
    Matrix h(km1);
    if (scale == 0.0) return h;
    std::vector<double> u(km1);
    const double w = 2.0 * std::numbers::pi * z / cfg.K;
    for (int n = 0; n < km1; ++n)
        u[n] = std::cos(w * subcarrier_distance(n + 1, cfg.K)) - 1.0;
    for (int n = 0; n < km1; ++n)
        for (int m = 0; m < km1; ++m) h.at(n, m) = scale * u[n] * u[m];
    return h;
}

std::vector<double> grad_pmin_noncoherent(double z, std::span<const double> rho_tilde,
                                          double gamma, const OfdmConfig& cfg) {
    const auto rho = expand(rho_tilde);
    double c, s;
    acf_sums(z, rho, cfg, c, s);
    const double dp = dpmin_dlambda_noncoherent(gamma, c * c + s * s);
    std::vector<double> g(rho_tilde.size());
    const double w = 2.0 * std::numbers::pi * z / cfg.K;
    for (size_t n = 0; n < g.size(); ++n) {
        const double phase = w * subcarrier_distance(static_cast<int>(n) + 1, cfg.K);
        g[n] = dp * (2.0 * c * (std::cos(phase) - 1.0) + 2.0 * s * std::sin(phase));
    }
    return g;
}

GradientRecord grad_zzb(std::span<const double> rho_tilde, const BoundQuery& q,
                        const AcfTable& table, bool want_hessian) {
    if (want_hessian && q.scheme != DetectionScheme::Coherent)
        throw std::invalid_argument("grad_zzb: Hessian is only available for the coherent scheme");
    const int km1 = static_cast<int>(rho_tilde.size());
    const auto rho = expand(rho_tilde);
    const bool coherent = q.scheme == DetectionScheme::Coherent;

    GradientRecord rec;
    rec.grad.assign(km1, 0.0);
    if (want_hessian) rec.hessian.emplace(km1);

    std::vector<double> dlam(km1);
    double value = 0.0;
    for (int i = 0; i < table.nodes(); ++i) {
        const double w = table.weight(i);
        double c, s;
        table.sums(i, rho, c, s);
        if (coherent) {
            value += w * pmin_coherent_acf(q.gamma, c);
            const double dp = dpmin_dlambda_coherent(q.gamma, c);
            if (dp != 0.0 && w != 0.0) {
                fill_dlambda_coherent(table, i, dlam);
                for (int n = 0; n < km1; ++n) rec.grad[n] += w * dp * dlam[n];
            }
            if (want_hessian) {
                const double hs = hess_scale_coherent(q.gamma, c);
                if (hs != 0.0 && w != 0.0) {
                    fill_dlambda_coherent(table, i, dlam);
                    Matrix& h = *rec.hessian;
                    const double whs = w * hs;
                    for (int n = 0; n < km1; ++n) {
                        const double un = whs * dlam[n];
                        for (int m = 0; m < km1; ++m) h.at(n, m) += un * dlam[m];
                    }
                }
            }
        } else {
            const double lambda = c * c + s * s;
            value += w * pmin_noncoherent_acf(q.gamma, lambda);
            const double dp = dpmin_dlambda_noncoherent(q.gamma, lambda);
            if (dp != 0.0 && w != 0.0) {
                fill_dlambda_noncoherent(table, i, c, s, dlam);
                for (int n = 0; n < km1; ++n) rec.grad[n] += w * dp * dlam[n];
            }
        }
    }

    const double ts = q.cfg.sample_period();
    const double scale = ts * ts / q.cfg.na;
    rec.value = scale * value;
    for (double& g : rec.grad) g *= scale;
    if (rec.hessian)
        for (double& h : rec.hessian->data) h *= scale;
    return rec;
}

GradientRecord grad_zzb(std::span<const double> rho_tilde, const BoundQuery& q,
                        bool want_hessian) {
    AcfTable table(q.cfg, q.quad);
    return grad_zzb(rho_tilde, q, table, want_hessian);
}

}  // namespace zzopt
