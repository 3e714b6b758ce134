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

#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "special_functions.hpp"

namespace zzopt {

void QuadratureSpec::validate() const {
    if (n_points < 64)
        throw std::invalid_argument("QuadratureSpec: n_points must be >= 64");
    if (rule == Rule::Simpson && n_points % 2 != 0)
        throw std::invalid_argument("QuadratureSpec: Simpson needs an even n_points");
}

AbPair AbPair::from_acf(double gamma, double lambda_an) {
    const double lam = std::clamp(lambda_an, 0.0, 1.0);
    const double s = std::sqrt(1.0 - lam);
    AbPair p;
    p.a = std::sqrt(0.5 * gamma * (1.0 - s));
    p.b = std::sqrt(0.5 * gamma * (1.0 + s));
    return p;
}

double pmin_coherent_acf(double gamma, double ac) {
    const double arg = std::max(gamma * (1.0 - ac), 0.0);
    return gaussian_q(std::sqrt(arg));
}

double pmin_noncoherent_acf(double gamma, double an) {
    const double lam = std::clamp(an, 0.0, 1.0 - 1e-15);
    if (an >= 1.0 - 1e-15) return 0.5;  // limit at the mainlobe peak
    const auto [a, b] = AbPair::from_acf(gamma, lam);
    const double ab = 0.5 * gamma * std::sqrt(lam);
    // exp(-gamma/2) I0(ab) carried in scaled form; ab <= gamma/2 keeps the
    // exponent nonpositive.
    const double bessel_term = 0.5 * bessel_i0_scaled(ab) * std::exp(ab - 0.5 * gamma);
    return std::clamp(marcum_q1(a, b) - bessel_term, 0.0, 0.5);
}

double pmin_coherent(double z, std::span<const double> rho, const BoundQuery& q) {
    return pmin_coherent_acf(q.gamma, acf_coherent(z, rho, q.cfg));
}

double pmin_noncoherent(double z, std::span<const double> rho, const BoundQuery& q) {
    return pmin_noncoherent_acf(q.gamma, acf_noncoherent(z, rho, q.cfg));
}

double pmin(double z, std::span<const double> rho, const BoundQuery& q) {
    return q.scheme == DetectionScheme::Coherent ? pmin_coherent(z, rho, q)
                                                 : pmin_noncoherent(z, rho, q);
}

AcfTable::AcfTable(const OfdmConfig& cfg, const QuadratureSpec& quad) : cfg_(cfg) {
    quad.validate();
    const int n = quad.n_points;
    const double h = cfg.na / n;
    z_.resize(n + 1);
    w_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        z_[i] = i * h;
        double qw;
        if (quad.rule == QuadratureSpec::Rule::Trapezoid) {
            qw = (i == 0 || i == n) ? 0.5 * h : h;
        } else {
            if (i == 0 || i == n) qw = h / 3.0;
            else qw = (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
        }
        w_[i] = qw * z_[i] * (cfg.na - z_[i]);
    }
    trig_.resize(2 * static_cast<size_t>(n + 1) * cfg.K);
    for (int i = 0; i <= n; ++i) {
        const double w = 2.0 * std::numbers::pi * z_[i] / cfg.K;
        for (int k = 0; k < cfg.K; ++k) {
            const double phase = w * subcarrier_distance(k, cfg.K);
            trig_[2 * (static_cast<size_t>(i) * cfg.K + k)] = std::cos(phase);
            trig_[2 * (static_cast<size_t>(i) * cfg.K + k) + 1] = std::sin(phase);
        }
    }
}

void AcfTable::sums(int i, std::span<const double> rho, double& c_out, double& s_out) const {
    const double* t = &trig_[2 * static_cast<size_t>(i) * cfg_.K];
    double c = 0.0, s = 0.0;
    for (int k = 0; k < cfg_.K; ++k) {
        c += rho[k] * t[2 * k];
        s += rho[k] * t[2 * k + 1];
    }
    c_out = c;
    s_out = s;
}

double zzb(std::span<const double> rho, const BoundQuery& q, const AcfTable& table) {
    const bool coherent = q.scheme == DetectionScheme::Coherent;
    double acc = 0.0;
    for (int i = 0; i < table.nodes(); ++i) {
        double c, s;
        table.sums(i, rho, c, s);
        const double p = coherent ? pmin_coherent_acf(q.gamma, c)
                                  : pmin_noncoherent_acf(q.gamma, c * c + s * s);
        acc += table.weight(i) * p;
    }
    const double ts = q.cfg.sample_period();
    return ts * ts / q.cfg.na * acc;
}

double zzb(std::span<const double> rho, const BoundQuery& q) {
    AcfTable table(q.cfg, q.quad);
    return zzb(rho, q, table);
}

double crlb(std::span<const double> rho, double gamma, const OfdmConfig& cfg) {
    double second_moment = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        const double d = subcarrier_distance(k, cfg.K);
        second_moment += d * d * rho[k];
    }
    if (!(gamma > 0.0) || !(second_moment > 0.0))
        throw std::domain_error("crlb: singular Fisher information");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 1.0 / (8.0 * pi2 * gamma * cfg.delta_f * cfg.delta_f * second_moment);
}

}  // namespace zzopt
