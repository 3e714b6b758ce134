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

#include "ofdm_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zzopt {

OfdmConfig OfdmConfig::make(int K, double delta_f, double na) {
    if (K < 4 || K % 2 != 0)
        throw std::invalid_argument("OfdmConfig: K must be even and >= 4");
    if (!(delta_f > 0))
        throw std::invalid_argument("OfdmConfig: delta_f must be positive");
    if (!(na > 0) || na > static_cast<double>(K))
        throw std::invalid_argument("OfdmConfig: need 0 < na <= K");
    return OfdmConfig{K, delta_f, na};
}

int subcarrier_distance(int k, int K) {
    if (k < 0 || k >= K)
        throw std::domain_error("subcarrier_distance: index out of range");
    return k < K / 2 ? k : k - K;
}

double PowerAllocation::sum() const {
    double s = 0.0;
    for (double v : rho) s += v;
    return s;
}

void PowerAllocation::validate() const {
    for (double v : rho) {
        if (!(v >= 0.0))
            throw std::invalid_argument("PowerAllocation: negative entry");
    }
    if (sum() > 1.0 + 1e-12)
        throw std::invalid_argument("PowerAllocation: total power exceeds 1");
}

PowerAllocation PowerAllocation::uniform(int K) {
    return PowerAllocation{std::vector<double>(K, 1.0 / K)};
}

PowerAllocation PowerAllocation::zeros(int K) {
    return PowerAllocation{std::vector<double>(K, 0.0)};
}

void acf_sums(double z, std::span<const double> rho, const OfdmConfig& cfg,
              double& c_out, double& s_out) {
    const int K = cfg.K;
    const double w = 2.0 * std::numbers::pi * z / K;
    double c = 0.0, s = 0.0;
    for (int k = 0; k < K; ++k) {
        if (rho[k] == 0.0) continue;
        const double phase = w * subcarrier_distance(k, K);
        c += rho[k] * std::cos(phase);
        s += rho[k] * std::sin(phase);
    }
    c_out = c;
    s_out = s;
}

double acf_coherent(double z, std::span<const double> rho, const OfdmConfig& cfg) {
    double c, s;
    acf_sums(z, rho, cfg, c, s);
    return c;
}

double acf_noncoherent(double z, std::span<const double> rho, const OfdmConfig& cfg) {
    double c, s;
    acf_sums(z, rho, cfg, c, s);
    return c * c + s * s;
}

}  // namespace zzopt
