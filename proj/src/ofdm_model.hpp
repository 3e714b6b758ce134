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

#ifndef ZZOPT_OFDM_MODEL_HPP
#define ZZOPT_OFDM_MODEL_HPP

#include <span>
#include <vector>

namespace zzopt {

enum class DetectionScheme { Coherent, Noncoherent };

/// OFDM pilot configuration. Delays are expressed in samples of period Ts,
/// with the a-priori TOA window being [0, na] samples.
struct OfdmConfig {
    int K = 64;              // subcarrier count, even, >= 4
    double delta_f = 15625;  // subcarrier spacing [Hz]
    double na = 16;          // a-priori TOA window [samples], 0 < na <= K

    double sample_period() const { return 1.0 / (K * delta_f); }
    double prior_window_seconds() const { return na * sample_period(); }

    // Throws std::invalid_argument on a bad combination.
    static OfdmConfig make(int K, double delta_f, double na);
};

/// Signed frequency distance of subcarrier k from the carrier, in subcarriers:
/// k for k < K/2, k - K otherwise. Throws std::domain_error if k is out of range.
int subcarrier_distance(int k, int K);

/// Per-subcarrier normalized power vector. Feasible allocations live on the
/// unit simplex; the relaxed domain permits sum < 1.
struct PowerAllocation {
    std::vector<double> rho;

    int size() const { return static_cast<int>(rho.size()); }
    double sum() const;

    // Throws std::invalid_argument if any entry is negative or the total
    // exceeds 1 beyond rounding slack.
    void validate() const;

    static PowerAllocation uniform(int K);
    static PowerAllocation zeros(int K);
};

/// Real and imaginary parts of the normalized complex ACF at delay z:
/// C = sum_k rho[k] cos(2 pi z d[k]/K), S = sum_k rho[k] sin(2 pi z d[k]/K).
void acf_sums(double z, std::span<const double> rho, const OfdmConfig& cfg,
              double& c_out, double& s_out);

/// Normalized coherent ACF, in [-1, 1] for simplex allocations.
double acf_coherent(double z, std::span<const double> rho, const OfdmConfig& cfg);

/// Normalized noncoherent ACF |A(z,rho)|^2, in [0, 1].
double acf_noncoherent(double z, std::span<const double> rho, const OfdmConfig& cfg);

}  // namespace zzopt

#endif
