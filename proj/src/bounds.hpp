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

#ifndef ZZOPT_BOUNDS_HPP
#define ZZOPT_BOUNDS_HPP

#include <span>
#include <vector>

#include "ofdm_model.hpp"

namespace zzopt {

/// Deterministic composite quadrature over the prior window [0, Na].
/// n_points counts subintervals (so there are n_points + 1 nodes); Simpson
/// requires it even.
struct QuadratureSpec {
    enum class Rule { Trapezoid, Simpson };
    int n_points = 4096;
    Rule rule = Rule::Simpson;

    void validate() const;  // throws std::invalid_argument
};

/// Full input to one bound evaluation.
struct BoundQuery {
    DetectionScheme scheme = DetectionScheme::Coherent;
    double gamma = 0.0;  // integrated SNR, linear
    OfdmConfig cfg;
    QuadratureSpec quad;
};

/// Detector amplitudes of the noncoherent binary test:
/// a^2 + b^2 = gamma, a*b = (gamma/2) * sqrt(lambda).
struct AbPair {
    double a = 0.0;
    double b = 0.0;
    static AbPair from_acf(double gamma, double lambda_an);
};

/// Minimum binary-test error probabilities as functions of the ACF value.
double pmin_coherent_acf(double gamma, double ac);
double pmin_noncoherent_acf(double gamma, double an);

/// Same, evaluated at a delay for a given allocation.
double pmin_coherent(double z, std::span<const double> rho, const BoundQuery& q);
double pmin_noncoherent(double z, std::span<const double> rho, const BoundQuery& q);
double pmin(double z, std::span<const double> rho, const BoundQuery& q);

/// Precomputed cos/sin factors and quadrature weights on the z grid.
/// Shared by the bound, its derivatives, and the solvers so that values and
/// gradients are evaluated on the identical grid.
class AcfTable {
  public:
    AcfTable(const OfdmConfig& cfg, const QuadratureSpec& quad);

    const OfdmConfig& cfg() const { return cfg_; }
    int nodes() const { return static_cast<int>(z_.size()); }
    double z(int i) const { return z_[i]; }
    // Quadrature weight times the kernel z (Na - z); the Ts^2 / Na scale is
    // applied by the caller.
    double weight(int i) const { return w_[i]; }
    double cosv(int i, int k) const { return trig_[2 * (static_cast<size_t>(i) * cfg_.K + k)]; }
    double sinv(int i, int k) const { return trig_[2 * (static_cast<size_t>(i) * cfg_.K + k) + 1]; }

    void sums(int i, std::span<const double> rho, double& c_out, double& s_out) const;

  private:
    OfdmConfig cfg_;
    std::vector<double> z_, w_;
    std::vector<double> trig_;  // interleaved cos, sin
};

/// Ziv-Zakai bound on TOA variance [s^2] for the given allocation.
double zzb(std::span<const double> rho, const BoundQuery& q, const AcfTable& table);
double zzb(std::span<const double> rho, const BoundQuery& q);

/// Cramer-Rao bound on TOA variance [s^2]. Throws std::domain_error when the
/// Fisher information is singular (gamma <= 0 or all power at d = 0).
double crlb(std::span<const double> rho, double gamma, const OfdmConfig& cfg);

}  // namespace zzopt

#endif
