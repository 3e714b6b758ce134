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

#ifndef ZZOPT_DERIVATIVES_HPP
#define ZZOPT_DERIVATIVES_HPP

#include <optional>
#include <span>
#include <vector>

#include "bounds.hpp"
#include "ofdm_model.hpp"

namespace zzopt {

/// Dense symmetric matrix, row major. Small sizes only ((K-1) x (K-1)).
struct Matrix {
    int n = 0;
    std::vector<double> data;

    explicit Matrix(int n_ = 0) : n(n_), data(static_cast<size_t>(n_) * n_, 0.0) {}
    double& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
};

/// The sum-to-one constraint is removed by optimizing over the reduced vector
/// rho_tilde of subcarriers 1..K-1; subcarrier 0 absorbs the remainder.
/// expand maps rho_tilde -> rho with rho[0] = 1 - sum(rho_tilde).
std::vector<double> expand(std::span<const double> rho_tilde);
/// Adjoint of the expansion: maps a full-space gradient to reduced space,
/// g_tilde[n] = g[n+1] - g[0].
std::vector<double> reduce_gradient(std::span<const double> grad_full);

/// d Pmin / d lambda where lambda is the respective ACF value. Singular points
/// (lambda at the mainlobe peak, or a deep null for the noncoherent Bessel
/// term) are replaced by their analytic limits.
double dpmin_dlambda_coherent(double gamma, double lambda);
double dpmin_dlambda_noncoherent(double gamma, double lambda);
/// Scalar factor of the rank-1 coherent Pmin Hessian (nonnegative).
double hess_scale_coherent(double gamma, double lambda);

/// Pointwise derivative operators of the detection error probabilities with
/// respect to rho_tilde, at delay z.
std::vector<double> grad_pmin_coherent(double z, std::span<const double> rho_tilde,
                                       double gamma, const OfdmConfig& cfg);
Matrix hess_pmin_coherent(double z, std::span<const double> rho_tilde,
                          double gamma, const OfdmConfig& cfg);
std::vector<double> grad_pmin_noncoherent(double z, std::span<const double> rho_tilde,
                                          double gamma, const OfdmConfig& cfg);

struct GradientRecord {
    double value = 0.0;                // ZZB [s^2]
    std::vector<double> grad;          // length K-1
    std::optional<Matrix> hessian;     // coherent only, on request
};

/// ZZB value, gradient, and (optionally, coherent scheme only) Hessian with
/// respect to rho_tilde, all on the same quadrature grid as zzb().
GradientRecord grad_zzb(std::span<const double> rho_tilde, const BoundQuery& q,
                        const AcfTable& table, bool want_hessian = false);
GradientRecord grad_zzb(std::span<const double> rho_tilde, const BoundQuery& q,
                        bool want_hessian = false);

}  // namespace zzopt

#endif
