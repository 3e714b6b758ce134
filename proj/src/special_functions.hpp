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

#ifndef ZZOPT_SPECIAL_FUNCTIONS_HPP
#define ZZOPT_SPECIAL_FUNCTIONS_HPP

namespace zzopt {

/// Gaussian tail probability Q(x) = 0.5 * erfc(x / sqrt(2)).
double gaussian_q(double x);

/// Modified Bessel functions of the first kind, orders 0 and 1, x >= 0.
/// The *_scaled variants return exp(-x) * I_n(x) and never overflow.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);

/// Order-dispatched form; n must be 0 or 1, x >= 0 (throws std::domain_error).
double bessel_i(int n, double x);

/// First-order Marcum Q function Q1(a, b), a, b >= 0 (throws std::domain_error
/// on negative or non-finite input). Result is clamped to [0, 1].
double marcum_q1(double a, double b);

}  // namespace zzopt

#endif
