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

#include "special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zzopt {
namespace {

constexpr double kSeriesCutoff = 20.0;  // power series below, asymptotic above

// Power series sum_l (x^2/4)^l / (l! * (l+n)!) * (x/2)^n for n in {0, 1}.
double bessel_series(int n, double x) {
    const double q = 0.25 * x * x;
    double term = n == 0 ? 1.0 : 0.5 * x;
    double sum = term;
    for (int l = 1; l < 200; ++l) {
        term *= q / (static_cast<double>(l) * (l + n));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

// Asymptotic expansion of exp(-x) I_n(x), valid for large x. Terms are summed
// until they stop decreasing or fall below the rounding floor.
double bessel_asymptotic_scaled(int n, double x) {
    const double mu = 4.0 * n * n;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (odd * odd - mu) / (8.0 * x * k);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

void check_bessel_arg(double x) {
    if (!(x >= 0.0)) throw std::domain_error("bessel_i: requires x >= 0");
}

// Poisson pmf exp(-mean) mean^k / k!, computed in log space.
double log_poisson_pmf(int k, double mean) {
    return k * std::log(mean) - mean - std::lgamma(k + 1.0);
}

}  // namespace

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bessel_i0_scaled(double x) {
    check_bessel_arg(x);
    if (x <= kSeriesCutoff) return bessel_series(0, x) * std::exp(-x);
    return bessel_asymptotic_scaled(0, x);
}

double bessel_i1_scaled(double x) {
    check_bessel_arg(x);
    if (x <= kSeriesCutoff) return bessel_series(1, x) * std::exp(-x);
    return bessel_asymptotic_scaled(1, x);
}

double bessel_i0(double x) {
    check_bessel_arg(x);
    if (x <= kSeriesCutoff) return bessel_series(0, x);
    return bessel_asymptotic_scaled(0, x) * std::exp(x);
}

double bessel_i1(double x) {
    check_bessel_arg(x);
    if (x <= kSeriesCutoff) return bessel_series(1, x);
    return bessel_asymptotic_scaled(1, x) * std::exp(x);
}

double bessel_i(int n, double x) {
    if (n != 0 && n != 1) throw std::domain_error("bessel_i: order must be 0 or 1");
    return n == 0 ? bessel_i0(x) : bessel_i1(x);
}

// Q1(a,b) = sum_k PoissonPmf(k; a^2/2) * PoissonCdf(k; b^2/2). The sum is
// anchored at the Poisson mode k0 = floor(a^2/2) and expanded in both
// directions so that no term underflows on the way to the bulk of the mass.
double marcum_q1(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("marcum_q1: requires finite a, b >= 0");

    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (x == 0.0) return std::exp(-y);
    if (y == 0.0) return 1.0;

    constexpr double kTol = 1e-15;
    const int k0 = static_cast<int>(std::floor(x));

    const double lp0 = log_poisson_pmf(k0, x);
    const double lt0 = log_poisson_pmf(k0, y);
    const double p0 = std::exp(lp0);
    double t0 = std::exp(lt0);

    // Lower Poisson CDF of mean y at k0.
    double cdf0 = 0.0;
    if (lt0 > -690.0) {
        double t = t0;
        for (int j = k0; j >= 0; --j) {
            cdf0 += t;
            if (t < kTol * cdf0 && j < y) break;
            t *= j / y;
        }
    } else {
        // t0 underflowed; rebuild each needed term in log space.
        for (int j = k0; j >= 0; --j) {
            const double lt = log_poisson_pmf(j, y);
            if (lt > -745.0) cdf0 += std::exp(lt);
            else if (j < y) break;
        }
        t0 = 0.0;
    }
    cdf0 = std::min(cdf0, 1.0);

    double sum = p0 * cdf0;

    // Upward from the mode. Past both means the pmf decays geometrically and
    // the CDF saturates, so the running sum bounds the truncated tail.
    {
        double p = p0, t = t0, cdf = cdf0;
        for (int k = k0 + 1; k < k0 + 200000; ++k) {
            p *= x / k;
            if (t == 0.0) {
                const double lt = log_poisson_pmf(k, y);
                if (lt > -745.0) t = std::exp(lt);
            } else {
                t *= y / k;
            }
            cdf = std::min(cdf + t, 1.0);
            sum += p * cdf;
            if (k > x && k > y && p < kTol * sum) break;
        }
    }

    // Downward from the mode. The CDF shrinks alongside the pmf, so the
    // products stay well scaled.
    {
        double p = p0, t = t0, cdf = cdf0;
        for (int k = k0 - 1; k >= 0; --k) {
            p *= (k + 1) / x;
            cdf = std::max(cdf - t, 0.0);
            t = (t == 0.0 && y > 0.0) ? std::exp(log_poisson_pmf(k, y)) : t * (k + 1) / y;
            sum += p * cdf;
            if (p * cdf < kTol * sum && p < kTol) break;
        }
    }

    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace zzopt
