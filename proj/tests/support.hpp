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

#ifndef ZZOPT_TESTS_SUPPORT_HPP
#define ZZOPT_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "derivatives.hpp"

namespace testsupport {

// Uniform point on the open simplex of the given dimension and mass, via
// normalized exponentials.
inline std::vector<double> random_simplex(int n, double mass, std::mt19937_64& rng) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> v(n);
    double s = 0.0;
    for (double& x : v) {
        x = ex(rng);
        s += x;
    }
    for (double& x : v) x *= mass / s;
    return v;
}

// Interior reduced allocation: full-simplex draw with the first coordinate
// dropped, blended toward uniform so every subcarrier keeps power at least
// 0.1/K. Finite-difference probes then stay inside the feasible set.
inline std::vector<double> random_interior_reduced(int K, std::mt19937_64& rng) {
    const auto full = random_simplex(K, 1.0, rng);
    std::vector<double> rt(full.begin() + 1, full.end());
    for (double& v : rt) v = 0.9 * v + 0.1 / K;
    return rt;
}

// Eigenvalues of a symmetric matrix by the cyclic Jacobi method.
inline std::vector<double> symmetric_eigenvalues(const zzopt::Matrix& m) {
    const int n = m.n;
    std::vector<double> a = m.data;
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    return eig;
}

inline double rel_err(double got, double want) {
    const double denom = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / denom;
}

}  // namespace testsupport

#endif
