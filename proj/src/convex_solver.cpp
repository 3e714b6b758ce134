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

#include "convex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "derivatives.hpp"

namespace zzopt {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

bool contains(const std::vector<int>& v, int k) {
    return std::find(v.begin(), v.end(), k) != v.end();
}

// Reduced-space view of the constraint set. Coordinate n maps to subcarrier
// n + 1; subcarrier 0 carries the leftover mass.
struct ReducedConstraints {
    std::vector<double> fixed;  // fixed value per coordinate, or -1 if free
    std::vector<int> free_idx;
    double free_mass = 0.0;   // mass available to free coordinates
    bool equality = false;    // true when subcarrier 0 is pinned

    void project(std::vector<double>& x) const {
        for (size_t n = 0; n < fixed.size(); ++n)
            if (fixed[n] >= 0.0) x[n] = fixed[n];
        if (free_idx.empty()) return;
        std::vector<double> v(free_idx.size());
        for (size_t i = 0; i < free_idx.size(); ++i) v[i] = x[free_idx[i]];
        bool need_simplex = equality;
        if (!equality) {
            double s = 0.0;
            for (double& vi : v) {
                vi = std::max(vi, 0.0);
                s += vi;
            }
            need_simplex = s > free_mass;
        }
        if (need_simplex) {
            v = project_simplex(v, free_mass);
            // Large pre-projection entries leave rounding residue in the
            // threshold subtraction; rescale so the free mass is exact.
            double s2 = 0.0;
            for (double vi : v) s2 += vi;
            if (s2 > 0.0) {
                const double scale = free_mass / s2;
                for (double& vi : v) vi *= scale;
            }
        }
        for (size_t i = 0; i < free_idx.size(); ++i) x[free_idx[i]] = v[i];
    }
};

ReducedConstraints reduce_constraints(const ConvexProblem& p) {
    const int K = p.query.cfg.K;
    ReducedConstraints rc;
    rc.fixed.assign(K - 1, -1.0);
    double pinned_sum = 0.0;
    for (int k : p.pinned_zero)
        if (k >= 1) rc.fixed[k - 1] = 0.0;
    for (int k : p.pinned_power)
        if (k >= 1) {
            rc.fixed[k - 1] = p.pin_level;
            pinned_sum += p.pin_level;
        }
    double mass = 1.0 - pinned_sum;
    if (contains(p.pinned_zero, 0)) {
        rc.equality = true;
    } else if (contains(p.pinned_power, 0)) {
        rc.equality = true;
        mass -= p.pin_level;
    }
    if (mass < -1e-12) throw InfeasibleError("pinned power exceeds the budget");
    rc.free_mass = std::max(mass, 0.0);
    for (int n = 0; n < K - 1; ++n)
        if (rc.fixed[n] < 0.0) rc.free_idx.push_back(n);
    if (rc.free_idx.empty() && rc.equality && rc.free_mass > 1e-10)
        throw InfeasibleError("no free subcarrier left to carry the remaining power");
    return rc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

void ConvexProblem::validate() const {
    for (int k : pinned_zero)
        if (contains(pinned_power, k))
            throw InfeasibleError("a subcarrier is pinned to both zero and power");
    for (int k : pinned_zero)
        if (k < 0 || k >= query.cfg.K)
            throw std::invalid_argument("pinned_zero index out of range");
    for (int k : pinned_power)
        if (k < 0 || k >= query.cfg.K)
            throw std::invalid_argument("pinned_power index out of range");
    if (pin_level < 0.0 || static_cast<double>(pinned_power.size()) * pin_level > 1.0 + 1e-12)
        throw InfeasibleError("pinned power exceeds the budget");
}

std::vector<double> project_simplex(std::span<const double> v, double mass) {
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, theta = 0.0;
    int support = 0;
    for (size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        const double t = (cum - mass) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) {
            theta = t;
            support = static_cast<int>(j + 1);
        }
    }
    if (support == 0) theta = (cum - mass) / static_cast<double>(u.size());
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

PowerAllocation project_constrained_simplex(std::span<const double> v,
                                            const ConvexProblem& problem) {
    problem.validate();
    const int K = problem.query.cfg.K;
    PowerAllocation out = PowerAllocation::zeros(K);
    std::vector<int> free_idx;
    double pinned_mass = 0.0;
    for (int k = 0; k < K; ++k) {
        if (contains(problem.pinned_zero, k)) {
            out.rho[k] = 0.0;
        } else if (contains(problem.pinned_power, k)) {
            out.rho[k] = problem.pin_level;
            pinned_mass += problem.pin_level;
        } else {
            free_idx.push_back(k);
        }
    }
    const double mass = 1.0 - pinned_mass;
    if (mass < -1e-12) throw InfeasibleError("pinned power exceeds the budget");
    if (free_idx.empty()) {
        if (mass > 1e-10) throw InfeasibleError("no free subcarrier left for remaining power");
        return out;
    }
    std::vector<double> sub(free_idx.size());
    for (size_t i = 0; i < sub.size(); ++i) sub[i] = v[free_idx[i]];
    sub = project_simplex(sub, std::max(mass, 0.0));
    for (size_t i = 0; i < sub.size(); ++i) out.rho[free_idx[i]] = sub[i];
    return out;
}

SolveReport solve(const ConvexProblem& problem, const AcfTable& table,
                  const PowerAllocation* init, const SolverOptions& opts) {
    problem.validate();
    const ReducedConstraints rc = reduce_constraints(problem);
    const int km1 = problem.query.cfg.K - 1;

    std::vector<double> x(km1, 0.0);
    if (init) {
        std::copy(init->rho.begin() + 1, init->rho.end(), x.begin());
    } else {
        // Uniform over free subcarriers (subcarrier 0 included when free).
        const int n_free = static_cast<int>(rc.free_idx.size()) + (rc.equality ? 0 : 1);
        const double level = n_free > 0 ? rc.free_mass / n_free : 0.0;
        for (int n : rc.free_idx) x[n] = level;
    }
    rc.project(x);

    const auto eval_value = [&](const std::vector<double>& xt) {
        return grad_zzb(xt, problem.query, table, false).value;
    };

    GradientRecord cur = grad_zzb(x, problem.query, table, false);

    SolveReport rep;
    rep.first_order_residual = 0.0;
    double step = 0.0;
    std::vector<double> prev_x, prev_g;

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const double fscale = std::max(std::abs(cur.value), 1e-300);
        // Gradient-mapping residual with an objective-normalized step.
        std::vector<double> probe = x;
        for (int n = 0; n < km1; ++n) probe[n] -= cur.grad[n] / fscale;
        rc.project(probe);
        double res = 0.0;
        for (int n = 0; n < km1; ++n) res += (x[n] - probe[n]) * (x[n] - probe[n]);
        rep.first_order_residual = std::sqrt(res);
        if (rep.first_order_residual <= opts.tol) {
            rep.converged = true;
            break;
        }

        // Trial step: Barzilai-Borwein when history exists.
        if (prev_x.empty()) {
            step = 1.0 / std::max(norm2(cur.grad), 1e-300);
        } else {
            std::vector<double> dx(km1), dg(km1);
            for (int n = 0; n < km1; ++n) {
                dx[n] = x[n] - prev_x[n];
                dg[n] = cur.grad[n] - prev_g[n];
            }
            const double num = dot(dx, dx), den = dot(dx, dg);
            if (den > 0.0 && std::isfinite(num / den)) step = num / den;
        }

        prev_x = x;
        prev_g = cur.grad;

        bool accepted = false;
        double t = step;
        std::vector<double> xn(km1);
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            xn = x;
            for (int n = 0; n < km1; ++n) xn[n] -= t * cur.grad[n];
            rc.project(xn);
            double dirderiv = 0.0, move = 0.0;
            for (int n = 0; n < km1; ++n) {
                dirderiv += cur.grad[n] * (xn[n] - x[n]);
                move += (xn[n] - x[n]) * (xn[n] - x[n]);
            }
            if (move == 0.0) break;  // projection pinned us; no progress at this step
            const double fn = eval_value(xn);
            if (fn <= cur.value + kArmijo * dirderiv) {
                x = xn;
                cur = grad_zzb(x, problem.query, table, false);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // stagnation; residual already recorded
    }

    rep.iterations = it;
    rep.objective = cur.value;
    rep.rho_star.rho = expand(x);
    // Pin exactness: expand() reconstructs subcarrier 0 from the free mass.
    for (int k : problem.pinned_zero)
        if (k == 0) rep.rho_star.rho[0] = 0.0;
    for (int k : problem.pinned_power)
        if (k == 0) rep.rho_star.rho[0] = problem.pin_level;
    return rep;
}

SolveReport solve(const ConvexProblem& problem, const PowerAllocation* init,
                  const SolverOptions& opts) {
    AcfTable table(problem.query.cfg, problem.query.quad);
    return solve(problem, table, init, opts);
}

}  // namespace zzopt
