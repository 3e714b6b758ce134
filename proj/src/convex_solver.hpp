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

#ifndef ZZOPT_CONVEX_SOLVER_HPP
#define ZZOPT_CONVEX_SOLVER_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "bounds.hpp"
#include "ofdm_model.hpp"

namespace zzopt {

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The power-budget problem, optionally with subcarriers pinned to zero or to
/// a fixed level 1/L (the branch-and-bound relaxed subproblem). Empty pin
/// sets recover the plain simplex-constrained problem.
struct ConvexProblem {
    BoundQuery query;
    std::vector<int> pinned_zero;   // K0
    std::vector<int> pinned_power;  // K1
    double pin_level = 0.0;         // power of each K1 subcarrier (1/L)

    void validate() const;  // throws InfeasibleError / std::invalid_argument
};

struct SolveReport {
    PowerAllocation rho_star;
    double objective = 0.0;  // ZZB [s^2]
    int iterations = 0;
    double first_order_residual = 0.0;
    bool converged = false;
};

struct SolverOptions {
    int max_iter = 200;
    double tol = 1e-7;  // gradient-mapping residual, objective-scaled
};

/// Euclidean projection onto {x >= 0, sum x = mass} by sort-and-threshold.
std::vector<double> project_simplex(std::span<const double> v, double mass);

/// Euclidean projection onto the problem's feasible set: pinned coordinates
/// are set directly, free coordinates are projected onto the simplex carrying
/// the remaining mass.
PowerAllocation project_constrained_simplex(std::span<const double> v,
                                            const ConvexProblem& problem);

/// Projected-gradient solve (Barzilai-Borwein trial step, Armijo
/// backtracking, monotone). Deterministic for fixed inputs.
SolveReport solve(const ConvexProblem& problem, const AcfTable& table,
                  const PowerAllocation* init = nullptr,
                  const SolverOptions& opts = {});
SolveReport solve(const ConvexProblem& problem,
                  const PowerAllocation* init = nullptr,
                  const SolverOptions& opts = {});

}  // namespace zzopt

#endif
