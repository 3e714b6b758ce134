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

#ifndef ZZOPT_INTEGER_SOLVER_HPP
#define ZZOPT_INTEGER_SOLVER_HPP

#include <optional>
#include <vector>

#include "bounds.hpp"
#include "convex_solver.hpp"
#include "ofdm_model.hpp"

namespace zzopt {

/// One node of the best-first search: binary pin decisions made so far plus
/// the relaxation solved under them.
struct Subproblem {
    std::vector<int> pinned_zero;   // K0
    std::vector<int> pinned_power;  // K1
    PowerAllocation relaxed_solution;
    double lower_bound = 0.0;
};

struct BnbConfig {
    int L = 8;                      // pilot subcarrier count
    double delta_tol = 0.01;        // relative optimality gap target
    int n_iter = 2000;              // iteration cap
    std::optional<int> pin_anchor;  // subcarrier forced into K1
    // When no anchor is given, the noncoherent scheme pins the most negative
    // frequency distance (k = K/2) to remove the shift-invariance degeneracy.
    bool auto_anchor = true;
    SolverOptions relax_opts;       // options for the relaxation solves
};

struct BnbReport {
    PowerAllocation rho_star;   // exactly L entries at 1/L
    double upper_bound = 0.0;   // ZZB of the incumbent [s^2]
    double best_lower_bound = 0.0;
    double gap = 0.0;           // (UB - LB) / LB
    int iterations = 0;
    int nodes_explored = 0;
};

/// Integer-feasible rounding: the L largest powers get 1/L each, ties broken
/// toward the lowest subcarrier index. Throws std::domain_error if L > K.
PowerAllocation round_max_l(const PowerAllocation& rho, int L);

/// Most fractional free coordinate: argmin |rho[k] - 1/(2L)| over free k,
/// lowest index on ties. Throws InfeasibleError when no free index exists.
int branch_index(const Subproblem& sub, int L, int K);

BnbReport solve_bnb(const BoundQuery& query, const BnbConfig& bnb, const AcfTable& table);
BnbReport solve_bnb(const BoundQuery& query, const BnbConfig& bnb);

}  // namespace zzopt

#endif
