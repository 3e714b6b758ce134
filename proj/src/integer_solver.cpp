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

#include "integer_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace zzopt {
namespace {

struct QueueNode {
    Subproblem sub;
    uint64_t seq = 0;  // FIFO tie-break on equal lower bounds
};

struct NodeOrder {
    bool operator()(const QueueNode& a, const QueueNode& b) const {
        if (a.sub.lower_bound != b.sub.lower_bound)
            return a.sub.lower_bound > b.sub.lower_bound;
        return a.seq > b.seq;
    }
};

bool contains(const std::vector<int>& v, int k) {
    return std::find(v.begin(), v.end(), k) != v.end();
}

// Rounding used for incumbents; a pinned anchor is forced into the support.
PowerAllocation round_candidate(const PowerAllocation& rho, int L,
                                const std::optional<int>& anchor) {
    if (!anchor) return round_max_l(rho, L);
    PowerAllocation boosted = rho;
    boosted.rho[*anchor] += 2.0;  // guarantees top-L membership
    return round_max_l(boosted, L);
}

}  // namespace

PowerAllocation round_max_l(const PowerAllocation& rho, int L) {
    const int K = rho.size();
    if (L > K || L < 1) throw std::domain_error("round_max_l: need 1 <= L <= K");
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return rho.rho[a] > rho.rho[b];  // stable keeps lowest index first on ties
    });
    PowerAllocation out = PowerAllocation::zeros(K);
    for (int i = 0; i < L; ++i) out.rho[order[i]] = 1.0 / L;
    return out;
}

int branch_index(const Subproblem& sub, int L, int K) {
    const double target = 1.0 / (2.0 * L);
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        if (contains(sub.pinned_zero, k) || contains(sub.pinned_power, k)) continue;
        const double dist = std::abs(sub.relaxed_solution.rho[k] - target);
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    if (best < 0) throw InfeasibleError("branch_index: no free subcarrier");
    return best;
}

BnbReport solve_bnb(const BoundQuery& query, const BnbConfig& bnb, const AcfTable& table) {
    const int K = query.cfg.K;
    if (bnb.L < 1 || bnb.L > K) throw std::invalid_argument("solve_bnb: need 1 <= L <= K");
    std::optional<int> anchor = bnb.pin_anchor;
    if (!anchor && bnb.auto_anchor && query.scheme == DetectionScheme::Noncoherent)
        anchor = K / 2;  // most negative frequency distance
    if (anchor && (*anchor < 0 || *anchor >= K))
        throw std::invalid_argument("solve_bnb: pin_anchor out of range");

    const double pin_level = 1.0 / bnb.L;
    const auto solve_relaxation = [&](const std::vector<int>& k0, const std::vector<int>& k1,
                                      const PowerAllocation* warm) {
        ConvexProblem p;
        p.query = query;
        p.pinned_zero = k0;
        p.pinned_power = k1;
        p.pin_level = pin_level;
        PowerAllocation init;
        const PowerAllocation* initp = nullptr;
        if (warm) {
            init = project_constrained_simplex(warm->rho, p);
            initp = &init;
        }
        return solve(p, table, initp, bnb.relax_opts);
    };

    // Root relaxation.
    Subproblem root;
    if (anchor) root.pinned_power.push_back(*anchor);
    SolveReport root_rep = solve_relaxation(root.pinned_zero, root.pinned_power, nullptr);
    root.relaxed_solution = root_rep.rho_star;
    root.lower_bound = root_rep.objective;

    BnbReport rep;
    rep.rho_star = round_candidate(root.relaxed_solution, bnb.L, anchor);
    rep.upper_bound = zzb(rep.rho_star.rho, query, table);
    rep.best_lower_bound = root.lower_bound;
    rep.nodes_explored = 1;

    std::priority_queue<QueueNode, std::vector<QueueNode>, NodeOrder> queue;
    uint64_t seq = 0;
    queue.push({root, seq++});

    int iter = 0;
    bool gap_met = false;
    while (iter < bnb.n_iter && !queue.empty()) {
        Subproblem node = queue.top().sub;
        queue.pop();
        if (node.lower_bound >= rep.upper_bound) continue;  // UB improved since insertion

        rep.best_lower_bound = node.lower_bound;
        rep.gap = (rep.upper_bound - node.lower_bound) / node.lower_bound;
        if (rep.gap <= bnb.delta_tol) {
            gap_met = true;
            break;
        }

        int kb;
        try {
            kb = branch_index(node, bnb.L, K);
        } catch (const InfeasibleError&) {
            ++iter;
            continue;  // fully pinned node, nothing to branch on
        }

        for (int which = 0; which < 2; ++which) {
            std::vector<int> k0 = node.pinned_zero;
            std::vector<int> k1 = node.pinned_power;
            if (which == 0) k0.push_back(kb);
            else k1.push_back(kb);
            if (static_cast<int>(k1.size()) > bnb.L) continue;          // infeasible child
            if (K - static_cast<int>(k0.size()) < bnb.L) continue;      // cannot reach L pilots

            SolveReport child_rep;
            try {
                child_rep = solve_relaxation(k0, k1, &node.relaxed_solution);
            } catch (const InfeasibleError&) {
                continue;
            }
            ++rep.nodes_explored;

            const PowerAllocation cand = round_candidate(child_rep.rho_star, bnb.L, anchor);
            const double cand_obj = zzb(cand.rho, query, table);
            if (cand_obj < rep.upper_bound) {
                rep.upper_bound = cand_obj;
                rep.rho_star = cand;
            }
            if (child_rep.objective < rep.upper_bound) {
                Subproblem child{std::move(k0), std::move(k1), child_rep.rho_star,
                                 child_rep.objective};
                queue.push({std::move(child), seq++});
            }
        }
        ++iter;
    }

    rep.iterations = iter;
    if (!gap_met) {
        if (queue.empty()) {
            // Exhaustive search: the incumbent is optimal.
            rep.best_lower_bound = rep.upper_bound;
            rep.gap = 0.0;
        } else {
            rep.best_lower_bound = queue.top().sub.lower_bound;
            rep.gap = (rep.upper_bound - rep.best_lower_bound) / rep.best_lower_bound;
        }
    }
    return rep;
}

BnbReport solve_bnb(const BoundQuery& query, const BnbConfig& bnb) {
    AcfTable table(query.cfg, query.quad);
    return solve_bnb(query, bnb, table);
}

}  // namespace zzopt
