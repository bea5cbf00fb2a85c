#pragma once

#include <filesystem>
#include <vector>

#include "wdro/candidates.hpp"
#include "wdro/hypothesis.hpp"
#include "wdro/space.hpp"

namespace wdro {

// Coupling between two finite supports. plan[i][j] is the mass moved from
// source atom i to target atom j; cost is the realized sum of
// plan[i][j] * d(z_i, z'_j)^p.
struct TransportPlan {
    std::vector<Point> source_support;
    std::vector<Point> target_support;
    std::vector<std::vector<double>> plan;
    double cost = 0.0;
    double order = 1.0;

    double row_sum(std::size_t i) const;
    double col_sum(std::size_t j) const;
};

struct WassersteinResult {
    double value = 0.0; // W_p = cost^(1/p)
    TransportPlan plan;
};

// Exact p-Wasserstein distance between two finitely supported distributions,
// solved as the balanced transportation LP on the dense bipartite graph.
// Deterministic; solver failures surface as internal_error with diagnostics.
WassersteinResult wasserstein(double p, const EmpiricalDistribution& a,
                              const EmpiricalDistribution& b, const InstanceSpace& space);

// Maximizing distribution over the radius-rho ball, restricted to a finite
// candidate support, together with a feasibility witness.
struct WorstCaseCertificate {
    EmpiricalDistribution distribution; // the maximizer Q on the candidate set
    double value = 0.0;                 // E_Q[f]
    TransportPlan plan;                 // witnesses W_p(P, Q) <= rho
};

// Brute-force primal route to the local worst-case risk: an LP over
// couplings pi >= 0 with fixed first marginal P, free second marginal on the
// candidate set, and transport budget sum pi * d^p <= rho^p, maximizing
// E[f] under the second marginal. Support points of P are added to the
// candidate set when missing so staying put is always feasible. Solved by a
// dense simplex with lowest-index (Bland) pivoting; exact at desk scale.
WorstCaseCertificate primal_worst_case_risk(const Hypothesis& f, const EmpiricalDistribution& p_dist,
                                            const AmbiguityBall& ball,
                                            const std::vector<Point>& candidates,
                                            const InstanceSpace& space);

// CSV matrix dump with row/column headers identifying atoms by index.
void dump_plan_csv(const std::filesystem::path& path, const TransportPlan& plan);

} // namespace wdro
