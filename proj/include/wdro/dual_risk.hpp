#pragma once

#include <utility>
#include <vector>

#include "wdro/candidates.hpp"
#include "wdro/hypothesis.hpp"
#include "wdro/space.hpp"

namespace wdro {

// Solution of the one-dimensional dual of the local worst-case risk:
//   min over lambda >= 0 of  lambda * rho^p + E_Q[ phi_{lambda,f} ].
struct DualSolution {
    double lambda_star = 0.0;
    double value = 0.0;
    std::vector<double> surrogate_values;    // phi_{lambda*,f}(Z_i) per atom
    std::vector<std::size_t> inner_argmax;   // maximizing candidate per atom
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Robust surrogate phi_{lambda,f}(z) = max over candidates of
// f(z') - lambda * d(z, z')^p, with the lowest-index argmax. The candidate
// list must contain z itself, so the result is always >= f(z).
std::pair<double, Point> phi(const Hypothesis& f, double lambda, const Point& z,
                             const std::vector<Point>& candidates, double p,
                             const InstanceSpace& space);

// Smallest lambda at which every surrogate collapses to f itself, i.e.
// max over atoms z and candidates z' of (f(z') - f(z)) / d(z, z')^p.
// Beyond this threshold the dual objective is strictly increasing, so it
// brackets every minimizer.
double lambda_threshold(const Hypothesis& f, const EmpiricalDistribution& q,
                        const std::vector<Point>& candidates, double p,
                        const InstanceSpace& space);

// Metadata-driven search bracket for the dual minimizer: the tightest of
//   L * rho^-(p-1)                          (Lipschitz hypotheses)
//   C0 * 2^(p-1) * (1 + (diam/rho)^p)       (anchored hypotheses)
// Requires rho > 0 and at least one kind of metadata.
double lambda_bracket(const Hypothesis& f, const AmbiguityBall& ball, const InstanceSpace& space);

// Dual route to the local worst-case risk of f at Q over the candidate set.
// The surrogate sup runs over the same augmented candidate set as the primal
// LP oracle. rho = 0 short-circuits to E_Q[f] with the collapse threshold as
// lambda*. The search interval is [0, min(bracket, threshold)] and the
// one-dimensional convex objective is minimized by golden section to 1e-9 in
// lambda, followed by an exact endpoint check.
DualSolution local_worst_case_risk(const Hypothesis& f, const EmpiricalDistribution& q,
                                   const AmbiguityBall& ball,
                                   const std::vector<Point>& candidates,
                                   const InstanceSpace& space);

} // namespace wdro
