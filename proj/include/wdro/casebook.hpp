#pragma once

#include <cstdint>
#include <string>

#include "wdro/erm.hpp"
#include "wdro/space.hpp"

namespace wdro {
namespace casebook {

// The worked two-hypothesis instance: data Unif[0,1] on the segment [0,2]
// with the interval metric (diameter 2), f0 = 1 constant and f1 a step of
// height alpha on [1,2]. The closed forms below hold on restricted parameter
// regimes; out-of-regime evaluations return the formula value with
// in_regime = false instead of failing.
struct IllustrativeInstance {
    double alpha = 10.0;
    double p = 1.0;
    std::size_t n = 10;
    double rho = 0.05;
    double delta = 0.05;
};

struct RegimeValue {
    double value = 0.0;
    bool in_regime = true;
    std::string note;
};

InstanceSpace space();                      // interval of length 2
HypothesisClass hypothesis_class(double alpha);
EmpiricalDistribution population_grid(std::size_t atoms); // midpoint grid on [0,1]

// Worst-case risk of f1 over the rho-ball around Unif[0,1]:
//   alpha (p+1)^{1/(p+1)} rho^{p/(p+1)},
// valid while the transported segment stays inside [0,1].
RegimeValue analytic_population_worst_case(const IllustrativeInstance& inst);

// Worst-case risk of f1 over the rho-ball around the empirical sample:
//   alpha rho^p / (1 - max Z_i)^p,
// valid while the transported mass fits into the top atom
// (rho <= (1 - max Z_i) n^{-1/p}).
RegimeValue analytic_empirical_worst_case(const IllustrativeInstance& inst,
                                          const EmpiricalDistribution& sample);

// Probability that minimax ERM keeps the nonrobust step hypothesis:
//   (1 - rho alpha^{1/p})^n  for rho <= alpha^{-1/p}.
// The event rewrites as {max Z_i < 1 - rho alpha^{1/p}}, which matches the
// LP-based ERM decision exactly when one atom can absorb the whole budget
// (n <= alpha); the flag records when that fails.
RegimeValue selection_probability(const IllustrativeInstance& inst);

// delta-quantile of the excess risk of minimax ERM:
//   alpha (p+1)^{1/(p+1)} rho^{p/(p+1)} - 1 inside
//   [(p+1)^{-1/p} alpha^{-(p+1)/p}, (1 - delta^{1/n}) alpha^{-1/p}], 0 outside.
RegimeValue excess_risk_profile(const IllustrativeInstance& inst);

// The alpha making the excess-risk profile worst at a given radius:
//   (1 - delta^{1/n})^p rho^{-p}; flagged when the result is <= 1.
RegimeValue worst_alpha(double rho, double delta, std::size_t n, double p);

// Monte Carlo of the actual minimax ERM decision: each trial draws n points
// Unif[0,1] (substream = seed + trial index), runs minimax_erm over
// {f0, f1} with candidates = sample plus the point 1.0, and counts
// selections of f1.
struct SelectionSimulation {
    std::size_t trials = 0;
    std::size_t f1_selected = 0;
    double frequency = 0.0;
};

SelectionSimulation simulate_selection(const IllustrativeInstance& inst, std::size_t trials,
                                       std::uint64_t seed);

} // namespace casebook
} // namespace wdro
