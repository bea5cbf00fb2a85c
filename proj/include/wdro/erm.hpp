#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wdro/bounds.hpp"
#include "wdro/dual_risk.hpp"
#include "wdro/hypothesis.hpp"
#include "wdro/space.hpp"

namespace wdro {

// A finite (or finitely discretized) hypothesis class. Member order is the
// tie-breaking order of every argmin below.
struct HypothesisClass {
    std::vector<Hypothesis> members;
    double upper_bound = 0.0;                      // uniform M
    std::optional<double> lipschitz_constant;      // uniform L, when available
    std::optional<SmoothAnchor> smooth_anchor;     // witness of an anchored member
    std::optional<EntropyProfile> entropy_profile;

    std::size_t size() const { return members.size(); }
};

struct ErmResult {
    std::size_t selected = 0;
    double objective = 0.0;
    std::vector<double> per_hypothesis; // objective per member, indexed like members
    DualSolution dual;                  // dual solution of the winner
    AmbiguityBall ball{1.0, 0.0};
};

// Plain empirical risk minimization; ties go to the lowest member index.
ErmResult ordinary_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample);

// Minimax ERM: minimizes the dual local worst-case risk over the class. At
// rho = 0 it coincides with ordinary_erm in both selection and objective.
ErmResult minimax_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample,
                      const AmbiguityBall& ball, const std::vector<Point>& candidates,
                      const InstanceSpace& space);

// Relaxation that fixes lambda to a grid instead of minimizing it: the
// objective is min over (member, lambda in grid) of
// lambda rho^p + E[phi_{lambda,f}], always >= the exact minimax objective.
ErmResult fixed_lambda_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample,
                           const std::vector<double>& lambda_grid, const AmbiguityBall& ball,
                           const std::vector<Point>& candidates, const InstanceSpace& space);

// --- Built-in class constructors -------------------------------------------

// Bounded predictor with known regularity, the raw material of the
// constructors below.
struct Predictor {
    std::string name;
    std::function<double(const std::vector<double>&)> h;
    double sup_norm = 0.0;  // sup |h|
    double lipschitz = 0.0; // Lipschitz constant of h in the feature metric

    static Predictor linear(std::vector<double> w, double b, double r0);
    static Predictor zero(int dim);
};

// Hinge losses max{0, 1 - y h(x)} on an l1 product space with labels in
// {-1, +1}; member Lipschitz constant max{2 sup|h|, L_h}.
HypothesisClass make_hinge_class(const std::vector<Predictor>& predictors,
                                 const InstanceSpace& space);

// Squared losses (y - h(x))^2 on a Euclidean product space. A zero predictor
// in the grid contributes the smooth anchor (C0 = 1, z0 = origin).
HypothesisClass make_quadratic_class(const std::vector<Predictor>& predictors,
                                     const InstanceSpace& space);

// Bounded smooth nonlinearity for the one-layer class.
struct Nonlinearity {
    std::string name;
    std::function<double(double)> s;
    double sup = 0.0;    // sup |s|
    double dsup = 0.0;   // sup |s'|

    static Nonlinearity tanh_unit();
};

// Squared losses (y - s(w.x))^2 with weights on the unit ball; class
// Lipschitz constant 2 sqrt(2) (B + sup|s|)(1 + sup|s'|).
HypothesisClass make_sigmoid_network_class(const std::vector<std::vector<double>>& weight_grid,
                                           const Nonlinearity& s, const InstanceSpace& space);

// Squared losses over Gaussian-kernel expansions h = sum_k c_k K(x_k, .)
// constrained to the radius-r RKHS ball (checked through the kernel Gram
// quadratic form); class Lipschitz constant 2 sqrt(2)(r + B)(1 + r sqrt(2)/sigma).
HypothesisClass make_rkhs_ball_class(const std::vector<std::vector<double>>& centers,
                                     const std::vector<std::vector<double>>& coefficient_grid,
                                     double sigma, double radius, const InstanceSpace& space);

} // namespace wdro
