#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wdro/errors.hpp"

namespace wdro {

// Covering-number model of a hypothesis class in the uniform metric,
// used through the entropy integral Comp(F) = int_0^inf sqrt(log N(u)) du.
struct EntropyProfile {
    enum class Kind { finite_class, euclidean_ball_lipschitz, gaussian_rkhs, explicit_table };

    Kind kind = Kind::finite_class;

    // finite_class: K functions with pairwise sup-distance at most sup_diameter.
    double class_size = 1.0;
    double sup_diameter = 0.0;

    // euclidean_ball_lipschitz (one-layer squared-loss networks over the unit
    // parameter ball): dimension, feature radius, label bound, nonlinearity
    // sup norms.
    int dim = 1;
    double r0 = 0.0;
    double label_bound = 0.0;
    double s_sup = 0.0;
    double ds_sup = 0.0;

    // gaussian_rkhs: kernel width sigma and RKHS ball radius r on top of the
    // geometric parameters above.
    double sigma = 1.0;
    double rkhs_radius = 0.0;

    // explicit_table: breakpoints (u_k, N_k) with N nonincreasing; N(u) = N_k
    // on [u_k, u_{k+1}) and 1 beyond the last breakpoint.
    std::vector<std::pair<double, double>> table;

    double comp_value = 0.0; // cached Comp(F)

    static EntropyProfile finite(double class_size, double sup_diameter);
    static EntropyProfile network(int dim, double r0, double label_bound, double s_sup,
                                  double ds_sup);
    static EntropyProfile rkhs(int dim, double r0, double label_bound, double sigma,
                               double rkhs_radius);
    static EntropyProfile explicit_covering(std::vector<std::pair<double, double>> table);
};

// Comp(F) for the profile: closed forms for the modelled kinds, adaptive
// Simpson quadrature (relative 1e-6) for explicit tables.
double comp_entropy_integral(const EntropyProfile& profile);

// Upper incomplete gamma integral, relative accuracy 1e-12.
double upper_incomplete_gamma(double s, double v);

// A bound evaluation: the value, its named addends, and the inputs it was
// computed from. Values are reported even when vacuous (> M); the flag says so.
struct BoundReport {
    std::string bound_name;
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::pair<std::string, double>> terms;
    double value = 0.0;
    bool vacuous = false;
    double failure_probability = 0.0;

    double term(const std::string& name) const;
};

// Risk sandwich slacks.
double sandwich_lipschitz(double lipschitz, double rho);
double sandwich_regression(double label_bound, double predictor_sup, double predictor_lipschitz,
                           double rho, double sigma_sup);

// Data-dependent generalization bound: the lambda grid carries precomputed
// pairs (lambda, E_{P_n}[phi_{lambda,f}]); the reported failure probability
// is 2 exp(-2 t^2).
BoundReport data_dependent_risk_bound(const std::vector<std::pair<double, double>>& lambda_grid,
                                      double rho, double p, double M, double comp, std::size_t n,
                                      double t);

// Excess-risk bound for uniformly Lipschitz classes:
//   48 Comp / sqrt(n) + 48 L diam^p / (sqrt(n) rho^(p-1)) + 3 M sqrt(log(2/delta) / (2n)).
BoundReport lipschitz_excess_bound(double comp, double lipschitz, double diam, double rho,
                                   double p, double M, std::size_t n, double delta);

// Excess-risk bound requiring only one anchored hypothesis:
//   48 Comp / sqrt(n) + 24 C0 (2 diam)^p / sqrt(n) * (1 + (diam/rho)^p)
//     + 3 M sqrt(log(2/delta) / (2n)).
BoundReport anchored_excess_bound(double comp, double c0, double diam, double rho, double p,
                                  double M, std::size_t n, double delta);

// Rademacher bound for the surrogate class (hypotheses x bracketed lambda):
//   24 Comp / sqrt(n) + 12 C0 (2 diam)^p / sqrt(n) * (1 + (diam/rho)^p).
BoundReport surrogate_rademacher_bound(double comp, double c0, double diam, double rho, double p,
                                       std::size_t n);

// Ready-made constants for the two worked classes, bundled with the excess
// bound at (n, delta).
struct ClassConstants {
    double lipschitz = 0.0;
    double upper_bound = 0.0; // M
    double c1 = 0.0;
    BoundReport bound;
};

ClassConstants network_class_constants(int dim, double r0, double label_bound, double s_sup,
                                       double ds_sup, std::size_t n, double delta);
ClassConstants rkhs_class_constants(int dim, double r0, double label_bound, double sigma,
                                    double rkhs_radius, std::size_t n, double delta);

} // namespace wdro
