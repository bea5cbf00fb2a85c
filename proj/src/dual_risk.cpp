#include "wdro/dual_risk.hpp"

#include <cmath>

namespace wdro {

namespace {

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

constexpr double kInvPhi = 0.61803398874989484820;
constexpr double kLambdaTol = 1e-9;

struct DualWorkspace {
    CandidateSet cset;
    std::vector<double> fvals;   // f on candidates
    std::vector<double> fatoms;  // f on atoms (via home candidate)
    std::vector<double> dpow;    // n x k, d(z_i, c_j)^p
    std::size_t n = 0, k = 0;
};

DualWorkspace make_workspace(const Hypothesis& f, const EmpiricalDistribution& q,
                             const std::vector<Point>& candidates, double p,
                             const InstanceSpace& space) {
    DualWorkspace ws;
    ws.cset = augment_candidates(q, candidates, space);
    ws.n = q.size();
    ws.k = ws.cset.points.size();
    ws.fvals.resize(ws.k);
    for (std::size_t j = 0; j < ws.k; ++j) ws.fvals[j] = f(ws.cset.points[j]);
    ws.fatoms.resize(ws.n);
    for (std::size_t i = 0; i < ws.n; ++i) ws.fatoms[i] = ws.fvals[ws.cset.home[i]];
    ws.dpow.resize(ws.n * ws.k);
    for (std::size_t i = 0; i < ws.n; ++i)
        for (std::size_t j = 0; j < ws.k; ++j)
            ws.dpow[i * ws.k + j] = pow_p(distance(space, q.support[i], ws.cset.points[j]), p);
    return ws;
}

double threshold_from_workspace(const DualWorkspace& ws) {
    double lam = 0.0;
    for (std::size_t i = 0; i < ws.n; ++i) {
        for (std::size_t j = 0; j < ws.k; ++j) {
            const double d = ws.dpow[i * ws.k + j];
            if (d <= 0.0) continue;
            lam = std::max(lam, (ws.fvals[j] - ws.fatoms[i]) / d);
        }
    }
    return lam;
}

// E_Q[phi_{lambda,f}] over the workspace.
double mean_surrogate(const DualWorkspace& ws, const std::vector<double>& weights, double lambda) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ws.n; ++i) {
        const double* row = &ws.dpow[i * ws.k];
        double best = ws.fvals[0] - lambda * row[0];
        for (std::size_t j = 1; j < ws.k; ++j) {
            const double v = ws.fvals[j] - lambda * row[j];
            if (v > best) best = v;
        }
        acc += weights[i] * best;
    }
    return acc;
}

} // namespace

std::pair<double, Point> phi(const Hypothesis& f, double lambda, const Point& z,
                             const std::vector<Point>& candidates, double p,
                             const InstanceSpace& space) {
    if (candidates.empty()) throw data_error("empty candidate set");
    if (lambda < 0.0) throw data_error("phi requires lambda >= 0");
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const double v = f(candidates[j]) - lambda * pow_p(distance(space, z, candidates[j]), p);
        if (v > best) {
            best = v;
            best_j = j;
        }
    }
    return {best, candidates[best_j]};
}

double lambda_threshold(const Hypothesis& f, const EmpiricalDistribution& q,
                        const std::vector<Point>& candidates, double p,
                        const InstanceSpace& space) {
    const DualWorkspace ws = make_workspace(f, q, candidates, p, space);
    return threshold_from_workspace(ws);
}

double lambda_bracket(const Hypothesis& f, const AmbiguityBall& ball, const InstanceSpace& space) {
    if (ball.radius <= 0.0)
        throw data_error("lambda bracket undefined at rho = 0; use the exact rho = 0 path");
    const double p = ball.order;
    double bound = std::numeric_limits<double>::infinity();
    if (f.lipschitz_constant)
        bound = std::min(bound, *f.lipschitz_constant * std::pow(ball.radius, 1.0 - p));
    if (f.smooth_anchor) {
        const double ratio = space.diameter() / ball.radius;
        bound = std::min(bound, f.smooth_anchor->c0 * std::pow(2.0, p - 1.0) *
                                    (1.0 + pow_p(ratio, p)));
    }
    if (!std::isfinite(bound))
        throw data_error("lambda bracket needs a Lipschitz constant or a smooth anchor");
    return bound;
}

DualSolution local_worst_case_risk(const Hypothesis& f, const EmpiricalDistribution& q,
                                   const AmbiguityBall& ball,
                                   const std::vector<Point>& candidates,
                                   const InstanceSpace& space) {
    q.validate();
    const DualWorkspace ws = make_workspace(f, q, candidates, ball.order, space);
    const double p = ball.order;
    const double rho_p = pow_p(ball.radius, p);
    const double threshold = threshold_from_workspace(ws);

    DualSolution sol;
    sol.bracket_lo = 0.0;

    auto fill_at = [&](double lambda) {
        sol.lambda_star = lambda;
        sol.surrogate_values.resize(ws.n);
        sol.inner_argmax.resize(ws.n);
        double mean = 0.0;
        for (std::size_t i = 0; i < ws.n; ++i) {
            const double* row = &ws.dpow[i * ws.k];
            double best = ws.fvals[0] - lambda * row[0];
            std::size_t best_j = 0;
            for (std::size_t j = 1; j < ws.k; ++j) {
                const double v = ws.fvals[j] - lambda * row[j];
                if (v > best) {
                    best = v;
                    best_j = j;
                }
            }
            sol.surrogate_values[i] = best;
            sol.inner_argmax[i] = best_j;
            mean += q.weights[i] * best;
        }
        sol.value = lambda * rho_p + mean;
    };

    if (ball.radius == 0.0) {
        // No transport budget: the risk is E_Q[f] and any lambda at or above
        // the collapse threshold is optimal.
        sol.bracket_hi = threshold;
        fill_at(threshold);
        double mean = 0.0;
        for (std::size_t i = 0; i < ws.n; ++i) mean += q.weights[i] * ws.fatoms[i];
        sol.value = mean;
        return sol;
    }

    double hi = threshold;
    if (f.lipschitz_constant || f.smooth_anchor)
        hi = std::min(hi, lambda_bracket(f, ball, space));
    sol.bracket_hi = hi;

    const auto objective = [&](double lambda) {
        return lambda * rho_p + mean_surrogate(ws, q.weights, lambda);
    };

    if (hi <= 0.0) {
        fill_at(0.0);
        return sol;
    }

    double lo = 0.0, b = hi;
    double x1 = b - kInvPhi * (b - lo);
    double x2 = lo + kInvPhi * (b - lo);
    double g1 = objective(x1);
    double g2 = objective(x2);
    while (b - lo > kLambdaTol) {
        if (g1 <= g2) {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - kInvPhi * (b - lo);
            g1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + kInvPhi * (b - lo);
            g2 = objective(x2);
        }
    }
    double best_lambda = 0.5 * (lo + b);
    double best_value = objective(best_lambda);
    // The minimizer can sit exactly on an endpoint of the bracket.
    if (objective(0.0) < best_value) {
        best_lambda = 0.0;
        best_value = objective(0.0);
    }
    if (objective(hi) < best_value) {
        best_lambda = hi;
        best_value = objective(hi);
    }
    fill_at(best_lambda);
    return sol;
}

} // namespace wdro
