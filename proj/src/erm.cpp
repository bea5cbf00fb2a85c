#include "wdro/erm.hpp"

#include <cmath>

namespace wdro {

namespace {

double pow_p(double d, double p) {
    if (p == 1.0) return d;
    if (p == 2.0) return d * d;
    return std::pow(d, p);
}

void require_members(const HypothesisClass& f_class) {
    if (f_class.members.empty()) throw data_error("empty hypothesis class");
}

} // namespace

ErmResult ordinary_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample) {
    require_members(f_class);
    sample.validate();
    ErmResult result;
    result.ball = AmbiguityBall(1.0, 0.0);
    result.per_hypothesis.reserve(f_class.size());
    for (const Hypothesis& f : f_class.members)
        result.per_hypothesis.push_back(sample.expectation(f.evaluate));
    result.selected = 0;
    for (std::size_t i = 1; i < result.per_hypothesis.size(); ++i)
        if (result.per_hypothesis[i] < result.per_hypothesis[result.selected]) result.selected = i;
    result.objective = result.per_hypothesis[result.selected];

    // Trivial rho = 0 dual of the winner: every surrogate is f itself.
    const Hypothesis& winner = f_class.members[result.selected];
    result.dual.lambda_star = 0.0;
    result.dual.value = result.objective;
    result.dual.surrogate_values.reserve(sample.size());
    result.dual.inner_argmax.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        result.dual.surrogate_values.push_back(winner(sample.support[i]));
        result.dual.inner_argmax.push_back(i);
    }
    return result;
}

ErmResult minimax_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample,
                      const AmbiguityBall& ball, const std::vector<Point>& candidates,
                      const InstanceSpace& space) {
    require_members(f_class);
    ErmResult result;
    result.ball = ball;
    result.per_hypothesis.reserve(f_class.size());
    std::vector<DualSolution> duals;
    duals.reserve(f_class.size());
    for (const Hypothesis& f : f_class.members) {
        duals.push_back(local_worst_case_risk(f, sample, ball, candidates, space));
        result.per_hypothesis.push_back(duals.back().value);
    }
    result.selected = 0;
    for (std::size_t i = 1; i < result.per_hypothesis.size(); ++i)
        if (result.per_hypothesis[i] < result.per_hypothesis[result.selected]) result.selected = i;
    result.objective = result.per_hypothesis[result.selected];
    result.dual = std::move(duals[result.selected]);
    return result;
}

ErmResult fixed_lambda_erm(const HypothesisClass& f_class, const EmpiricalDistribution& sample,
                           const std::vector<double>& lambda_grid, const AmbiguityBall& ball,
                           const std::vector<Point>& candidates, const InstanceSpace& space) {
    require_members(f_class);
    if (lambda_grid.empty()) throw data_error("empty lambda grid");
    sample.validate();

    const double rho_p = pow_p(ball.radius, ball.order);
    ErmResult result;
    result.ball = ball;
    result.per_hypothesis.assign(f_class.size(), 0.0);

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_member = 0;
    double best_lambda = lambda_grid.front();

    const CandidateSet cset = augment_candidates(sample, candidates, space);
    std::vector<double> dpow(sample.size() * cset.points.size());
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = 0; j < cset.points.size(); ++j)
            dpow[i * cset.points.size() + j] =
                pow_p(distance(space, sample.support[i], cset.points[j]), ball.order);

    for (std::size_t mi = 0; mi < f_class.size(); ++mi) {
        const Hypothesis& f = f_class.members[mi];
        std::vector<double> fvals(cset.points.size());
        for (std::size_t j = 0; j < fvals.size(); ++j) fvals[j] = f(cset.points[j]);

        double member_best = std::numeric_limits<double>::infinity();
        for (double lambda : lambda_grid) {
            if (lambda < 0.0) throw data_error("lambda grid entries must be nonnegative");
            double mean = 0.0;
            for (std::size_t i = 0; i < sample.size(); ++i) {
                const double* row = &dpow[i * cset.points.size()];
                double m = fvals[0] - lambda * row[0];
                for (std::size_t j = 1; j < cset.points.size(); ++j)
                    m = std::max(m, fvals[j] - lambda * row[j]);
                mean += sample.weights[i] * m;
            }
            const double objective = lambda * rho_p + mean;
            member_best = std::min(member_best, objective);
            if (objective < best) {
                best = objective;
                best_member = mi;
                best_lambda = lambda;
            }
        }
        result.per_hypothesis[mi] = member_best;
    }

    result.selected = best_member;
    result.objective = best;

    // Report the winner's surrogate at its grid-optimal lambda.
    const Hypothesis& winner = f_class.members[best_member];
    DualSolution dual;
    dual.lambda_star = best_lambda;
    dual.bracket_lo = lambda_grid.front();
    dual.bracket_hi = lambda_grid.back();
    dual.surrogate_values.resize(sample.size());
    dual.inner_argmax.resize(sample.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double* row = &dpow[i * cset.points.size()];
        double m = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < cset.points.size(); ++j) {
            const double v = winner(cset.points[j]) - best_lambda * row[j];
            if (v > m) {
                m = v;
                arg = j;
            }
        }
        dual.surrogate_values[i] = m;
        dual.inner_argmax[i] = arg;
        mean += sample.weights[i] * m;
    }
    dual.value = best_lambda * rho_p + mean;
    result.dual = std::move(dual);
    return result;
}

// --- Built-in class constructors -------------------------------------------

Predictor Predictor::linear(std::vector<double> w, double b, double r0) {
    Predictor p;
    double norm = 0.0;
    std::string name = "linear[";
    for (std::size_t k = 0; k < w.size(); ++k) {
        norm += w[k] * w[k];
        name += (k ? "," : "") + std::to_string(w[k]);
    }
    name += ";" + std::to_string(b) + "]";
    norm = std::sqrt(norm);
    p.name = std::move(name);
    p.lipschitz = norm;
    p.sup_norm = norm * r0 + std::abs(b);
    p.h = [w = std::move(w), b](const std::vector<double>& x) {
        double acc = b;
        for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * x[k];
        return acc;
    };
    return p;
}

Predictor Predictor::zero(int dim) {
    Predictor p = linear(std::vector<double>(static_cast<std::size_t>(dim), 0.0), 0.0, 0.0);
    p.name = "zero";
    return p;
}

HypothesisClass make_hinge_class(const std::vector<Predictor>& predictors,
                                 const InstanceSpace& space) {
    if (predictors.empty()) throw data_error("empty predictor grid");
    if (space.kind() != MetricKind::lp_product || space.metric_order() != 1.0)
        throw data_error("hinge class requires an l1 product space");
    HypothesisClass cls;
    double class_l = 0.0, class_m = 0.0, max_diff = 0.0;
    for (const Predictor& pred : predictors) {
        Hypothesis h;
        h.family_tag = "hinge(" + pred.name + ")";
        h.evaluate = [hh = pred.h](const Point& z) {
            return std::max(0.0, 1.0 - *z.label * hh(z.features));
        };
        h.upper_bound = 1.0 + pred.sup_norm;
        h.lipschitz_constant = std::max(2.0 * pred.sup_norm, pred.lipschitz);
        class_l = std::max(class_l, *h.lipschitz_constant);
        class_m = std::max(class_m, h.upper_bound);
        max_diff = std::max(max_diff, 1.0 + pred.sup_norm);
        cls.members.push_back(std::move(h));
    }
    cls.upper_bound = class_m;
    cls.lipschitz_constant = class_l;
    cls.entropy_profile = EntropyProfile::finite(static_cast<double>(predictors.size()), max_diff);
    return cls;
}

HypothesisClass make_quadratic_class(const std::vector<Predictor>& predictors,
                                     const InstanceSpace& space) {
    if (predictors.empty()) throw data_error("empty predictor grid");
    if (space.kind() != MetricKind::euclidean_product)
        throw data_error("quadratic class requires a Euclidean product space");
    const double B = space.label_bound();
    HypothesisClass cls;
    double class_l = 0.0, class_m = 0.0;
    for (const Predictor& pred : predictors) {
        Hypothesis h;
        h.family_tag = "quadratic(" + pred.name + ")";
        h.evaluate = [hh = pred.h](const Point& z) {
            const double r = *z.label - hh(z.features);
            return r * r;
        };
        const double m = (B + pred.sup_norm) * (B + pred.sup_norm);
        // |f - f'| <= 2 (B + sup|h|) sqrt(1 + L_h^2) d(z, z') via Cauchy-Schwarz.
        const double l = 2.0 * (B + pred.sup_norm) *
                         std::sqrt(1.0 + pred.lipschitz * pred.lipschitz);
        h.upper_bound = m;
        h.lipschitz_constant = l;
        if (pred.sup_norm == 0.0) {
            // f(z) = y^2 <= d(z, (x0, 0))^2 for any fixed anchor feature.
            SmoothAnchor anchor;
            anchor.c0 = 1.0;
            anchor.anchor =
                Point::labeled(std::vector<double>(static_cast<std::size_t>(space.dimension()), 0.0), 0.0);
            h.smooth_anchor = anchor;
            if (!cls.smooth_anchor) cls.smooth_anchor = anchor;
        }
        class_l = std::max(class_l, l);
        class_m = std::max(class_m, m);
        cls.members.push_back(std::move(h));
    }
    cls.upper_bound = class_m;
    cls.lipschitz_constant = class_l;
    cls.entropy_profile = EntropyProfile::finite(static_cast<double>(predictors.size()), class_m);
    return cls;
}

Nonlinearity Nonlinearity::tanh_unit() {
    Nonlinearity s;
    s.name = "tanh";
    s.s = [](double t) { return std::tanh(t); };
    s.sup = 1.0;
    s.dsup = 1.0;
    return s;
}

HypothesisClass make_sigmoid_network_class(const std::vector<std::vector<double>>& weight_grid,
                                           const Nonlinearity& s, const InstanceSpace& space) {
    if (weight_grid.empty()) throw data_error("empty weight grid");
    if (space.kind() != MetricKind::euclidean_product)
        throw data_error("network class requires a Euclidean product space");
    const double B = space.label_bound();
    HypothesisClass cls;
    for (const auto& w : weight_grid) {
        if (static_cast<int>(w.size()) != space.dimension())
            throw data_error("weight vector dimension mismatch");
        double norm2 = 0.0;
        for (double v : w) norm2 += v * v;
        if (norm2 > 1.0 + 1e-12) {
            std::string msg = "network weight outside the unit ball: [";
            for (std::size_t k = 0; k < w.size(); ++k)
                msg += (k ? "," : "") + std::to_string(w[k]);
            throw data_error(msg + "]");
        }
        Hypothesis h;
        h.family_tag = "network";
        h.evaluate = [w, fn = s.s](const Point& z) {
            double dot = 0.0;
            for (std::size_t k = 0; k < w.size(); ++k) dot += w[k] * z.features[k];
            const double r = *z.label - fn(dot);
            return r * r;
        };
        h.upper_bound = (s.sup + B) * (s.sup + B);
        h.lipschitz_constant = 2.0 * std::sqrt(2.0) * (B + s.sup) * (1.0 + s.dsup);
        cls.members.push_back(std::move(h));
    }
    cls.upper_bound = (s.sup + B) * (s.sup + B);
    cls.lipschitz_constant = 2.0 * std::sqrt(2.0) * (B + s.sup) * (1.0 + s.dsup);
    cls.entropy_profile =
        EntropyProfile::network(space.dimension(), space.feature_bound(), B, s.sup, s.dsup);
    return cls;
}

HypothesisClass make_rkhs_ball_class(const std::vector<std::vector<double>>& centers,
                                     const std::vector<std::vector<double>>& coefficient_grid,
                                     double sigma, double radius, const InstanceSpace& space) {
    if (centers.empty() || coefficient_grid.empty()) throw data_error("empty grid");
    if (sigma <= 0.0) throw data_error("kernel width must be positive");
    if (space.kind() != MetricKind::euclidean_product)
        throw data_error("RKHS class requires a Euclidean product space");
    const double B = space.label_bound();
    const double inv_s2 = 1.0 / (sigma * sigma);

    const auto kernel = [inv_s2](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            acc += d * d;
        }
        return std::exp(-acc * inv_s2);
    };

    std::vector<std::vector<double>> gram(centers.size(), std::vector<double>(centers.size()));
    for (std::size_t a = 0; a < centers.size(); ++a)
        for (std::size_t b = 0; b < centers.size(); ++b) gram[a][b] = kernel(centers[a], centers[b]);

    HypothesisClass cls;
    for (const auto& coeff : coefficient_grid) {
        if (coeff.size() != centers.size())
            throw data_error("coefficient vector length must match the center count");
        double norm2 = 0.0;
        for (std::size_t a = 0; a < coeff.size(); ++a)
            for (std::size_t b = 0; b < coeff.size(); ++b) norm2 += coeff[a] * gram[a][b] * coeff[b];
        if (std::sqrt(std::max(norm2, 0.0)) > radius + 1e-9) {
            std::string msg = "RKHS norm exceeds the ball radius for coefficients [";
            for (std::size_t k = 0; k < coeff.size(); ++k)
                msg += (k ? "," : "") + std::to_string(coeff[k]);
            throw data_error(msg + "]: |h|_K = " + std::to_string(std::sqrt(norm2)));
        }
        Hypothesis h;
        h.family_tag = "rkhs";
        h.evaluate = [coeff, centers, kernel](const Point& z) {
            double pred = 0.0;
            for (std::size_t k = 0; k < coeff.size(); ++k)
                pred += coeff[k] * kernel(centers[k], z.features);
            const double r = *z.label - pred;
            return r * r;
        };
        h.upper_bound = 2.0 * (radius * radius + B * B);
        h.lipschitz_constant =
            2.0 * std::sqrt(2.0) * (radius + B) * (1.0 + radius * std::sqrt(2.0) / sigma);
        cls.members.push_back(std::move(h));
    }
    cls.upper_bound = 2.0 * (radius * radius + B * B);
    cls.lipschitz_constant =
        2.0 * std::sqrt(2.0) * (radius + B) * (1.0 + radius * std::sqrt(2.0) / sigma);
    cls.entropy_profile =
        EntropyProfile::rkhs(space.dimension(), space.feature_bound(), B, sigma, radius);
    return cls;
}

} // namespace wdro
