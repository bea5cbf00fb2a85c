#include "wdro/space.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace wdro {

namespace {

double lp_norm(const std::vector<double>& a, const std::vector<double>& b, double q) {
    double acc = 0.0;
    if (q == 1.0) {
        for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
        return acc;
    }
    if (q == 2.0) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::pow(std::abs(a[k] - b[k]), q);
    return std::pow(acc, 1.0 / q);
}

double l2_norm(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

// sup |x - x'|_q over the Euclidean ball of radius r in R^d.
double feature_diameter(double r, int d, double q) {
    const double norm_ratio = q < 2.0 ? std::pow(static_cast<double>(d), 1.0 / q - 0.5) : 1.0;
    return 2.0 * r * norm_ratio;
}

} // namespace

InstanceSpace InstanceSpace::euclidean_product(int dim, double feature_bound, double label_bound) {
    if (dim < 1) throw data_error("instance space dimension must be positive");
    if (feature_bound < 0 || label_bound < 0) throw data_error("space bounds must be nonnegative");
    InstanceSpace s;
    s.kind_ = MetricKind::euclidean_product;
    s.dim_ = dim;
    s.order_ = 2.0;
    s.feature_bound_ = feature_bound;
    s.label_bound_ = label_bound;
    // diam = sqrt(diam(X)^2 + diam(Y)^2) <= 2 sqrt(r0^2 + B^2)
    s.diameter_ = 2.0 * std::sqrt(feature_bound * feature_bound + label_bound * label_bound);
    return s;
}

InstanceSpace InstanceSpace::lp_product(int dim, double order, double feature_bound, double label_bound) {
    if (dim < 1) throw data_error("instance space dimension must be positive");
    if (order < 1.0) throw data_error("product metric order must be >= 1");
    if (feature_bound < 0 || label_bound < 0) throw data_error("space bounds must be nonnegative");
    InstanceSpace s;
    s.kind_ = MetricKind::lp_product;
    s.dim_ = dim;
    s.order_ = order;
    s.feature_bound_ = feature_bound;
    s.label_bound_ = label_bound;
    const double dx = feature_diameter(feature_bound, dim, order);
    const double dy = 2.0 * label_bound;
    s.diameter_ = std::pow(std::pow(dx, order) + std::pow(dy, order), 1.0 / order);
    return s;
}

InstanceSpace InstanceSpace::feature_only(int dim, double order, double feature_bound) {
    if (dim < 1) throw data_error("instance space dimension must be positive");
    if (order < 1.0) throw data_error("feature metric order must be >= 1");
    if (feature_bound < 0) throw data_error("space bounds must be nonnegative");
    InstanceSpace s;
    s.kind_ = MetricKind::feature_only;
    s.dim_ = dim;
    s.order_ = order;
    s.feature_bound_ = feature_bound;
    s.label_bound_ = 0.0;
    s.diameter_ = feature_diameter(feature_bound, dim, order);
    return s;
}

InstanceSpace InstanceSpace::interval(double length) {
    if (length < 0) throw data_error("interval length must be nonnegative");
    InstanceSpace s;
    s.kind_ = MetricKind::interval;
    s.dim_ = 1;
    s.order_ = 1.0;
    s.feature_bound_ = length;
    s.label_bound_ = 0.0;
    s.diameter_ = length;
    return s;
}

void InstanceSpace::validate(const Point& z, const std::string& where) const {
    const std::string prefix = where.empty() ? "" : where + ": ";
    if (static_cast<int>(z.features.size()) != dim_)
        throw data_error(prefix + "dimension mismatch: expected " + std::to_string(dim_) +
                         " features, got " + std::to_string(z.features.size()));
    if (kind_ == MetricKind::interval) {
        if (z.features[0] < 0.0 || z.features[0] > feature_bound_)
            throw data_error(prefix + "point outside interval [0, " + std::to_string(feature_bound_) + "]");
        return;
    }
    if (feature_bound_ > 0.0 && l2_norm(z.features) > feature_bound_ * (1.0 + 1e-12))
        throw data_error(prefix + "feature vector outside the radius-" +
                         std::to_string(feature_bound_) + " ball");
    if (labeled()) {
        if (!z.label) throw data_error(prefix + "labeled space requires a label");
        if (label_bound_ >= 0.0 && std::abs(*z.label) > label_bound_ * (1.0 + 1e-12) + 0.0)
            throw data_error(prefix + "label magnitude exceeds bound " + std::to_string(label_bound_));
    }
}

bool same_coordinates(const Point& a, const Point& b) {
    if (a.features != b.features) return false;
    if (a.label.has_value() != b.label.has_value()) return false;
    return !a.label || *a.label == *b.label;
}

double distance(const InstanceSpace& space, const Point& a, const Point& b) {
    if (a.features.size() != b.features.size() ||
        static_cast<int>(a.features.size()) != space.dimension())
        throw data_error("distance: dimension mismatch");
    switch (space.kind()) {
    case MetricKind::interval:
        return std::abs(a.features[0] - b.features[0]);
    case MetricKind::feature_only:
        return lp_norm(a.features, b.features, space.metric_order());
    case MetricKind::euclidean_product: {
        if (!a.label || !b.label) throw data_error("distance: labeled metric on unlabeled point");
        double acc = 0.0;
        for (std::size_t k = 0; k < a.features.size(); ++k) {
            const double d = a.features[k] - b.features[k];
            acc += d * d;
        }
        const double dy = *a.label - *b.label;
        return std::sqrt(acc + dy * dy);
    }
    case MetricKind::lp_product: {
        if (!a.label || !b.label) throw data_error("distance: labeled metric on unlabeled point");
        const double q = space.metric_order();
        const double dx = lp_norm(a.features, b.features, q);
        const double dy = std::abs(*a.label - *b.label);
        if (q == 1.0) return dx + dy;
        return std::pow(std::pow(dx, q) + std::pow(dy, q), 1.0 / q);
    }
    }
    throw internal_error("distance: unknown metric kind");
}

EmpiricalDistribution EmpiricalDistribution::uniform(std::vector<Point> points) {
    if (points.empty()) throw data_error("empty dataset");
    const double w = 1.0 / static_cast<double>(points.size());
    EmpiricalDistribution d;
    d.weights.assign(points.size(), w);
    d.support = std::move(points);
    return d;
}

EmpiricalDistribution EmpiricalDistribution::weighted(std::vector<Point> points,
                                                      std::vector<double> weights) {
    EmpiricalDistribution d;
    d.support = std::move(points);
    d.weights = std::move(weights);
    d.validate();
    return d;
}

void EmpiricalDistribution::validate() const {
    if (support.empty()) throw data_error("empty dataset");
    if (support.size() != weights.size())
        throw data_error("support/weight size mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw data_error("negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw data_error("weights sum to " + std::to_string(total) + ", expected 1");
}

double EmpiricalDistribution::expectation(const std::function<double(const Point&)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) acc += weights[i] * f(support[i]);
    return acc;
}

AmbiguityBall::AmbiguityBall(double p, double rho) : order(p), radius(rho) {
    if (p < 1.0) throw data_error("ambiguity ball order must be >= 1");
    if (rho < 0.0) throw data_error("ambiguity ball radius must be nonnegative");
}

} // namespace wdro
