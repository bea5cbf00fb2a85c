#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wdro/errors.hpp"

namespace wdro {

// Instance z = (x, y): a feature vector plus an optional label.
struct Point {
    std::vector<double> features;
    std::optional<double> label;

    static Point labeled(std::vector<double> x, double y) {
        return Point{std::move(x), y};
    }
    static Point unlabeled(std::vector<double> x) {
        return Point{std::move(x), std::nullopt};
    }
    // 1-D convenience (interval spaces).
    static Point scalar(double z) {
        return Point{{z}, std::nullopt};
    }
};

bool same_coordinates(const Point& a, const Point& b);

enum class MetricKind {
    euclidean_product, // sqrt(|x-x'|_2^2 + |y-y'|^2)
    lp_product,        // (|x-x'|_q^q + |y-y'|^q)^(1/q)
    feature_only,      // |x-x'|_q, labels ignored
    interval           // |z-z'| on a 1-D segment [0, length]
};

// A bounded metric instance space. Feature vectors live in the Euclidean
// ball of radius feature_bound (interval spaces use [0, length] instead),
// labels in [-label_bound, label_bound]. The diameter is a cached upper
// bound on all pairwise distances.
class InstanceSpace {
public:
    static InstanceSpace euclidean_product(int dim, double feature_bound, double label_bound);
    static InstanceSpace lp_product(int dim, double order, double feature_bound, double label_bound);
    static InstanceSpace feature_only(int dim, double order, double feature_bound);
    static InstanceSpace interval(double length);

    int dimension() const { return dim_; }
    double feature_bound() const { return feature_bound_; }
    double label_bound() const { return label_bound_; }
    MetricKind kind() const { return kind_; }
    double metric_order() const { return order_; }
    double diameter() const { return diameter_; }
    bool labeled() const {
        return kind_ == MetricKind::euclidean_product || kind_ == MetricKind::lp_product;
    }

    // Throws data_error naming the violation; `where` is prefixed to the
    // message (dataset loaders pass the row number).
    void validate(const Point& z, const std::string& where = "") const;

private:
    InstanceSpace() = default;
    MetricKind kind_ = MetricKind::euclidean_product;
    int dim_ = 1;
    double order_ = 2.0;
    double feature_bound_ = 0.0;
    double label_bound_ = 0.0;
    double diameter_ = 0.0;
};

// Metric of the space. Symmetric, zero exactly on identical coordinates,
// bounded by space.diameter(). Dimension or label mismatches raise data_error.
double distance(const InstanceSpace& space, const Point& a, const Point& b);

// Finitely supported probability measure. Duplicate support points are
// allowed and treated as distinct atoms.
struct EmpiricalDistribution {
    std::vector<Point> support;
    std::vector<double> weights;

    static EmpiricalDistribution uniform(std::vector<Point> points);
    static EmpiricalDistribution weighted(std::vector<Point> points, std::vector<double> weights);

    std::size_t size() const { return support.size(); }

    // weights nonnegative, summing to 1 within 1e-12, matching the support.
    void validate() const;

    double expectation(const std::function<double(const Point&)>& f) const;
};

// Wasserstein ambiguity ball parameters: order p >= 1 and radius >= 0.
struct AmbiguityBall {
    double order = 1.0;
    double radius = 0.0;

    AmbiguityBall(double p, double rho);
};

} // namespace wdro
