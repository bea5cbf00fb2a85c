#include "wdro/candidates.hpp"

#include <cmath>

namespace wdro {

CandidateSet augment_candidates(const EmpiricalDistribution& source,
                                const std::vector<Point>& candidates,
                                const InstanceSpace& space) {
    if (candidates.empty()) throw data_error("empty candidate set");
    CandidateSet set;
    set.points = candidates;
    set.home.resize(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
        const Point& z = source.support[i];
        std::size_t home = set.points.size();
        for (std::size_t j = 0; j < set.points.size(); ++j) {
            if (distance(space, z, set.points[j]) == 0.0) {
                home = j;
                break;
            }
        }
        if (home == set.points.size()) {
            set.points.push_back(z);
            ++set.appended;
        }
        set.home[i] = home;
    }
    return set;
}

std::vector<Point> interval_grid(const InstanceSpace& space, std::size_t count) {
    if (count == 0) throw data_error("grid size must be positive");
    if (space.dimension() != 1 || space.labeled())
        throw data_error("interval_grid requires a 1-D unlabeled space");
    const double lo = space.kind() == MetricKind::interval ? 0.0 : -space.feature_bound();
    const double hi = space.kind() == MetricKind::interval ? space.feature_bound()
                                                           : space.feature_bound();
    std::vector<Point> grid;
    grid.reserve(count);
    if (count == 1) {
        grid.push_back(Point::scalar(0.5 * (lo + hi)));
        return grid;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k)
        grid.push_back(Point::scalar(lo + step * static_cast<double>(k)));
    return grid;
}

namespace {

double halton(std::size_t index, std::size_t base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

const std::size_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

} // namespace

std::vector<Point> lattice_candidates(const InstanceSpace& space, std::size_t count) {
    if (count == 0) throw data_error("grid size must be positive");
    const int d = space.dimension();
    std::vector<std::vector<double>> features;

    if (d == 1) {
        const double lo = space.kind() == MetricKind::interval ? 0.0 : -space.feature_bound();
        const double hi = space.feature_bound();
        const std::size_t nx = space.labeled() ? std::max<std::size_t>(1, (count + 2) / 3) : count;
        if (nx == 1) {
            features.push_back({0.5 * (lo + hi)});
        } else {
            const double step = (hi - lo) / static_cast<double>(nx - 1);
            for (std::size_t k = 0; k < nx; ++k)
                features.push_back({lo + step * static_cast<double>(k)});
        }
    } else {
        if (d > 10) throw data_error("lattice_candidates supports at most 10 dimensions");
        const std::size_t nx = space.labeled() ? std::max<std::size_t>(1, (count + 2) / 3) : count;
        const double r = space.feature_bound();
        std::size_t index = 1;
        while (features.size() < nx) {
            std::vector<double> x(static_cast<std::size_t>(d));
            double norm2 = 0.0;
            for (int k = 0; k < d; ++k) {
                x[static_cast<std::size_t>(k)] =
                    r * (2.0 * halton(index, kPrimes[static_cast<std::size_t>(k)]) - 1.0);
                norm2 += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
            }
            ++index;
            if (norm2 <= r * r) features.push_back(std::move(x));
        }
    }

    std::vector<Point> grid;
    if (!space.labeled()) {
        for (auto& x : features) grid.push_back(Point::unlabeled(std::move(x)));
        return grid;
    }
    const double B = space.label_bound();
    const std::vector<double> labels = B > 0.0 ? std::vector<double>{-B, 0.0, B}
                                               : std::vector<double>{0.0};
    for (const auto& x : features)
        for (double y : labels) grid.push_back(Point::labeled(x, y));
    return grid;
}

} // namespace wdro
