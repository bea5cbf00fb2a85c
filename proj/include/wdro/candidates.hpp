#pragma once

#include <cstdint>
#include <vector>

#include "wdro/space.hpp"

namespace wdro {

// Candidate support for the worst-case optimizations. Both the primal LP and
// the dual surrogate take their sup over the same finite candidate set; every
// source atom must be able to stay put, so missing support points are
// appended here (in support order) before either route runs.
struct CandidateSet {
    std::vector<Point> points;      // caller candidates, then appended atoms
    std::vector<std::size_t> home;  // per source atom: a zero-distance candidate
    std::size_t appended = 0;
};

CandidateSet augment_candidates(const EmpiricalDistribution& source,
                                const std::vector<Point>& candidates,
                                const InstanceSpace& space);

// count evenly spaced points covering a 1-D space (interval or 1-D
// feature_only); includes both endpoints.
std::vector<Point> interval_grid(const InstanceSpace& space, std::size_t count);

// Deterministic candidate lattice for arbitrary spaces: 1-D spaces get an
// even grid; higher dimensions a Halton set inside the feature ball. Labeled
// spaces pair each feature point with labels {-B, 0, B}.
std::vector<Point> lattice_candidates(const InstanceSpace& space, std::size_t count);

} // namespace wdro
