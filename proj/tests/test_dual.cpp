#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "wdro/casebook.hpp"
#include "wdro/dual_risk.hpp"
#include "wdro/transport.hpp"

using namespace wdro;
using testkit::Rng;

namespace {

// Mean surrogate at a fixed lambda, built on the public phi only; the caller
// adds lambda * rho^p.
double mean_surrogate_at(const Hypothesis& f, const EmpiricalDistribution& q, double lambda,
                         const std::vector<Point>& candidates, double p,
                         const InstanceSpace& space) {
    double mean = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        mean += q.weights[i] * phi(f, lambda, q.support[i], candidates, p, space).first;
    return mean;
}

std::vector<Point> candidates_with_support(Rng& rng, const InstanceSpace& space,
                                           const EmpiricalDistribution& q, std::size_t extra) {
    std::vector<Point> c = q.support;
    for (std::size_t i = 0; i < extra; ++i) c.push_back(testkit::random_point(rng, space));
    return c;
}

} // namespace

TEST_CASE("surrogate at lambda = 0 is the candidate maximum") {
    Rng rng(211);
    const InstanceSpace space = testkit::random_space(rng);
    const auto q = testkit::random_distribution(rng, space, 6);
    const auto f = testkit::random_hypothesis(rng, space, 1.0);
    const auto cands = candidates_with_support(rng, space, q, 10);
    double fmax = -1.0;
    for (const Point& c : cands) fmax = std::max(fmax, f(c));
    const auto [value, arg] = phi(f, 0.0, q.support[0], cands, 1.0, space);
    CHECK(value == doctest::Approx(fmax).epsilon(1e-12));
    CHECK(f(arg) == doctest::Approx(fmax).epsilon(1e-12));
}

TEST_CASE("surrogate collapses to f beyond the threshold") {
    Rng rng(223);
    for (int rep = 0; rep < 15; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 6);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const auto f = testkit::random_hypothesis(rng, space, p);
        const auto cands = candidates_with_support(rng, space, q, 8);
        const double lam = lambda_threshold(f, q, cands, p, space);
        for (std::size_t i = 0; i < q.size(); ++i) {
            const double collapsed = phi(f, lam * (1.0 + 1e-12) + 1e-12, q.support[i], cands, p, space).first;
            CHECK(collapsed == doctest::Approx(f(q.support[i])).epsilon(1e-9));
            // And phi always dominates f itself.
            const double anywhere = phi(f, rng.next_uniform(0.0, 3.0), q.support[i], cands, p, space).first;
            CHECK(anywhere >= f(q.support[i]) - 1e-12);
        }
    }
}

TEST_CASE("constant losses have constant surrogates") {
    Rng rng(227);
    const InstanceSpace space = testkit::random_space(rng);
    const auto q = testkit::random_distribution(rng, space, 4);
    const auto f = Hypothesis::constant(0.4);
    const auto cands = candidates_with_support(rng, space, q, 6);
    for (double lam : {0.0, 0.3, 2.0})
        CHECK(phi(f, lam, q.support[0], cands, 1.0, space).first == doctest::Approx(0.4));
}

TEST_CASE("zero-radius worst case is the plain risk, exactly") {
    Rng rng(229);
    for (int rep = 0; rep < 25; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 8);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const auto f = testkit::random_hypothesis(rng, space, p);
        const auto cands = candidates_with_support(rng, space, q, 6);
        const auto sol = local_worst_case_risk(f, q, AmbiguityBall(p, 0.0), cands, space);
        CHECK(sol.value == q.expectation(f.evaluate));
        for (std::size_t i = 0; i < q.size(); ++i)
            CHECK(sol.surrogate_values[i] >= f(q.support[i]) - 1e-12);
    }
}

TEST_CASE("dual solutions satisfy their own bookkeeping") {
    Rng rng(233);
    for (int rep = 0; rep < 25; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 8);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const double rho = rng.next_uniform(0.01, 0.6);
        const auto f = testkit::random_hypothesis(rng, space, p);
        const auto cands = candidates_with_support(rng, space, q, 8);
        const auto sol = local_worst_case_risk(f, q, AmbiguityBall(p, rho), cands, space);
        double mean = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) mean += q.weights[i] * sol.surrogate_values[i];
        CHECK(std::abs(sol.value - (sol.lambda_star * std::pow(rho, p) + mean)) <= 1e-9);
        CHECK(sol.lambda_star >= sol.bracket_lo);
        CHECK(sol.lambda_star <= sol.bracket_hi + 1e-9);
        for (std::size_t i = 0; i < q.size(); ++i)
            CHECK(sol.surrogate_values[i] >= f(q.support[i]) - 1e-12);
    }
}

TEST_CASE("dual objective is convex in lambda") {
    Rng rng(239);
    for (int rep = 0; rep < 20; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 6);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const double rho = rng.next_uniform(0.0, 0.5);
        const double rho_p = std::pow(rho, p);
        const auto f = testkit::random_hypothesis(rng, space, p);
        const auto cands = candidates_with_support(rng, space, q, 8);
        const auto g = [&](double lam) {
            return lam * rho_p + mean_surrogate_at(f, q, lam, cands, p, space);
        };
        for (int t = 0; t < 50; ++t) {
            const double l1 = rng.next_uniform(0.0, 4.0);
            const double l2 = rng.next_uniform(0.0, 4.0);
            CHECK(g(0.5 * (l1 + l2)) <= 0.5 * (g(l1) + g(l2)) + 1e-9);
        }
    }
}

TEST_CASE("bracket formulas") {
    const InstanceSpace seg = InstanceSpace::interval(2.0);
    Hypothesis lip = Hypothesis::constant(1.0);
    lip.lipschitz_constant = 3.0;
    CHECK(lambda_bracket(lip, AmbiguityBall(1.0, 0.2), seg) == doctest::Approx(3.0));

    lip.lipschitz_constant = 1.0;
    CHECK(lambda_bracket(lip, AmbiguityBall(2.0, 0.5), seg) == doctest::Approx(2.0));

    Hypothesis anchored = Hypothesis::constant(1.0);
    anchored.lipschitz_constant.reset();
    anchored.smooth_anchor = SmoothAnchor{1.0, Point::scalar(0.0)};
    CHECK(lambda_bracket(anchored, AmbiguityBall(1.0, 0.5), seg) == doctest::Approx(5.0));

    Hypothesis bare = Hypothesis::constant(1.0);
    bare.lipschitz_constant.reset();
    CHECK_THROWS_AS(lambda_bracket(bare, AmbiguityBall(1.0, 0.5), seg), data_error);
    CHECK_THROWS_AS(lambda_bracket(lip, AmbiguityBall(1.0, 0.0), seg), data_error);
}

TEST_CASE("dual minimizer stays inside the metadata bracket") {
    Rng rng(241);
    for (int rep = 0; rep < 100; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 8);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const double rho = rng.next_uniform(0.02, 0.5);
        const auto f = testkit::random_hypothesis(rng, space, p, /*regular_only=*/true);
        const auto cands = candidates_with_support(rng, space, q, 10);
        const AmbiguityBall ball(p, rho);
        const auto sol = local_worst_case_risk(f, q, ball, cands, space);
        CHECK(sol.lambda_star <= lambda_bracket(f, ball, space) + 1e-9);
    }
}

TEST_CASE("dual matches the primal LP across radii") {
    Rng rng(251);
    for (int rep = 0; rep < 40; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 10);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const double rho = std::vector<double>{0.0, 0.01, 0.1, 0.5}[rng.next_below(4)];
        const auto f = testkit::random_hypothesis(rng, space, p);
        const auto cands = candidates_with_support(rng, space, q, 12);
        const AmbiguityBall ball(p, rho);
        const auto dual = local_worst_case_risk(f, q, ball, cands, space);
        const auto primal = primal_worst_case_risk(f, q, ball, cands, space);
        CHECK(dual.value - primal.value <= 1e-6);
        CHECK(primal.value - dual.value <= 1e-6);
    }
}

TEST_CASE("worst case grows with the radius and the population grid matches the closed form") {
    const InstanceSpace space = casebook::space();
    const HypothesisClass cls = casebook::hypothesis_class(10.0);
    const Hypothesis& f1 = cls.members[1];
    const auto grid = casebook::population_grid(2000);
    std::vector<Point> cands = grid.support;
    cands.push_back(Point::scalar(1.0));

    double prev = -1.0;
    for (double rho : {0.001, 0.01, 0.05}) {
        const auto sol = local_worst_case_risk(f1, grid, AmbiguityBall(1.0, rho), cands, space);
        CHECK(sol.value >= prev);
        prev = sol.value;
    }

    const auto sol = local_worst_case_risk(f1, grid, AmbiguityBall(1.0, 0.01), cands, space);
    const double closed_form = 10.0 * std::sqrt(2.0) * std::sqrt(0.01);
    CHECK(std::abs(sol.value - closed_form) / closed_form < 0.02);
}

TEST_CASE("Lipschitz sandwich around sampled in-ball perturbations") {
    Rng rng(257);
    int checked = 0;
    while (checked < 60) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto q = testkit::random_distribution(rng, space, 6);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const double rho = rng.next_uniform(0.05, 0.4);
        const auto f = testkit::random_hypothesis(rng, space, p, /*regular_only=*/true);
        if (!f.lipschitz_constant) continue;
        const auto cands = candidates_with_support(rng, space, q, 8);
        const AmbiguityBall ball(p, rho);
        const auto dual = local_worst_case_risk(f, q, ball, cands, space);
        const auto qprime = testkit::random_inball_perturbation(rng, q, cands, space, p, rho);
        const double risk = qprime.expectation(f.evaluate);
        CHECK(risk <= dual.value + 1e-6);
        CHECK(dual.value <= risk + 2.0 * *f.lipschitz_constant * rho + 1e-6);
        ++checked;
    }
}

TEST_CASE("empty candidate sets are rejected") {
    const InstanceSpace space = InstanceSpace::interval(2.0);
    const auto f = Hypothesis::constant(1.0);
    CHECK_THROWS_AS(phi(f, 0.0, Point::scalar(0.5), {}, 1.0, space), data_error);
}
