#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "wdro/casebook.hpp"
#include "wdro/dataset.hpp"
#include "wdro/erm.hpp"

using namespace wdro;
using testkit::Rng;

namespace {

HypothesisClass random_class(Rng& rng, const InstanceSpace& space, double p, std::size_t members,
                             bool regular_only = false) {
    HypothesisClass cls;
    double m = 0.0;
    for (std::size_t i = 0; i < members; ++i) {
        cls.members.push_back(testkit::random_hypothesis(rng, space, p, regular_only));
        m = std::max(m, cls.members.back().upper_bound);
    }
    cls.upper_bound = m;
    return cls;
}

std::vector<Point> candidates_with_support(Rng& rng, const InstanceSpace& space,
                                           const EmpiricalDistribution& q, std::size_t extra) {
    std::vector<Point> c = q.support;
    for (std::size_t i = 0; i < extra; ++i) c.push_back(testkit::random_point(rng, space));
    return c;
}

void check_lipschitz_on_pairs(Rng& rng, const Hypothesis& f, const InstanceSpace& space) {
    REQUIRE(f.lipschitz_constant.has_value());
    for (int rep = 0; rep < 1000; ++rep) {
        const Point a = testkit::random_point(rng, space);
        const Point b = testkit::random_point(rng, space);
        CHECK(std::abs(f(a) - f(b)) <= *f.lipschitz_constant * distance(space, a, b) + 1e-9);
    }
}

} // namespace

TEST_CASE("plain ERM always keeps the step hypothesis on in-range samples") {
    const HypothesisClass cls = casebook::hypothesis_class(10.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sample = sample_uniform_interval(12, seed);
        const auto result = ordinary_erm(cls, sample);
        CHECK(result.selected == 1);
        CHECK(result.objective == 0.0);
    }
}

TEST_CASE("plain ERM basics") {
    const auto sample = sample_uniform_interval(5, 3);

    SUBCASE("singleton class") {
        HypothesisClass cls;
        cls.members.push_back(Hypothesis::constant(0.3));
        const auto result = ordinary_erm(cls, sample);
        CHECK(result.selected == 0);
        CHECK(result.objective == doctest::Approx(0.3));
    }
    SUBCASE("ties break toward the lower index") {
        HypothesisClass cls;
        cls.members.push_back(Hypothesis::constant(0.5, "a"));
        cls.members.push_back(Hypothesis::constant(0.5, "b"));
        CHECK(ordinary_erm(cls, sample).selected == 0);
    }
    SUBCASE("empty class rejected") {
        HypothesisClass cls;
        CHECK_THROWS_AS(ordinary_erm(cls, sample), data_error);
    }
}

TEST_CASE("minimax ERM with zero radius equals plain ERM exactly") {
    Rng rng(307);
    for (int rep = 0; rep < 50; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto sample = testkit::random_distribution(rng, space, 9);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const auto cls = random_class(rng, space, p, 1 + rng.next_below(4));
        const auto cands = candidates_with_support(rng, space, sample, 6);

        const auto plain = ordinary_erm(cls, sample);
        const auto robust = minimax_erm(cls, sample, AmbiguityBall(p, 0.0), cands, space);
        CHECK(plain.selected == robust.selected);
        CHECK(plain.objective == robust.objective); // same sums, bit for bit
    }
}

TEST_CASE("large budgets reject the nonrobust step hypothesis") {
    const HypothesisClass cls = casebook::hypothesis_class(10.0);
    const InstanceSpace space = casebook::space();
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const auto sample = sample_uniform_interval(20, seed);
        std::vector<Point> cands = sample.support;
        cands.push_back(Point::scalar(1.0));
        const auto result = minimax_erm(cls, sample, AmbiguityBall(1.0, 0.4), cands, space);
        CHECK(result.selected == 0);
        CHECK(result.objective == doctest::Approx(1.0));
    }
}

TEST_CASE("selection frequency over seeded trials tracks the closed form") {
    // n = 10, alpha = 10, rho = 0.05: the step survives with probability
    // (1 - 0.5)^10; at n <= alpha the LP decision coincides with the
    // single-atom rule, so the Monte Carlo frequency must match it.
    casebook::IllustrativeInstance inst;
    inst.alpha = 10.0;
    inst.p = 1.0;
    inst.n = 10;
    inst.rho = 0.05;
    const auto sim = casebook::simulate_selection(inst, 10000, 20240401);
    const double predicted = std::pow(0.5, 10);
    const double se = testkit::binomial_se(predicted, 10000);
    CHECK(std::abs(sim.frequency - predicted) <= 3.0 * se);
}

TEST_CASE("minimax objective is monotone in the radius") {
    Rng rng(311);
    for (int rep = 0; rep < 15; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto sample = testkit::random_distribution(rng, space, 8);
        const double p = rng.next_below(2) ? 1.0 : 2.0;
        const auto cls = random_class(rng, space, p, 3);
        const auto cands = candidates_with_support(rng, space, sample, 6);
        double prev = -1.0;
        for (double rho : {0.0, 0.05, 0.2, 0.6}) {
            const auto r = minimax_erm(cls, sample, AmbiguityBall(p, rho), cands, space);
            CHECK(r.objective >= prev - 1e-10);
            prev = r.objective;
        }
    }
}

TEST_CASE("single-hypothesis worst-case gap stays within L rho at order one") {
    Rng rng(313);
    for (int rep = 0; rep < 30; ++rep) {
        const InstanceSpace space = testkit::random_space(rng);
        const auto sample = testkit::random_distribution(rng, space, 8);
        const double rho = rng.next_uniform(0.0, 0.5);
        const auto f = testkit::random_hypothesis(rng, space, 1.0, /*regular_only=*/true);
        if (!f.lipschitz_constant) continue;
        const auto cands = candidates_with_support(rng, space, sample, 8);
        const auto sol = local_worst_case_risk(f, sample, AmbiguityBall(1.0, rho), cands, space);
        const double plain = sample.expectation(f.evaluate);
        CHECK(sol.value >= plain - 1e-10);
        CHECK(sol.value - plain <= *f.lipschitz_constant * rho + 1e-9);
    }
}

TEST_CASE("fixed-lambda relaxation") {
    Rng rng(317);
    const InstanceSpace space = InstanceSpace::interval(2.0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto sample = testkit::random_distribution(rng, space, 8);
        const double rho = rng.next_uniform(0.05, 0.4);
        const auto cls = random_class(rng, space, 1.0, 3);
        const auto cands = candidates_with_support(rng, space, sample, 8);
        const AmbiguityBall ball(1.0, rho);

        const auto exact = minimax_erm(cls, sample, ball, cands, space);

        // Grid containing the exact minimizer reproduces the objective.
        const auto pinned =
            fixed_lambda_erm(cls, sample, {exact.dual.lambda_star}, ball, cands, space);
        CHECK(pinned.objective >= exact.objective - 1e-9);
        CHECK(pinned.objective <= exact.objective + 1e-6);

        // Any grid is a relaxation.
        const auto zero_grid = fixed_lambda_erm(cls, sample, {0.0}, ball, cands, space);
        CHECK(zero_grid.objective >= exact.objective - 1e-9);

        const auto coarse = fixed_lambda_erm(cls, sample, {0.0, 0.5, 1.0, 2.0}, ball, cands, space);
        CHECK(coarse.objective >= exact.objective - 1e-9);
    }
    SUBCASE("empty grid rejected") {
        const auto sample = sample_uniform_interval(4, 5);
        const auto cls = casebook::hypothesis_class(5.0);
        CHECK_THROWS_AS(fixed_lambda_erm(cls, sample, {}, AmbiguityBall(1.0, 0.1), sample.support,
                                         casebook::space()),
                        data_error);
    }
}

TEST_CASE("dense fixed-lambda grids approach the exact objective") {
    Rng rng(331);
    const InstanceSpace space = InstanceSpace::interval(2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const auto sample = testkit::random_distribution(rng, space, 8);
        const double rho = rng.next_uniform(0.05, 0.4);
        const AmbiguityBall ball(1.0, rho);

        // Lipschitz class with L <= 0.9 keeps the grid resolution ahead of
        // the objective's slope.
        HypothesisClass cls;
        for (int i = 0; i < 3; ++i) {
            const double L = rng.next_uniform(0.2, 0.9);
            const double cap = rng.next_uniform(0.5, 1.5);
            const Point a = testkit::random_point(rng, space);
            Hypothesis h;
            h.family_tag = "cone";
            h.evaluate = [L, cap, a, space](const Point& z) {
                return std::min(L * distance(space, z, a), cap);
            };
            h.upper_bound = cap;
            h.lipschitz_constant = L;
            cls.members.push_back(std::move(h));
            cls.upper_bound = std::max(cls.upper_bound, cap);
        }
        cls.lipschitz_constant = 0.9;

        const auto cands = candidates_with_support(rng, space, sample, 8);
        const auto exact = minimax_erm(cls, sample, ball, cands, space);

        std::vector<double> grid(1000);
        const double hi = 0.9; // Lipschitz bracket at p = 1
        for (std::size_t k = 0; k < grid.size(); ++k)
            grid[k] = hi * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
        const auto relaxed = fixed_lambda_erm(cls, sample, grid, ball, cands, space);
        CHECK(relaxed.objective >= exact.objective - 1e-9);
        CHECK(relaxed.objective - exact.objective <= 1e-3);
    }
}

TEST_CASE("per-hypothesis table is consistent") {
    Rng rng(337);
    const InstanceSpace space = testkit::random_space(rng);
    const auto sample = testkit::random_distribution(rng, space, 6);
    const auto cls = random_class(rng, space, 1.0, 4);
    const auto cands = candidates_with_support(rng, space, sample, 5);
    const auto r = minimax_erm(cls, sample, AmbiguityBall(1.0, 0.2), cands, space);
    REQUIRE(r.per_hypothesis.size() == 4);
    double best = r.per_hypothesis[0];
    for (double v : r.per_hypothesis) best = std::min(best, v);
    CHECK(r.objective == best);
    CHECK(r.per_hypothesis[r.selected] == best);
}

// ---- Class constructors -----------------------------------------------------

TEST_CASE("hinge class metadata and regularity") {
    Rng rng(401);
    const InstanceSpace space = InstanceSpace::lp_product(2, 1.0, 1.0, 1.0);
    std::vector<Predictor> grid = {
        Predictor::linear({0.5, -0.25}, 0.1, 1.0),
        Predictor::linear({-1.0, 0.5}, 0.0, 1.0),
        Predictor::zero(2),
    };
    const auto cls = make_hinge_class(grid, space);
    REQUIRE(cls.size() == 3);
    // Declared constant max{2 sup|h|, L_h}.
    CHECK(*cls.members[0].lipschitz_constant ==
          doctest::Approx(std::max(2.0 * grid[0].sup_norm, grid[0].lipschitz)));
    for (const auto& member : cls.members) {
        for (int rep = 0; rep < 1000; ++rep) {
            Point a = testkit::random_point(rng, space);
            Point b = testkit::random_point(rng, space);
            a.label = rng.next_below(2) ? 1.0 : -1.0;
            b.label = rng.next_below(2) ? 1.0 : -1.0;
            CHECK(member(a) >= 0.0);
            CHECK(member(a) <= member.upper_bound + 1e-12);
            CHECK(std::abs(member(a) - member(b)) <=
                  *member.lipschitz_constant * distance(space, a, b) + 1e-9);
        }
    }
    CHECK_THROWS_AS(make_hinge_class({}, space), data_error);
}

TEST_CASE("quadratic class anchors the zero predictor") {
    Rng rng(409);
    const InstanceSpace space = InstanceSpace::euclidean_product(2, 1.0, 1.0);
    std::vector<Predictor> grid = {
        Predictor::zero(2),
        Predictor::linear({0.5, 0.5}, 0.0, 1.0),
    };
    const auto cls = make_quadratic_class(grid, space);
    REQUIRE(cls.smooth_anchor.has_value());
    CHECK(cls.smooth_anchor->c0 == 1.0);
    const auto& anchored = cls.members[0];
    REQUIRE(anchored.smooth_anchor.has_value());
    for (int rep = 0; rep < 1000; ++rep) {
        const Point z = testkit::random_point(rng, space);
        const double d = distance(space, z, anchored.smooth_anchor->anchor);
        CHECK(anchored(z) <= anchored.smooth_anchor->c0 * d * d + 1e-9);
    }
    check_lipschitz_on_pairs(rng, cls.members[1], space);
    CHECK_FALSE(cls.members[1].smooth_anchor.has_value());
}

TEST_CASE("network class enforces the unit ball and its constants") {
    Rng rng(419);
    const InstanceSpace space = InstanceSpace::euclidean_product(2, 1.0, 1.0);
    const auto s = Nonlinearity::tanh_unit();
    const auto cls = make_sigmoid_network_class({{0.6, 0.8}, {0.0, 0.0}}, s, space);
    // Class constant 2 sqrt(2) (B + sup|s|)(1 + sup|s'|) with B = 1.
    CHECK(*cls.lipschitz_constant == doctest::Approx(2.0 * std::sqrt(2.0) * 2.0 * 2.0));
    CHECK(cls.upper_bound == doctest::Approx(4.0));
    for (const auto& member : cls.members) check_lipschitz_on_pairs(rng, member, space);

    REQUIRE(cls.entropy_profile.has_value());
    // Comp <= 3 D sqrt(d) / 2 with D = 2 r0 (B + sup|s|) sup|s'| = 4.
    CHECK(cls.entropy_profile->comp_value == doctest::Approx(6.0 * std::sqrt(2.0)));

    CHECK_THROWS_AS(make_sigmoid_network_class({{1.2, 0.0}}, s, space), data_error);
    CHECK_THROWS_AS(make_sigmoid_network_class({}, s, space), data_error);
}

TEST_CASE("rkhs class checks the Gram norm and reports offenders") {
    Rng rng(421);
    const InstanceSpace space = InstanceSpace::euclidean_product(1, 1.0, 1.0);
    const std::vector<std::vector<double>> centers = {{-0.5}, {0.5}};
    const double sigma = 1.0, radius = 1.0;

    const auto cls = make_rkhs_ball_class(centers, {{0.3, -0.3}, {0.5, 0.2}}, sigma, radius, space);
    CHECK(cls.upper_bound == doctest::Approx(2.0 * (1.0 + 1.0)));
    CHECK(*cls.lipschitz_constant ==
          doctest::Approx(2.0 * std::sqrt(2.0) * 2.0 * (1.0 + std::sqrt(2.0))));
    for (const auto& member : cls.members) check_lipschitz_on_pairs(rng, member, space);

    try {
        make_rkhs_ball_class(centers, {{5.0, 5.0}}, sigma, radius, space);
        FAIL("expected rejection");
    } catch (const data_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("5.0") != std::string::npos);
        CHECK(msg.find("radius") != std::string::npos);
    }
}
