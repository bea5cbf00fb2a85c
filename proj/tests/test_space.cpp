#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "wdro/dataset.hpp"
#include "wdro/space.hpp"

using namespace wdro;
using testkit::Rng;

TEST_CASE("distance examples") {
    const InstanceSpace e1 = InstanceSpace::euclidean_product(1, 10.0, 10.0);
    const Point a = Point::labeled({0.0}, 0.0);
    CHECK(distance(e1, a, a) == 0.0);
    CHECK(distance(e1, a, Point::labeled({3.0}, 4.0)) == doctest::Approx(5.0).epsilon(1e-15));

    const InstanceSpace l1 = InstanceSpace::lp_product(2, 1.0, 10.0, 10.0);
    CHECK(distance(l1, Point::labeled({1.0, 0.0}, 2.0), Point::labeled({0.0, 0.0}, 0.0)) ==
          doctest::Approx(3.0).epsilon(1e-15));

    const InstanceSpace seg = InstanceSpace::interval(2.0);
    CHECK(distance(seg, Point::scalar(0.25), Point::scalar(1.5)) == doctest::Approx(1.25));
}

TEST_CASE("distance rejects dimension mismatches") {
    const InstanceSpace e2 = InstanceSpace::euclidean_product(2, 1.0, 1.0);
    CHECK_THROWS_AS(distance(e2, Point::labeled({0.0}, 0.0), Point::labeled({0.0, 0.0}, 0.0)),
                    data_error);
    CHECK_THROWS_AS(distance(e2, Point::unlabeled({0.0, 0.0}), Point::labeled({0.0, 0.0}, 0.0)),
                    data_error);
}

TEST_CASE("metric axioms hold on sampled triples") {
    Rng rng(101);
    for (int kind = 0; kind < 4; ++kind) {
        const InstanceSpace space = testkit::random_space(rng);
        for (int rep = 0; rep < 1000; ++rep) {
            const Point a = testkit::random_point(rng, space);
            const Point b = testkit::random_point(rng, space);
            const Point c = testkit::random_point(rng, space);
            const double ab = distance(space, a, b);
            const double ba = distance(space, b, a);
            const double bc = distance(space, b, c);
            const double ac = distance(space, a, c);
            REQUIRE(ab == ba); // symmetry, exact
            REQUIRE(ab >= 0.0);
            REQUIRE(ac <= ab + bc + 1e-12);
            REQUIRE(ab <= space.diameter() + 1e-12);
        }
    }
}

TEST_CASE("distance is zero only on identical coordinates") {
    Rng rng(103);
    const InstanceSpace space = InstanceSpace::euclidean_product(2, 1.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Point a = testkit::random_point(rng, space);
        Point b = a;
        CHECK(distance(space, a, b) == 0.0);
        b.features[0] += 1e-9;
        CHECK(distance(space, a, b) > 0.0);
    }
}

TEST_CASE("dataset loader") {
    const std::filesystem::path path = "dataset_loader_test.csv";
    const InstanceSpace space = InstanceSpace::euclidean_product(2, 10.0, 5.0);

    SUBCASE("uniform weights and header detection") {
        std::ofstream out(path);
        out << "x1,x2,y\n0.5,0.5,1\n-0.25,0,2\n1,1,-3\n";
        out.close();
        const auto d = load_dataset(path, DatasetSchema::labeled, space);
        CHECK(d.size() == 3);
        for (double w : d.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(d.support[1].features[0] == doctest::Approx(-0.25));
        CHECK(*d.support[2].label == doctest::Approx(-3.0));
    }

    SUBCASE("empty file") {
        std::ofstream out(path);
        out.close();
        CHECK_THROWS_WITH_AS(load_dataset(path, DatasetSchema::labeled, space),
                             "empty dataset", data_error);
    }

    SUBCASE("label bound violation names the row") {
        std::ofstream out(path);
        out << "0,0,1\n0,0,7\n";
        out.close();
        try {
            load_dataset(path, DatasetSchema::labeled, space);
            FAIL("expected data_error");
        } catch (const data_error& e) {
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }

    SUBCASE("parse failure names the row") {
        std::ofstream out(path);
        out << "0,0,1\nnope,0,1\n";
        out.close();
        try {
            load_dataset(path, DatasetSchema::labeled, space);
            FAIL("expected data_error");
        } catch (const data_error& e) {
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }

    std::filesystem::remove(path);
}

TEST_CASE("save/load round trip is exact") {
    Rng rng(107);
    const std::filesystem::path path = "dataset_roundtrip_test.csv";
    for (int rep = 0; rep < 10; ++rep) {
        const InstanceSpace space = InstanceSpace::euclidean_product(3, 10.0, 10.0);
        const auto original = testkit::random_distribution(rng, space, 20, /*uniform=*/true);
        save_dataset(path, original, DatasetSchema::labeled);
        const auto loaded = load_dataset(path, DatasetSchema::labeled, space);
        REQUIRE(loaded.size() == original.size());
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            CHECK(loaded.weights[i] == original.weights[i]);
            CHECK(loaded.support[i].features == original.support[i].features);
            CHECK(*loaded.support[i].label == *original.support[i].label);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("uniform interval sampler") {
    SUBCASE("determinism") {
        const auto a = sample_uniform_interval(5, 7);
        const auto b = sample_uniform_interval(5, 7);
        REQUIRE(a.size() == 5);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(a.support[i].features[0] == b.support[i].features[0]);
    }
    SUBCASE("empirical mean lands near one half") {
        const auto d = sample_uniform_interval(1000, 3);
        double mean = 0.0;
        for (const Point& z : d.support) mean += z.features[0];
        mean /= 1000.0;
        CHECK(mean > 0.45);
        CHECK(mean < 0.55);
    }
    SUBCASE("single point") {
        const auto d = sample_uniform_interval(1, 9);
        CHECK(d.weights[0] == 1.0);
    }
    SUBCASE("zero points rejected") {
        CHECK_THROWS_AS(sample_uniform_interval(0, 1), data_error);
    }
}

TEST_CASE("empirical distribution invariants") {
    CHECK_THROWS_AS(EmpiricalDistribution::uniform({}), data_error);
    CHECK_THROWS_AS(EmpiricalDistribution::weighted({Point::scalar(0.0)}, {0.5}), data_error);
    CHECK_THROWS_AS(
        EmpiricalDistribution::weighted({Point::scalar(0.0), Point::scalar(1.0)}, {1.5, -0.5}),
        data_error);
    // Duplicated atoms are legal and keep their weights separate.
    const auto d = EmpiricalDistribution::weighted({Point::scalar(0.5), Point::scalar(0.5)},
                                                   {0.25, 0.75});
    CHECK(d.size() == 2);
}

TEST_CASE("ambiguity ball parameter checks") {
    CHECK_THROWS_AS(AmbiguityBall(0.5, 0.1), data_error);
    CHECK_THROWS_AS(AmbiguityBall(1.0, -0.1), data_error);
    const AmbiguityBall ball(2.0, 0.3);
    CHECK(ball.order == 2.0);
    CHECK(ball.radius == 0.3);
}
