#include "fairrl/rng.hpp"

#include "fairrl/errors.hpp"
#include "fairrl/mdp.hpp"

#include <doctest.h>

#include <cmath>

using namespace fairrl;

TEST_CASE("dirichlet(1,1) first coordinate is Uniform(0,1)") {
    Rng rng(7);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec x = rng.dirichlet({1.0, 1.0});
        sum += x[0];
        sum_sq += x[0] * x[0];
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(mean - 0.5) < 0.005);
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.05));
}

TEST_CASE("heavily skewed dirichlet concentrates on the big count") {
    Rng rng(11);
    int above = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i)
        if (rng.dirichlet({1e6, 1.0})[0] > 0.99) ++above;
    CHECK(static_cast<double>(above) / n > 0.99);
}

TEST_CASE("dirichlet draws are strictly positive and sum to one") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        Vec x = rng.dirichlet({0.3, 1.0, 5.0});
        double total = 0.0;
        for (double v : x) {
            CHECK(v > 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fixed seed reproduces draws bitwise") {
    Rng a(42), b(42);
    for (int i = 0; i < 200; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
        CHECK(a.gamma(0.7) == b.gamma(0.7));
        Vec da = a.dirichlet({2.0, 3.0, 4.0});
        Vec db = b.dirichlet({2.0, 3.0, 4.0});
        CHECK(da == db);
    }
}

TEST_CASE("gamma sampler matches the first two moments") {
    Rng rng(5);
    for (double shape : {0.5, 1.0, 2.5, 9.0}) {
        const int n = 200000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            double g = rng.gamma(shape);
            sum += g;
            sum_sq += g * g;
        }
        const double mean = sum / n;
        const double var = sum_sq / n - mean * mean;
        CHECK(mean == doctest::Approx(shape).epsilon(0.02));
        CHECK(var == doctest::Approx(shape).epsilon(0.05));
    }
}

TEST_CASE("gamma rejects nonpositive shape") {
    Rng rng(1);
    CHECK_THROWS_AS(rng.gamma(0.0), DomainError);
    CHECK_THROWS_AS(rng.gamma(-1.0), DomainError);
}

TEST_CASE("categorical respects the distribution") {
    Rng rng(13);
    Vec probs{0.2, 0.5, 0.3};
    Vec freq(3, 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) freq[rng.categorical(probs)] += 1.0;
    for (int i = 0; i < 3; ++i) CHECK(freq[i] / n == doctest::Approx(probs[i]).epsilon(0.05));
}

TEST_CASE("spawned streams differ from the parent and each other") {
    Rng root(99);
    Rng w0 = root.spawn(0);
    Rng w1 = root.spawn(1);
    bool differ = false;
    for (int i = 0; i < 16 && !differ; ++i) differ = w0.uniform() != w1.uniform();
    CHECK(differ);

    // Same index respawns the same stream.
    Rng w0_again = Rng(99).spawn(0);
    Rng w0_ref = Rng(99).spawn(0);
    for (int i = 0; i < 16; ++i) CHECK(w0_again.uniform() == w0_ref.uniform());
}
