#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "relsim/spacetime.hpp"

using namespace relsim::spacetime;

namespace {

FourEvent ev(double t, double x, double y = 0.0, double z = 0.0) {
    return {"e", Role::None, t, x, y, z};
}

FourEvent random_event(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    return ev(coord(gen), coord(gen), coord(gen), coord(gen));
}

}  // namespace

TEST_CASE("interval_squared basic displacements") {
    const FourEvent origin = ev(0, 0);
    CHECK(interval_squared(origin, ev(1, 0)) == doctest::Approx(-1.0));
    CHECK(interval_squared(origin, ev(0, 1)) == doctest::Approx(1.0));
    CHECK(interval_squared(origin, ev(1, 1)) == doctest::Approx(0.0));
}

TEST_CASE("classify by sign and tolerance band") {
    CHECK(classify_interval(-1.0) == Separation::Timelike);
    CHECK(classify_interval(1.0) == Separation::Spacelike);
    CHECK(classify_interval(1e-15) == Separation::Lightlike);
    CHECK(classify_interval(-1e-15, 0.0) == Separation::Timelike);
    CHECK_THROWS_AS(classify_interval(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("boost at v=0 is the identity") {
    const FourEvent e = ev(3.0, -2.0, 1.0, 0.5);
    const FourEvent b = boost(e, {0.0});
    CHECK(b.t == e.t);
    CHECK(b.x == e.x);
    CHECK(b.y == e.y);
    CHECK(b.z == e.z);
}

TEST_CASE("boost of a pure space displacement at v=0.5") {
    const FourEvent b = boost(ev(0.0, 1.0), {0.5});
    CHECK(b.t == doctest::Approx(-0.5773502691896258).epsilon(1e-12));
    CHECK(b.x == doctest::Approx(1.1547005383792517).epsilon(1e-12));
}

TEST_CASE("coordinate-time order of a spacelike pair is frame dependent") {
    const FourEvent e1 = ev(0.0, 0.0);
    const FourEvent e2 = ev(0.0, 1.0);
    CHECK(classify(e1, e2) == Separation::Spacelike);
    CHECK(boost(e2, {0.5}).t < boost(e1, {0.5}).t);
}

TEST_CASE("boost rejects |v| >= 1 and preserves identity/role") {
    CHECK_THROWS_AS(boost(ev(0, 0), {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(boost(ev(0, 0), {-1.5}), std::invalid_argument);
    FourEvent e{"A1", Role::Input, 1, 2, 0, 0};
    const FourEvent b = boost(e, {0.3});
    CHECK(b.id == "A1");
    CHECK(b.role == Role::Input);
}

TEST_CASE("in_future_lightcone") {
    const FourEvent o = ev(0, 0);
    CHECK(in_future_lightcone(o, ev(2, 1)));
    CHECK_FALSE(in_future_lightcone(o, ev(1, 2)));
    CHECK_FALSE(in_future_lightcone(o, ev(-1, 0)));
    CHECK(in_future_lightcone(o, ev(1, 1)));  // on the cone
}

TEST_CASE("dilation_offset examples") {
    CHECK(dilation_offset({9.8, 10.0, 3.156e7}) == doctest::Approx(3.44e-8).epsilon(1e-2));
    CHECK(dilation_offset({9.8, 0.0, 1.0}) == 0.0);
    CHECK(dilation_offset({9.8, 100.0, 1.0}) == doctest::Approx(1.09e-14).epsilon(1e-2));
}

TEST_CASE("dilation_offset is separately linear in g, h, t") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.1, 100.0);
    for (int i = 0; i < 50; ++i) {
        const double g = u(gen), h = u(gen), t = u(gen), s = u(gen);
        const double base = dilation_offset({g, h, t});
        CHECK(dilation_offset({g * s, h, t}) == doctest::Approx(base * s).epsilon(1e-12));
        CHECK(dilation_offset({g, h * s, t}) == doctest::Approx(base * s).epsilon(1e-12));
        CHECK(dilation_offset({g, h, t * s}) == doctest::Approx(base * s).epsilon(1e-12));
    }
}

TEST_CASE("timelike_crossover: c/g, independent of h, about one year at g") {
    const double t = timelike_crossover(9.8);
    CHECK(t == doctest::Approx(3.06e7).epsilon(1e-3));
    CHECK(t / 3.156e7 == doctest::Approx(0.97).epsilon(1e-2));
    CHECK(timelike_crossover(19.6) == doctest::Approx(t / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(timelike_crossover(0.0), std::invalid_argument);
    CHECK_THROWS_AS(timelike_crossover(-9.8), std::invalid_argument);
}

TEST_CASE("property: interval invariance under boosts") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> vel(-0.99, 0.99);
    for (int i = 0; i < 200; ++i) {
        const FourEvent a = random_event(gen);
        const FourEvent b = random_event(gen);
        const double v = vel(gen);
        const double s2 = interval_squared(a, b);
        const double s2b = interval_squared(boost(a, {v}), boost(b, {v}));
        CHECK(s2b == doctest::Approx(s2).epsilon(1e-9));
    }
}

TEST_CASE("property: classification invariant under boosts") {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> vel(-0.9, 0.9);
    for (int i = 0; i < 200; ++i) {
        const FourEvent a = random_event(gen);
        const FourEvent b = random_event(gen);
        const double v = vel(gen);
        const double s2 = interval_squared(a, b);
        if (std::abs(s2) < 1e-6) continue;  // stay clear of the null band
        CHECK(classify(boost(a, {v}), boost(b, {v}), 1e-7) == classify(a, b, 1e-7));
    }
}

TEST_CASE("property: boost composition with -v restores coordinates") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> vel(-0.95, 0.95);
    for (int i = 0; i < 200; ++i) {
        const FourEvent e = random_event(gen);
        const double v = vel(gen);
        const FourEvent r = boost(boost(e, {v}), {-v});
        CHECK(r.t == doctest::Approx(e.t).epsilon(1e-12));
        CHECK(r.x == doctest::Approx(e.x).epsilon(1e-12));
    }
}

TEST_CASE("property: future light cone preserved under boosts") {
    std::mt19937_64 gen(19);
    std::uniform_real_distribution<double> vel(-0.9, 0.9);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    int causal_pairs = 0;
    for (int i = 0; i < 500; ++i) {
        const FourEvent a = random_event(gen);
        FourEvent b = a;
        // Displace strictly inside the future cone.
        const double dx = coord(gen);
        b.t += std::abs(dx) * 1.5 + 0.1;
        b.x += dx;
        const double v = vel(gen);
        REQUIRE(in_future_lightcone(a, b));
        CHECK(in_future_lightcone(boost(a, {v}), boost(b, {v}), 1e-9));
        ++causal_pairs;
    }
    CHECK(causal_pairs == 500);
}
