#include "doctest.h"

#include "escape/tower.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace escape;

TEST_SUITE_BEGIN("tower");

TEST_CASE("normalize reaches canonical form") {
    // repeated natural logs of 1e10, frozen from first principles
    double x = 1e10;
    int lvl = 0;
    while (x >= std::exp(1.0)) {
        x = std::log(x);
        ++lvl;
    }
    const TowerReal t = normalize(0, 1e10);
    CHECK(t.level() == 3);
    CHECK(lvl == 3);
    CHECK(t.mantissa() == doctest::Approx(x).epsilon(1e-14));
    CHECK(t.mantissa() == doctest::Approx(1.14314500218).epsilon(1e-9));

    const TowerReal u = normalize(2, std::exp(1.0));
    CHECK(u.level() == 3);
    CHECK(u.mantissa() == doctest::Approx(1.0).epsilon(1e-15));

    const TowerReal v = normalize(1, 1.5);
    CHECK(v.level() == 1);
    CHECK(v.mantissa() == 1.5);

    // canonical bands: level >= 1 keeps mantissa in [1, e)
    for (double raw : {1e-3, 0.5, 2.0, 10.0, 1e5, 1e100, 1e300}) {
        const TowerReal w = normalize(0, raw);
        if (w.level() >= 1) {
            CHECK(w.mantissa() >= 1.0);
            CHECK(w.mantissa() < std::exp(1.0));
        } else {
            CHECK(w.mantissa() < std::exp(1.0));
        }
    }
    // negative mantissa at level >= 1 is a value below e and canonicalizes down
    const TowerReal neg = normalize(1, -5.0);
    CHECK(neg.level() == 0);
    CHECK(neg.mantissa() == doctest::Approx(std::exp(-5.0)));

    CHECK_THROWS_AS(normalize(0, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(normalize(-1, 2.0), std::invalid_argument);
}

TEST_CASE("log_t") {
    const TowerReal a = normalize(3, 1.14315);
    const TowerReal la = log_t(a);
    CHECK(la.level() == 2);
    CHECK(la.mantissa() == a.mantissa());

    // log of e^2 stays level 0: 2 < e
    const TowerReal b = log_t(tower(std::exp(2.0)));
    CHECK(b.level() == 0);
    CHECK(b.mantissa() == doctest::Approx(2.0).epsilon(1e-14));

    const TowerReal c = log_t(normalize(1, 1.0));
    CHECK(c.level() == 0);
    CHECK(c.mantissa() == doctest::Approx(1.0));

    // level-0 values below 1 have negative logs, still level 0
    const TowerReal d = log_t(tower(0.25));
    CHECK(d.level() == 0);
    CHECK(d.mantissa() == doctest::Approx(std::log(0.25)));

    CHECK_THROWS_AS(log_t(tower(0.0)), std::domain_error);
    CHECK_THROWS_AS(log_t(tower(-3.0)), std::domain_error);
}

TEST_CASE("exp_t, pow_t, scale_t") {
    // pow_t((1,2), 3) = e^6 -> canonical (2, ln 6)
    const TowerReal p = pow_t(normalize(1, 2.0), 3.0);
    CHECK(p.level() == 2);
    CHECK(p.mantissa() == doctest::Approx(std::log(6.0)).epsilon(1e-14));

    // scale identity
    const TowerReal v = normalize(2, 1.7);
    const TowerReal s = scale_t(v, 1.0);
    CHECK(compare(s, v) == 0);
    CHECK(s.mantissa() == v.mantissa());

    // 0.25 * e^10
    const TowerReal q = scale_t(exp_t(tower(10.0)), 0.25);
    CHECK(to_double(log_t(q)).value() ==
          doctest::Approx(10.0 + std::log(0.25)).epsilon(1e-13));

    // exp_t of small level-0 values stays level 0
    const TowerReal e1 = exp_t(tower(-2.0));
    CHECK(e1.level() == 0);
    CHECK(e1.mantissa() == doctest::Approx(std::exp(-2.0)));

    CHECK_THROWS_AS(scale_t(v, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_t(v, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(pow_t(tower(-1.0), 2.0), std::domain_error);
    CHECK_THROWS_AS(pow_t(v, 0.0), std::invalid_argument);
}

TEST_CASE("compare") {
    // exp^3(1) = exp^2(e) < exp^2(3)
    CHECK(compare(normalize(2, 3.0), normalize(3, 1.0)) == 1);
    CHECK(compare(normalize(3, 1.0), normalize(2, 3.0)) == -1);

    // band edge tie: e^(e - tiny) vs (1, 1.0)
    CHECK(compare(tower(std::exp(1.0) * (1.0 - 1e-12)), normalize(1, 1.0)) == 0);

    // levels apart by >= 2 decide on level
    CHECK(compare(tower(0.5), normalize(2, 2.0)) == -1);
    CHECK(compare(normalize(4, 1.0), normalize(1, 2.5)) == 1);

    // negatives sit below everything positive
    CHECK(compare(tower(-3.0), tower(0.1)) == -1);
}

TEST_CASE("round trip and monotonicity properties") {
    std::mt19937_64 rng(4211);
    std::uniform_real_distribution<double> mant(1.0, std::exp(1.0) - 1e-12);
    std::uniform_int_distribution<int> lvl(0, 6);
    for (int i = 0; i < 500; ++i) {
        const TowerReal v = normalize(lvl(rng), mant(rng));
        const TowerReal back = log_t(exp_t(v));
        CHECK(back.level() == v.level());
        CHECK(back.mantissa() == doctest::Approx(v.mantissa()).epsilon(kTowerTol));
    }
    // strictly increasing sample; all ops preserve the order
    std::vector<TowerReal> pts;
    for (int l = 0; l <= 4; ++l)
        for (double m = 1.0; m < 2.7; m += 0.35) pts.push_back(normalize(l, m));
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        CHECK(compare(pts[i], pts[i + 1]) < 0);
        CHECK(compare(exp_t(pts[i]), exp_t(pts[i + 1])) < 0);
        CHECK(compare(log_t(pts[i]), log_t(pts[i + 1])) < 0);
        CHECK(compare(pow_t(pts[i], 2.5), pow_t(pts[i + 1], 2.5)) < 0);
    }
}

TEST_CASE("compare is a total order on sampled sets") {
    std::vector<TowerReal> pts;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> mant(1.0, 2.7);
    std::uniform_int_distribution<int> lvl(0, 5);
    for (int i = 0; i < 60; ++i) pts.push_back(normalize(lvl(rng), mant(rng)));
    pts.push_back(tower(-1.0));
    pts.push_back(tower(0.0));
    for (const auto& a : pts)
        for (const auto& b : pts) {
            CHECK(compare(a, b) == -compare(b, a)); // antisymmetry
            for (const auto& c : pts)
                if (compare(a, b) <= 0 && compare(b, c) <= 0)
                    CHECK(compare(a, c) <= 0); // transitivity
        }
}

TEST_CASE("textual form round-trips") {
    CHECK(to_string(normalize(3, 1.14315)) == "T(3;1.14315)");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-3.0, 2.7);
    std::uniform_int_distribution<int> lvl(0, 8);
    for (int i = 0; i < 300; ++i) {
        const TowerReal v = normalize(lvl(rng), mant(rng));
        const TowerReal w = parse_tower(to_string(v));
        CHECK(w.level() == v.level());
        CHECK(w.mantissa() == v.mantissa()); // %.17g is exact for doubles
    }
    const TowerReal d = parse_tower("  123.5 ");
    CHECK(d.level() == normalize(0, 123.5).level());
    CHECK(to_double(d).value() == doctest::Approx(123.5));
    CHECK_THROWS_AS(parse_tower("T(2)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tower("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_tower(""), std::invalid_argument);
}

TEST_CASE("to_double overflow awareness") {
    CHECK(to_double(normalize(2, 1.5)).value() ==
          doctest::Approx(std::exp(std::exp(1.5))));
    CHECK(!to_double(normalize(4, 2.0)).has_value());
    CHECK(to_double(tower(1e300)).has_value());
}

TEST_SUITE_END();
