#include "doctest.h"

#include "escape/catalog.hpp"
#include "escape/orbit.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

using namespace escape;

namespace {

const Catalog& cat() {
    static const Catalog c = builtin_catalog();
    return c;
}

const GrowthModel& model(const char* name) { return find_model(cat(), name); }

const std::vector<int> kM{1, 2, 3};
const std::vector<double> kEps{0.25, 0.5, 0.75};

} // namespace

TEST_SUITE_BEGIN("orbit");

TEST_CASE("exp orbit from 0 climbs the exact tower") {
    const OrbitRecord rec = iterate_orbit(model("exp"), {0.0, 0.0}, 10);
    REQUIRE(rec.magnitudes.size() == 10);
    CHECK(to_double(rec.magnitudes[0]).value() == 0.0);
    CHECK(to_double(rec.magnitudes[1]).value() == 1.0);
    CHECK(to_double(rec.magnitudes[2]).value() == doctest::Approx(std::exp(1.0)));
    CHECK(to_double(rec.magnitudes[3]).value() ==
          doctest::Approx(std::exp(std::exp(1.0))));
    // |f^{n+1}(0)| = exp^n(1)
    for (int n = 4; n < 10; ++n) {
        const TowerReal want = exp_iter(tower(1.0), n - 1);
        CHECK(compare(rec.magnitudes[n], want) == 0);
    }
    CHECK(rec.backend_switch_index.has_value());
    CHECK(rec.escaped_level0);
}

TEST_CASE("quarter-exp orbit from 0 settles at the attracting fixed point") {
    // oracle: bisect x = e^x/4 on [0, 1]
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = (lo + hi) / 2;
        (0.25 * std::exp(mid) > mid ? lo : hi) = mid;
    }
    CHECK(hi == doctest::Approx(0.357403).epsilon(1e-5));

    const OrbitRecord rec = iterate_orbit(model("quarter_exp"), {0.0, 0.0}, 100);
    REQUIRE(rec.magnitudes.size() == 100);
    CHECK(to_double(rec.magnitudes[1]).value() == doctest::Approx(0.25));
    CHECK(to_double(rec.magnitudes[2]).value() ==
          doctest::Approx(0.25 * std::exp(0.25)).epsilon(1e-12));
    CHECK(to_double(rec.magnitudes[99]).value() == doctest::Approx(hi).epsilon(1e-9));
    CHECK(!rec.escaped_level0);
    CHECK(!rec.backend_switch_index.has_value());
}

TEST_CASE("orbit of i*pi goes real after one step and reaches the tower backend") {
    const OrbitRecord rec = iterate_orbit(model("exp"), {0.0, M_PI}, 12);
    // all iterates are real after exp(i pi) = -1; hand iteration from there
    double expect[7] = {M_PI, 1.0};
    expect[2] = std::exp(-1.0);
    for (int i = 3; i < 7; ++i) expect[i] = std::exp(expect[i - 1]);
    CHECK(expect[4] == doctest::Approx(4.2404).epsilon(1e-4));
    CHECK(expect[5] == doctest::Approx(69.44).epsilon(1e-3));
    for (int i = 0; i < 7; ++i)
        CHECK(to_double(rec.magnitudes[i]).value() ==
              doctest::Approx(expect[i]).epsilon(1e-9));
    REQUIRE(rec.backend_switch_index.has_value());
    CHECK(*rec.backend_switch_index == 7);
    // tower continuation fills the whole horizon, one exact level per step
    REQUIRE(rec.magnitudes.size() == 12);
    for (size_t j = 8; j < rec.magnitudes.size(); ++j)
        CHECK(rec.magnitudes[j].level() == rec.magnitudes[j - 1].level() + 1);
}

TEST_CASE("real-axis exactness: tower backend has zero level drift") {
    const OrbitRecord rec = iterate_orbit(model("exp"), {3.0, 0.0}, 25);
    REQUIRE(rec.backend_switch_index.has_value());
    const int sw = *rec.backend_switch_index;
    for (int n = 0; n < 25; ++n) {
        const TowerReal want = exp_iter(tower(3.0), n);
        CHECK(compare(rec.magnitudes[n], want) == 0);
        CHECK(rec.magnitudes[n].level() == want.level());
    }
    // after the switch the mantissa is carried exactly, level +1 per step
    for (size_t j = sw + 1; j < rec.magnitudes.size(); ++j) {
        CHECK(rec.magnitudes[j].mantissa() == rec.magnitudes[j - 1].mantissa());
        CHECK(rec.magnitudes[j].level() == rec.magnitudes[j - 1].level() + 1);
    }
}

TEST_CASE("off-ray escapes stop at the computed prefix") {
    // cosh sends i*y to cos(y) on the reals, but exp(z^2) from 3+3i blows up
    // with a rotating iterate; the record must stop early, flagged
    const OrbitRecord rec = iterate_orbit(model("exp"), {2.0, 1.0}, 60);
    CHECK(rec.magnitudes.size() <= 60);
    if (rec.magnitudes.size() < 60) CHECK(rec.escaped_level0);
}

TEST_CASE("classification ground truth") {
    const GrowthModel& ex = model("exp");

    const OrbitRecord r10 = iterate_orbit(ex, {10.0, 0.0}, 40);
    const EscapeClass c10 = classify_escape(ex, r10, tower(2.0), kM, kEps, 8);
    CHECK(c10.verdict == EscapeVerdict::FAST);
    CHECK(c10.ell == 0);

    // seed 0, R=1: f^{n+1}(0) = exp^n(1) = M^n(1), the non-strict boundary case
    const OrbitRecord r0 = iterate_orbit(ex, {0.0, 0.0}, 40);
    const EscapeClass c0 = classify_escape(ex, r0, tower(1.0), kM, kEps, 8);
    CHECK(c0.verdict == EscapeVerdict::FAST);
    CHECK(c0.ell == 1);

    const OrbitRecord rq = iterate_orbit(model("quarter_exp"), {0.0, 0.0}, 100);
    const EscapeClass cq =
        classify_escape(model("quarter_exp"), rq, tower(3.0), kM, kEps, 8);
    CHECK(cq.verdict == EscapeVerdict::NOT_ESCAPED_BY_HORIZON);
    CHECK(cq.horizon == 100);

    CHECK_THROWS_AS(classify_escape(ex, OrbitRecord{}, tower(2.0), kM, kEps, 8),
                    std::invalid_argument);
}

TEST_CASE("audit: FAST rows never outrun QM rows at the same shift") {
    const GrowthModel& ex = model("exp");
    // R=3 >= e keeps mu_{m,eps}(r) <= M(r) for the whole menu
    const TowerReal R = tower(3.0);
    std::mt19937_64 rng(7741);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 60; ++i) {
        const OrbitRecord rec = iterate_orbit(ex, {u(rng), u(rng)}, 30);
        const auto rows = hierarchy_audit(ex, rec, R, kM, kEps, 6);
        for (const AuditRow& fast : rows) {
            if (!fast.is_fast || !fast.holds) continue;
            for (const AuditRow& qm : rows)
                if (!qm.is_fast && qm.ell == fast.ell) CHECK(qm.holds);
        }
    }
}

TEST_CASE("audit separates the mu threshold families") {
    const GrowthModel& ex = model("exp");
    const TowerReal R = tower(3.0);
    // a synthetic orbit tracking the mu_{2,1/2} iterates: above the mu_{2,1/4}
    // thresholds, below the mu_{1,3/4} ones
    OrbitRecord rec;
    rec.start = {3.0, 0.0};
    for (int n = 0; n <= 12; ++n)
        rec.magnitudes.push_back(iterate_mu(ex, 2, 0.5, R, n));
    const auto rows = hierarchy_audit(ex, rec, R, kM, kEps, 3);
    bool qm2_quarter_ell0 = false, qm1_strong_ell0 = true, fast_ell0 = true;
    for (const AuditRow& r : rows) {
        if (r.is_fast && r.ell == 0) fast_ell0 = r.holds;
        if (!r.is_fast && r.m == 2 && r.eps == 0.25 && r.ell == 0)
            qm2_quarter_ell0 = r.holds;
        if (!r.is_fast && r.m == 1 && r.eps == 0.75 && r.ell == 0)
            qm1_strong_ell0 = r.holds;
    }
    CHECK(qm2_quarter_ell0);
    CHECK(!qm1_strong_ell0);
    CHECK(!fast_ell0);
}

TEST_CASE("backend consistency: early and late switches classify identically") {
    // poly6 climbs slowly enough that the two ceilings switch at different steps
    const GrowthModel& ex = model("poly6");
    const OrbitRecord late = iterate_orbit(ex, {10.0, 0.0}, 30, 1e15);
    const OrbitRecord early = iterate_orbit(ex, {10.0, 0.0}, 30, 1e5);
    REQUIRE(late.magnitudes.size() == early.magnitudes.size());
    REQUIRE(early.backend_switch_index.value() < late.backend_switch_index.value());
    for (size_t j = 0; j < late.magnitudes.size(); ++j)
        CHECK(compare(late.magnitudes[j], early.magnitudes[j]) == 0);
    const EscapeClass cl = classify_escape(ex, late, tower(2.0), kM, kEps, 8);
    const EscapeClass ce = classify_escape(ex, early, tower(2.0), kM, kEps, 8);
    CHECK(cl.verdict == ce.verdict);
    CHECK(cl.ell == ce.ell);
}

TEST_CASE("iterate argument validation") {
    CHECK_THROWS_AS(iterate_orbit(model("ex53"), {1.0, 0.0}, 10),
                    std::invalid_argument); // no complex evaluator
    CHECK_THROWS_AS(iterate_orbit(model("exp"), {1.0, 0.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(iterate_orbit(model("exp"), {1.0, 0.0}, 10, 1e301),
                    std::invalid_argument);
}

TEST_CASE("orbit csv dump") {
    const OrbitRecord rec = iterate_orbit(model("exp"), {1.0, 0.0}, 5);
    const std::string csv = orbit_csv(rec);
    CHECK(csv.rfind("step,magnitude\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.find("0,T(0;1)") != std::string::npos);
}

TEST_SUITE_END();
