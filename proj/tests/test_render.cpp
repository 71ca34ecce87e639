#include "doctest.h"

#include "escape/catalog.hpp"
#include "escape/render.hpp"

#include <cstdlib>

using namespace escape;

namespace {

const GrowthModel& model(const char* name) {
    static const Catalog c = builtin_catalog();
    return find_model(c, name);
}

RenderJob exp_job(int px, int py) {
    RenderJob job;
    job.fn = "exp";
    job.center = {5.0, 0.0};
    job.width = 8.0;
    job.height = 8.0;
    job.px = px;
    job.py = py;
    job.R = tower(2.0);
    job.horizon = 30;
    return job;
}

} // namespace

TEST_SUITE_BEGIN("render");

TEST_CASE("pixel grid puts a row exactly on the real axis") {
    const RenderJob job = exp_job(64, 64);
    CHECK(pixel_point(job, 32, 32) == std::complex<double>(5.0, 0.0));
    CHECK(pixel_point(job, 0, 32).imag() == 0.0);
    CHECK(pixel_point(job, 0, 0).real() == 1.0);
    CHECK(pixel_point(job, 0, 0).imag() == 4.0);
}

TEST_CASE("render is deterministic across runs and thread counts") {
    const RenderJob job = exp_job(48, 48);
    const GrowthModel& ex = model("exp");
    const RenderResult once = render(ex, job, 1);
    const RenderResult again = render(ex, job, 1);
    CHECK(ppm_bytes(once) == ppm_bytes(again));
    const RenderResult four = render(ex, job, 4);
    const RenderResult eight = render(ex, job, 8);
    CHECK(ppm_bytes(once) == ppm_bytes(four));
    CHECK(ppm_bytes(once) == ppm_bytes(eight));
}

TEST_CASE("histogram totals the pixel count; axis row is fast") {
    const RenderJob job = exp_job(64, 64);
    const RenderResult res = render(model("exp"), job, 0);
    long total = 0;
    for (const auto& [v, n] : res.histogram) total += n;
    CHECK(total == 64 * 64);
    CHECK(res.histogram.at("FAST") >= 64);

    // the real-axis row: every pixel with Re z >= R is FAST-colored (white)
    const int j = 32;
    for (int i = 0; i < 64; ++i) {
        const auto z = pixel_point(job, i, j);
        if (z.real() < 2.0) continue;
        const size_t at = (static_cast<size_t>(j) * 64 + i) * 3;
        CHECK(res.rgb[at + 0] == 255);
        CHECK(res.rgb[at + 1] == 255);
        CHECK(res.rgb[at + 2] == 255);
    }
}

TEST_CASE("single not-escaped pixel renders black") {
    RenderJob job;
    job.fn = "quarter_exp";
    job.center = {0.0, 0.0};
    job.width = 0.1;
    job.height = 0.1;
    job.px = 1;
    job.py = 1;
    job.R = tower(3.0);
    job.horizon = 60;
    const RenderResult res = render(model("quarter_exp"), job, 1);
    REQUIRE(res.rgb.size() == 3);
    CHECK(res.rgb[0] == 0);
    CHECK(res.rgb[1] == 0);
    CHECK(res.rgb[2] == 0);
    CHECK(res.histogram.at("NOT_ESCAPED_BY_HORIZON") == 1);
}

TEST_CASE("ppm bytes are bit-exact") {
    const RenderResult res = render(model("exp"), exp_job(16, 8), 1);
    const std::string bytes = ppm_bytes(res);
    CHECK(bytes.rfind("P6\n16 8\n255\n", 0) == 0);
    CHECK(bytes.size() == 12 + 16 * 8 * 3);
    const std::string csv = histogram_csv(res);
    CHECK(csv.rfind("verdict,count\n", 0) == 0);
}

TEST_CASE("thread cap honors the environment variable") {
    setenv("ESCAPE_SPEC_THREADS", "2", 1);
    CHECK(resolve_thread_count(8) == 2);
    CHECK(resolve_thread_count(1) == 1);
    unsetenv("ESCAPE_SPEC_THREADS");
    CHECK(resolve_thread_count(8) == 8);
}

TEST_CASE("render argument validation") {
    RenderJob bad = exp_job(0, 4);
    CHECK_THROWS_AS(render(model("exp"), bad, 1), std::invalid_argument);
    bad = exp_job(4, 4);
    bad.width = 0.0;
    CHECK_THROWS_AS(render(model("exp"), bad, 1), std::invalid_argument);
    CHECK_THROWS_AS(render(model("ex53"), exp_job(4, 4), 1), std::invalid_argument);
}

TEST_SUITE_END();
