#include "escape/render.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace escape {

std::complex<double> pixel_point(const RenderJob& job, int i, int j) {
    const double x = job.center.real() - job.width / 2 + i * (job.width / job.px);
    const double y = job.center.imag() + job.height / 2 - j * (job.height / job.py);
    return {x, y};
}

std::array<std::uint8_t, 3> verdict_color(const EscapeClass& cls) {
    switch (cls.verdict) {
        case EscapeVerdict::FAST: return {255, 255, 255};
        case EscapeVerdict::QUITE_FAST: return {255, 214, 0};
        case EscapeVerdict::QM: {
            // orange ramp darkening with m
            const int step = std::min(cls.m - 2, 3);
            return {static_cast<std::uint8_t>(255 - 25 * step),
                    static_cast<std::uint8_t>(140 - 30 * step), 0};
        }
        case EscapeVerdict::ESCAPING_UNCLASSIFIED: return {40, 90, 255};
        case EscapeVerdict::NOT_ESCAPED_BY_HORIZON: return {0, 0, 0};
    }
    return {0, 0, 0};
}

int resolve_thread_count(int requested) {
    int n = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("ESCAPE_SPEC_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1 && c < n) n = c;
    }
    return n;
}

RenderResult render(const GrowthModel& f, const RenderJob& job, int threads) {
    if (job.px < 1 || job.py < 1)
        throw std::invalid_argument("render: resolution must be at least 1x1");
    if (!(job.width > 0.0) || !(job.height > 0.0))
        throw std::invalid_argument("render: rectangle must be nondegenerate");
    if (!f.has_eval())
        throw std::invalid_argument("render: model '" + f.name +
                                    "' has no complex evaluator");

    RenderResult out;
    out.width = job.px;
    out.height = job.py;
    out.rgb.assign(static_cast<size_t>(job.px) * job.py * 3, 0);

    std::vector<std::string> verdict_per_pixel(static_cast<size_t>(job.px) * job.py);
    const int nthreads = resolve_thread_count(threads);

    // Row-parallel: pixels are pure and independent, each thread writes only
    // its own rows, so the buffer is identical for any thread count.
    const auto worker = [&](int tid) {
        for (int j = tid; j < job.py; j += nthreads) {
            for (int i = 0; i < job.px; ++i) {
                const OrbitRecord rec =
                    iterate_orbit(f, pixel_point(job, i, j), job.horizon, job.ceiling);
                const EscapeClass cls = classify_escape(f, rec, job.R, job.m_list,
                                                        job.eps_list, job.ell_max);
                const auto rgb = verdict_color(cls);
                const size_t at = (static_cast<size_t>(j) * job.px + i);
                out.rgb[at * 3 + 0] = rgb[0];
                out.rgb[at * 3 + 1] = rgb[1];
                out.rgb[at * 3 + 2] = rgb[2];
                verdict_per_pixel[at] = to_string(cls.verdict);
            }
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    for (const std::string& v : verdict_per_pixel) ++out.histogram[v];
    return out;
}

std::string ppm_bytes(const RenderResult& r) {
    std::ostringstream os;
    os << "P6\n" << r.width << " " << r.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(r.rgb.data()),
             static_cast<std::streamsize>(r.rgb.size()));
    return os.str();
}

void write_ppm(const std::string& path, const RenderResult& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const std::string bytes = ppm_bytes(r);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string histogram_csv(const RenderResult& r) {
    std::ostringstream os;
    os << "verdict,count\n";
    for (const auto& [v, n] : r.histogram) os << v << "," << n << "\n";
    return os.str();
}

} // namespace escape
