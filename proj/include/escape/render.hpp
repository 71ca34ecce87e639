#pragma once

// Plane classification renderer: every pixel is classified independently and
// colored by verdict, so the image is deterministic for a fixed job no matter
// how many threads run it.

#include "escape/orbit.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace escape {

struct RenderJob {
    std::string fn;
    std::complex<double> center{0.0, 0.0};
    double width = 4.0;
    double height = 4.0;
    int px = 64;
    int py = 64;
    TowerReal R;
    std::vector<int> m_list{1, 2, 3};
    std::vector<double> eps_list{0.25, 0.5, 0.75};
    int ell_max = 8;
    int horizon = 30;
    double ceiling = 1e15;
};

struct RenderResult {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // 3 bytes per pixel, row-major
    std::map<std::string, long> histogram;
};

// Pixel (i, j) samples z = (cx - w/2 + i*w/px) + (cy + h/2 - j*h/py) i, so a
// centered even-height job puts row py/2 exactly on the real axis.
std::complex<double> pixel_point(const RenderJob& job, int i, int j);

// Hierarchy reads as brightness: FAST white, QUITE_FAST yellow, QM(m>=2)
// orange ramp, unclassified blue, not-escaped black.
std::array<std::uint8_t, 3> verdict_color(const EscapeClass& cls);

// threads <= 0 picks hardware concurrency; the ESCAPE_SPEC_THREADS env var
// caps it either way.
RenderResult render(const GrowthModel& f, const RenderJob& job, int threads = 0);

// Binary portable pixmap, header "P6\n<w> <h>\n255\n" then RGB bytes.
std::string ppm_bytes(const RenderResult& r);
void write_ppm(const std::string& path, const RenderResult& r);

std::string histogram_csv(const RenderResult& r);

// Honors ESCAPE_SPEC_THREADS; returns a value >= 1.
int resolve_thread_count(int requested);

} // namespace escape
