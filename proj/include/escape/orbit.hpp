#pragma once

// Orbit computation and escape-speed classification against the iterated
// threshold sequences M^n(R) and mu_{m,eps}^n(R).

#include "escape/growth.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace escape {

struct OrbitRecord {
    std::complex<double> start;
    // magnitudes[j] = |f^j(z)|, j < horizon; may stop early (see below)
    std::vector<TowerReal> magnitudes;
    // first index produced by the real-axis tower backend, if it engaged
    std::optional<int> backend_switch_index;
    // the orbit left the double-precision regime (above the ceiling, or the
    // next evaluation overflowed)
    bool escaped_level0 = false;
};

// Complex iteration until |f^j(z)| exceeds `ceiling` (or the next evaluation
// overflows); from there, if the iterate sits on the positive real axis
// (within 1e-8 rad) and the model preserves that ray, continue with exact
// tower steps x -> M(x). Off the ray the record stops at the computed prefix
// with escaped_level0 set; classification then certifies over that prefix.
OrbitRecord iterate_orbit(const GrowthModel& f, std::complex<double> z, int horizon,
                          double ceiling = 1e15);

enum class EscapeVerdict { FAST, QUITE_FAST, QM, ESCAPING_UNCLASSIFIED,
                           NOT_ESCAPED_BY_HORIZON };

std::string to_string(EscapeVerdict v);

struct EscapeClass {
    EscapeVerdict verdict = EscapeVerdict::NOT_ESCAPED_BY_HORIZON;
    int m = 0;        // witness for QM verdicts (QUITE_FAST = QM with m = 1)
    double eps = 0.0; // witness eps
    int ell = 0;      // witness shift
    int horizon = 0;  // steps available to the certificate
    TowerReal R_used;
};

// Strongest verdict whose defining inequality holds at every available step:
// FAST (least ell), then QM by ascending m (largest eps first), else
// ESCAPING_UNCLASSIFIED; NOT_ESCAPED_BY_HORIZON when no magnitude exceeds R.
// Every verdict is a finite-horizon certificate over the computed prefix.
EscapeClass classify_escape(const GrowthModel& f, const OrbitRecord& record,
                            const TowerReal& R, std::span<const int> m_list,
                            std::span<const double> eps_list, int ell_max);

struct AuditRow {
    bool is_fast = false; // otherwise a QM row
    int m = 0;
    double eps = 0.0;
    int ell = 0;
    bool holds = false;
};

// Truth table of the defining inequalities over the finite orbit, one row per
// (FAST | (m, eps)) x ell.
std::vector<AuditRow> hierarchy_audit(const GrowthModel& f, const OrbitRecord& record,
                                      const TowerReal& R, std::span<const int> m_list,
                                      std::span<const double> eps_list, int ell_max);

// Orbit dump rows "step,magnitude" with a header line.
std::string orbit_csv(const OrbitRecord& record);

} // namespace escape
