#include "escape/orbit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace escape {

namespace {

constexpr double kRayAngleTol = 1e-8;

bool on_positive_ray(std::complex<double> z) {
    return std::abs(z) > 0.0 && std::abs(std::arg(z)) <= kRayAngleTol;
}

// Threshold sequences seq[n], n = 0..steps, computed in conjugated
// coordinates. Returns false when the sequence is not evaluable.
bool m_sequence(const GrowthModel& f, const TowerReal& R, int steps,
                std::vector<TowerReal>& out) {
    try {
        out.clear();
        out.push_back(R);
        TowerReal t = log_t(R);
        for (int n = 1; n <= steps; ++n) {
            t = f.log_max_modulus(exp_t(t));
            out.push_back(exp_t(t));
        }
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

bool mu_sequence(const GrowthModel& f, int m, double eps, const TowerReal& R, int steps,
                 std::vector<TowerReal>& out) {
    try {
        out.clear();
        out.push_back(R);
        TowerReal t = log_iter(R, m - 1);
        for (int n = 1; n <= steps; ++n) {
            t = phi_m_eps(f, m, eps, t);
            out.push_back(exp_iter(t, m - 1));
        }
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

// |f^{n+ell}(z)| >= seq[n] for every step available in the record.
bool dominates(const std::vector<TowerReal>& mags, const std::vector<TowerReal>& seq,
               int ell) {
    const int len = static_cast<int>(mags.size());
    for (int n = 0; n + ell < len; ++n)
        if (compare(mags[n + ell], seq[n]) < 0) return false;
    return true;
}

} // namespace

OrbitRecord iterate_orbit(const GrowthModel& f, std::complex<double> z, int horizon,
                          double ceiling) {
    if (!f.has_eval())
        throw std::invalid_argument("iterate_orbit: model '" + f.name +
                                    "' has no complex evaluator");
    if (horizon < 1) throw std::invalid_argument("iterate_orbit: horizon must be >= 1");
    if (!(ceiling > 1.0) || ceiling >= 1e300)
        throw std::invalid_argument("iterate_orbit: ceiling must lie in (1, 1e300)");

    OrbitRecord rec;
    rec.start = z;
    rec.magnitudes.push_back(tower(std::abs(z)));

    // The ray continuation needs log M evaluable at arbitrary scale, which
    // rules out radius-capped sampled series.
    const bool ray_backend =
        f.positive_ray && f.kind == GrowthKind::ClosedFormLogM;

    std::complex<double> cur = z;
    for (int step = 1; step < horizon; ++step) {
        const double mag = std::abs(cur);
        const bool ray = on_positive_ray(cur) && ray_backend;
        const auto switch_to_tower = [&]() {
            rec.backend_switch_index = step;
            rec.escaped_level0 = true;
            TowerReal x = tower(mag);
            for (; step < horizon; ++step) {
                x = exp_t(f.log_max_modulus(x)); // f|ray = M for ray-preserving models
                rec.magnitudes.push_back(x);
            }
        };
        if (mag > ceiling) {
            if (ray) {
                switch_to_tower();
                return rec;
            }
            rec.escaped_level0 = true; // classification uses the prefix
            return rec;
        }
        const std::complex<double> nxt = f.eval(cur);
        const double nmag = std::abs(nxt);
        if (!std::isfinite(nxt.real()) || !std::isfinite(nxt.imag()) ||
            !std::isfinite(nmag)) {
            // The next value left the double regime before |z| reached the
            // ceiling (exp-family maps overflow from |z| ~ 709). On the ray
            // the tower backend continues exactly; off it the record stops.
            if (ray) {
                switch_to_tower();
                return rec;
            }
            rec.escaped_level0 = true;
            return rec;
        }
        cur = nxt;
        rec.magnitudes.push_back(tower(nmag));
    }
    return rec;
}

std::string to_string(EscapeVerdict v) {
    switch (v) {
        case EscapeVerdict::FAST: return "FAST";
        case EscapeVerdict::QUITE_FAST: return "QUITE_FAST";
        case EscapeVerdict::QM: return "QM";
        case EscapeVerdict::ESCAPING_UNCLASSIFIED: return "ESCAPING_UNCLASSIFIED";
        case EscapeVerdict::NOT_ESCAPED_BY_HORIZON: return "NOT_ESCAPED_BY_HORIZON";
    }
    return "?";
}

EscapeClass classify_escape(const GrowthModel& f, const OrbitRecord& record,
                            const TowerReal& R, std::span<const int> m_list,
                            std::span<const double> eps_list, int ell_max) {
    if (record.magnitudes.empty())
        throw std::invalid_argument("classify_escape: empty orbit record");
    const int len = static_cast<int>(record.magnitudes.size());

    EscapeClass out;
    out.R_used = R;
    out.horizon = len;

    bool exceeded = false;
    for (const TowerReal& mag : record.magnitudes)
        if (compare(mag, R) > 0) {
            exceeded = true;
            break;
        }
    if (!exceeded) {
        out.verdict = EscapeVerdict::NOT_ESCAPED_BY_HORIZON;
        return out;
    }

    const int max_ell = std::min(ell_max, len - 1);
    std::vector<TowerReal> seq;
    if (m_sequence(f, R, len - 1, seq)) {
        for (int ell = 0; ell <= max_ell; ++ell)
            if (dominates(record.magnitudes, seq, ell)) {
                out.verdict = EscapeVerdict::FAST;
                out.ell = ell;
                return out;
            }
    }
    for (int m : m_list) {
        for (auto it = eps_list.rbegin(); it != eps_list.rend(); ++it) {
            if (!mu_sequence(f, m, *it, R, len - 1, seq)) continue;
            for (int ell = 0; ell <= max_ell; ++ell)
                if (dominates(record.magnitudes, seq, ell)) {
                    out.verdict = (m == 1) ? EscapeVerdict::QUITE_FAST
                                           : EscapeVerdict::QM;
                    out.m = m;
                    out.eps = *it;
                    out.ell = ell;
                    return out;
                }
        }
    }
    out.verdict = EscapeVerdict::ESCAPING_UNCLASSIFIED;
    return out;
}

std::vector<AuditRow> hierarchy_audit(const GrowthModel& f, const OrbitRecord& record,
                                      const TowerReal& R, std::span<const int> m_list,
                                      std::span<const double> eps_list, int ell_max) {
    if (record.magnitudes.empty())
        throw std::invalid_argument("hierarchy_audit: empty orbit record");
    const int len = static_cast<int>(record.magnitudes.size());
    const int max_ell = std::min(ell_max, len - 1);

    std::vector<TowerReal> Mseq;
    const bool has_M = m_sequence(f, R, len - 1, Mseq);

    std::vector<AuditRow> rows;
    for (int ell = 0; ell <= max_ell; ++ell) {
        AuditRow fast;
        fast.is_fast = true;
        fast.ell = ell;
        fast.holds = has_M && dominates(record.magnitudes, Mseq, ell);
        rows.push_back(fast);
    }
    std::vector<TowerReal> seq;
    for (int m : m_list)
        for (double eps : eps_list) {
            const bool has_mu = mu_sequence(f, m, eps, R, len - 1, seq);
            for (int ell = 0; ell <= max_ell; ++ell) {
                AuditRow row;
                row.m = m;
                row.eps = eps;
                row.ell = ell;
                row.holds = has_mu && dominates(record.magnitudes, seq, ell);
                rows.push_back(row);
            }
        }
    return rows;
}

std::string orbit_csv(const OrbitRecord& record) {
    std::ostringstream os;
    os << "step,magnitude\n";
    for (size_t j = 0; j < record.magnitudes.size(); ++j)
        os << j << "," << to_string(record.magnitudes[j]) << "\n";
    return os.str();
}

} // namespace escape
