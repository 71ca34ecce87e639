#include "escape/growth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace escape {

namespace {

constexpr double kPi = std::numbers::pi;

void ensure_positive_radius(const TowerReal& r, const char* who) {
    if (r.level() == 0 && r.mantissa() <= 0.0)
        throw std::domain_error(std::string(who) + ": requires r > 0");
}

// Value-scale scalar offset v + c; absorbed once v is outside double range
// (|c| is then below the representable precision of v).
TowerReal shift_value(const TowerReal& v, double c) {
    if (c == 0.0) return v;
    if (auto d = to_double(v); d && std::abs(*d) < 1e305)
        return normalize(0, *d + c);
    return v;
}

// log(x + y) from la = log x, lb = log y. Falls back to max when the gap is
// beyond double resolution.
TowerReal log_add(const TowerReal& la, const TowerReal& lb) {
    const bool a_hi = compare(la, lb) >= 0;
    const TowerReal& hi = a_hi ? la : lb;
    const TowerReal& lo = a_hi ? lb : la;
    auto h = to_double(hi);
    auto l = to_double(lo);
    if (h && l && std::abs(*h) < 1e300)
        return normalize(0, *h + std::log1p(std::exp(*l - *h)));
    return hi;
}

double horner_abs(const std::vector<double>& coeff, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it)
        acc = acc * z + *it;
    return std::abs(acc);
}

// max_{|z|=r} |p(z)| by 1024-angle sweep plus golden-section refinement of
// the winning bracket. Entire-function moduli are smooth in the angle.
double series_max_modulus(const std::vector<double>& coeff, double r) {
    constexpr int kAngles = 1024;
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < kAngles; ++i) {
        const double th = 2.0 * kPi * i / kAngles;
        const double v = horner_abs(coeff, std::polar(r, th));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double lo = 2.0 * kPi * (best_i - 1) / kAngles;
    double hi = 2.0 * kPi * (best_i + 1) / kAngles;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = horner_abs(coeff, std::polar(r, x1));
    double f2 = horner_abs(coeff, std::polar(r, x2));
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = horner_abs(coeff, std::polar(r, x2));
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = horner_abs(coeff, std::polar(r, x1));
        }
    }
    return std::max(best, std::max(f1, f2));
}

double log_sum_exp(const std::vector<double>& terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (double t : terms) m = std::max(m, t);
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

} // namespace

std::string to_string(GrowthKind k) {
    switch (k) {
        case GrowthKind::ClosedFormLogM: return "closed_form";
        case GrowthKind::PowerSeries: return "power_series";
        case GrowthKind::PiecewisePhi: return "piecewise_phi";
    }
    return "?";
}

GrowthKind parse_growth_kind(const std::string& s) {
    if (s == "closed_form") return GrowthKind::ClosedFormLogM;
    if (s == "power_series") return GrowthKind::PowerSeries;
    if (s == "piecewise_phi") return GrowthKind::PiecewisePhi;
    throw std::invalid_argument("unknown growth kind: " + s);
}

// --- PiecewisePhiSpec --------------------------------------------------------

TowerReal PiecewisePhiSpec::segment_lo(int n) const {
    return pow_t(breakpoints.at(n + 1), 0.75);
}

TowerReal PiecewisePhiSpec::segment_hi(int n) const {
    return breakpoints.at(n + 1);
}

int PiecewisePhiSpec::segment_of(const TowerReal& t) const {
    for (int n = 0; n < segment_count(); ++n) {
        if (compare(t, segment_hi(n)) > 0) continue;
        if (compare(t, segment_lo(n)) >= 0) return n;
        break; // segments are disjoint and ascending
    }
    return -1;
}

TowerReal PiecewisePhiSpec::base_value(const TowerReal& t) const {
    return exp_t(pow_t(t, 0.5));
}

TowerReal PiecewisePhiSpec::value(const TowerReal& t) const {
    if (t.level() == 0 && t.mantissa() <= 0.0)
        throw std::domain_error("piecewise phi: t must be positive");
    const int seg = segment_of(t);
    if (seg < 0) return base_value(t);

    const TowerReal a = segment_lo(seg);
    const TowerReal b = segment_hi(seg);
    const TowerReal la = pow_t(a, 0.5); // log mu at the endpoints
    const TowerReal lb = pow_t(b, 0.5);

    // Chord of mu over [a, b]. Direct when everything fits in doubles.
    // segment_of admits t within the comparison tolerance, so rho is clamped
    // to the segment.
    {
        auto td = to_double(t), ad = to_double(a), bd = to_double(b);
        auto ma = to_double(exp_t(la)), mb = to_double(exp_t(lb));
        if (td && ad && bd && ma && mb) {
            const double rho = std::clamp((*td - *ad) / (*bd - *ad), 0.0, 1.0);
            return normalize(0, *ma + rho * (*mb - *ma));
        }
    }

    // Log-space blend: phi = (1-rho) mu(a) + rho mu(b), worked through the
    // logs so the huge endpoint dominates correctly.
    auto Lt = to_double(log_t(t)), La = to_double(log_t(a)), Lb = to_double(log_t(b));
    if (Lt && La && Lb) {
        if (*Lt <= *La) return exp_t(la);
        if (*Lt >= *Lb) return exp_t(lb);
        const double log_rho = (*Lt - *Lb) + std::log1p(-std::exp(*La - *Lt)) -
                               std::log1p(-std::exp(*La - *Lb));
        if (std::isinf(log_rho)) return exp_t(la); // t == a
        const double log_1mrho = (log_rho >= 0.0)
                                     ? -std::numeric_limits<double>::infinity()
                                     : std::log1p(-std::exp(log_rho));
        const TowerReal hi_term = shift_value(lb, log_rho);
        if (std::isinf(log_1mrho)) return exp_t(hi_term); // t == b
        return exp_t(log_add(shift_value(la, log_1mrho), hi_term));
    }

    // Deeper than the logs reach: the chord collapses to its dominant
    // endpoint below any representable resolution.
    if (compare(t, a) == 0) return exp_t(la);
    return exp_t(lb);
}

// --- GrowthModel -------------------------------------------------------------

TowerReal GrowthModel::log_max_modulus(const TowerReal& r) const {
    switch (kind) {
        case GrowthKind::ClosedFormLogM: {
            ensure_positive_radius(r, "log_max_modulus");
            if (form == "exp") return r;
            if (form == "lambda_exp") return shift_value(r, std::log(lambda));
            if (form == "cosh") {
                if (auto rd = to_double(r)) {
                    // log cosh x = x + log1p(e^{-2x}) - log 2, exact for x >= 0
                    return normalize(0, *rd + std::log1p(std::exp(-2.0 * *rd)) -
                                            std::numbers::ln2);
                }
                return r; // -log 2 absorbed
            }
            if (form == "exp_sq") return pow_t(r, 2.0);
            if (form == "poly") {
                TowerReal lr;
                try {
                    lr = log_t(r);
                } catch (const std::domain_error&) {
                    throw std::domain_error("log_max_modulus: poly requires r > 0");
                }
                if (auto ld = to_double(lr); ld && std::abs(*ld) < 1e300) {
                    std::vector<double> terms;
                    for (size_t i = 0; i < coefficients.size(); ++i)
                        if (coefficients[i] > 0.0)
                            terms.push_back(std::log(coefficients[i]) +
                                            static_cast<double>(i) * *ld);
                    return normalize(0, log_sum_exp(terms));
                }
                return scale_t(lr, static_cast<double>(coefficients.size() - 1));
            }
            throw std::logic_error("unknown closed form: " + form);
        }
        case GrowthKind::PowerSeries: {
            ensure_positive_radius(r, "log_max_modulus");
            auto rd = to_double(r);
            if (!rd || *rd > series_r_max)
                throw std::domain_error("log_max_modulus: power series '" + name +
                                        "' sampled only for r <= " +
                                        std::to_string(series_r_max));
            return normalize(0, std::log(series_max_modulus(coefficients, *rd)));
        }
        case GrowthKind::PiecewisePhi: {
            TowerReal t;
            try {
                t = log_t(r);
            } catch (const std::domain_error&) {
                throw std::domain_error("log_max_modulus: piecewise phi requires r > 1");
            }
            if (t.level() == 0 && t.mantissa() <= 0.0)
                throw std::domain_error("log_max_modulus: piecewise phi requires r > 1");
            return phi_spec.value(t);
        }
    }
    throw std::logic_error("unreachable");
}

bool GrowthModel::has_eval() const {
    return kind != GrowthKind::PiecewisePhi;
}

std::complex<double> GrowthModel::eval(std::complex<double> z) const {
    if (kind == GrowthKind::PowerSeries || form == "poly") {
        std::complex<double> acc(0.0, 0.0);
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }
    if (form == "exp") return std::exp(z);
    if (form == "lambda_exp") return lambda * std::exp(z);
    if (form == "cosh") return std::cosh(z);
    if (form == "exp_sq") return std::exp(z * z);
    throw std::logic_error("model '" + name + "' has no complex evaluator");
}

std::optional<TowerReal> GrowthModel::mu_exceeds_r_from(int m, double eps) const {
    const auto key = std::make_pair(m, static_cast<int>(eps * 1000.0 + 0.5));
    if (auto it = mu_thresholds_.find(key); it != mu_thresholds_.end())
        return it->second;
    return find_mu_gt_r_threshold(*this, m, eps);
}

void GrowthModel::finalize() {
    if (kind == GrowthKind::PiecewisePhi) {
        phi_spec.breakpoints.clear();
        if (phi_spec.breakpoint_count > 0) {
            phi_spec.breakpoints.push_back(tower(phi_spec.t1));
            for (int i = 1; i < phi_spec.breakpoint_count; ++i)
                phi_spec.breakpoints.push_back(exp_t(phi_spec.breakpoints.back()));
        }
    }
    if (form == "poly" || kind == GrowthKind::PowerSeries) {
        if (coefficients.empty())
            throw std::invalid_argument("model '" + name + "': coefficients required");
        for (double c : coefficients)
            if (c < 0.0)
                throw std::invalid_argument("model '" + name +
                                            "': coefficients must be non-negative");
    }
    mu_thresholds_.clear();
    for (int m : m_menu())
        for (double eps : eps_menu())
            mu_thresholds_[{m, static_cast<int>(eps * 1000.0 + 0.5)}] =
                find_mu_gt_r_threshold(*this, m, eps);
}

// --- menus and grids ---------------------------------------------------------

const std::vector<double>& eps_menu() {
    static const std::vector<double> v{0.25, 0.5, 0.75};
    return v;
}

const std::vector<double>& k_menu() {
    static const std::vector<double> v{1.25, 1.5, 2.0, 3.0, 5.0, 10.0};
    return v;
}

const std::vector<int>& m_menu() {
    static const std::vector<int> v{1, 2, 3};
    return v;
}

std::vector<TowerReal> tower_grid(int level_lo, int level_hi, int per_level) {
    std::vector<TowerReal> pts;
    pts.reserve(static_cast<size_t>(level_hi - level_lo + 1) * per_level);
    for (int l = level_lo; l <= level_hi; ++l)
        for (int i = 0; i < per_level; ++i)
            pts.push_back(normalize(l, std::exp(static_cast<double>(i) / per_level)));
    return pts;
}

namespace {

// Extra sample points across (and just off) each chord segment, in t-space.
// Endpoint mantissas share a level, so a mantissa sweep tracks the segment.
void append_segment_points(const PiecewisePhiSpec& spec, int level_hi,
                           std::vector<TowerReal>& out) {
    for (int n = 0; n < spec.segment_count(); ++n) {
        const TowerReal a = spec.segment_lo(n);
        const TowerReal b = spec.segment_hi(n);
        if (a.level() > level_hi + 1) break;
        out.push_back(scale_t(a, 0.9)); // just below the segment
        auto ad = to_double(a), bd = to_double(b);
        constexpr int kInner = 16;
        for (int j = 0; j <= kInner; ++j) {
            const double u = static_cast<double>(j) / kInner;
            if (ad && bd) {
                // log-spaced within the segment
                out.push_back(normalize(
                    0, std::exp(std::log(*ad) + u * (std::log(*bd) - std::log(*ad)))));
            } else if (a.level() == b.level()) {
                out.push_back(normalize(
                    a.level(), a.mantissa() + u * (b.mantissa() - a.mantissa())));
            }
        }
        out.push_back(scale_t(b, 1.1)); // just above
    }
}

void sort_unique(std::vector<TowerReal>& pts) {
    std::sort(pts.begin(), pts.end(),
              [](const TowerReal& x, const TowerReal& y) { return compare(x, y) < 0; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const TowerReal& x, const TowerReal& y) {
                              return compare(x, y) == 0;
                          }),
              pts.end());
}

} // namespace

std::vector<TowerReal> r_grid_for(const GrowthModel& f, int level_hi) {
    std::vector<TowerReal> pts = tower_grid(0, level_hi);
    const TowerReal start = tower(std::max(f.r_min, 1.0));
    std::erase_if(pts, [&](const TowerReal& p) { return compare(p, start) < 0; });
    if (f.kind == GrowthKind::PiecewisePhi) {
        // r-space images of the t-space segment points
        std::vector<TowerReal> tpts;
        append_segment_points(f.phi_spec, level_hi, tpts);
        for (const TowerReal& t : tpts) {
            TowerReal r = exp_t(t);
            if (compare(r, start) >= 0 && r.level() <= level_hi) pts.push_back(r);
        }
    }
    sort_unique(pts);
    return pts;
}

std::vector<TowerReal> t_grid_for(const GrowthModel& f, int level_hi) {
    std::vector<TowerReal> pts = tower_grid(0, level_hi);
    if (f.kind == GrowthKind::PiecewisePhi)
        append_segment_points(f.phi_spec, level_hi, pts);
    sort_unique(pts);
    return pts;
}

// --- derived maps ------------------------------------------------------------

TowerReal max_modulus_log(const GrowthModel& f, const TowerReal& r) {
    return f.log_max_modulus(r);
}

TowerReal mu(const GrowthModel& f, int m, double eps, const TowerReal& r) {
    if (m < 1) throw std::invalid_argument("mu: m must be >= 1");
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("mu: eps must lie in (0,1]");
    TowerReal L = f.log_max_modulus(r);
    for (int d = 2; d <= m; ++d) {
        try {
            L = log_t(L);
        } catch (const std::domain_error&) {
            throw std::domain_error("mu: log^" + std::to_string(d) +
                                    " M(r) undefined at r = " + to_string(r));
        }
    }
    return exp_iter(scale_t(L, eps), m);
}

TowerReal phi_m(const GrowthModel& f, int m, const TowerReal& t) {
    if (m < 1) throw std::invalid_argument("phi_m: m must be >= 1");
    // log^{m-1} M(exp^{m-1} t); log of M is already one log deep.
    const TowerReal logM = f.log_max_modulus(exp_iter(t, m - 1));
    if (m == 1) return exp_t(logM);
    try {
        return log_iter(logM, m - 2);
    } catch (const std::domain_error&) {
        throw std::domain_error("phi_m: iterated log of M undefined at t = " +
                                to_string(t));
    }
}

TowerReal phi_m_eps(const GrowthModel& f, int m, double eps, const TowerReal& t) {
    return pow_t(phi_m(f, m, t), eps);
}

TowerReal psi_m(int n, int m, double p, const TowerReal& t) {
    if (n < 0 || m < 1) throw std::invalid_argument("psi_m: need n >= 0, m >= 1");
    const int depth = n + m - 1;
    return exp_iter(pow_t(log_iter(t, depth), p), depth);
}

TowerReal iterate_mu(const GrowthModel& f, int m, double eps, const TowerReal& r, int n) {
    if (n < 0) throw std::invalid_argument("iterate_mu: n must be >= 0");
    if (n == 0) return r;
    TowerReal t = log_iter(r, m - 1);
    for (int i = 0; i < n; ++i) t = phi_m_eps(f, m, eps, t);
    return exp_iter(t, m - 1);
}

TowerReal iterate_M(const GrowthModel& f, const TowerReal& r, int n) {
    if (n < 0) throw std::invalid_argument("iterate_M: n must be >= 0");
    if (n == 0) return r;
    TowerReal t = log_t(r);
    for (int i = 0; i < n; ++i) t = f.log_max_modulus(exp_t(t));
    return exp_t(t);
}

std::optional<TowerReal> find_mu_gt_r_threshold(const GrowthModel& f, int m, double eps) {
    const std::vector<TowerReal> grid = r_grid_for(f);
    if (grid.empty()) return std::nullopt;
    const int top_level = grid.back().level();
    std::optional<size_t> first_ok;
    for (size_t i = 0; i < grid.size(); ++i) {
        bool holds;
        try {
            holds = compare(mu(f, m, eps, grid[i]), grid[i]) > 0;
        } catch (const std::domain_error&) {
            holds = false;
        }
        if (!holds) {
            first_ok.reset();
            // a violation in the top sampled level: no trustworthy tail
            if (grid[i].level() >= top_level) return std::nullopt;
        } else if (!first_ok) {
            first_ok = i;
        }
    }
    if (!first_ok) return std::nullopt;
    return grid[*first_ok];
}

std::pair<double, double> estimate_order(const GrowthModel& f,
                                         const std::vector<double>& r_grid) {
    if (r_grid.size() < 10)
        throw std::invalid_argument("estimate_order: need at least 10 radii");
    const auto [lo, hi] = std::minmax_element(r_grid.begin(), r_grid.end());
    if (!(*lo > 1.0) || *hi / *lo < 0.999e6)
        throw std::invalid_argument("estimate_order: radii must exceed 1 and span >= 6 decades");
    double rho = -std::numeric_limits<double>::infinity();
    double lam = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        const auto lm = to_double(f.log_max_modulus(tower(r)));
        if (!lm || !(*lm > 0.0))
            throw std::domain_error("estimate_order: log M(r) not usable at r = " +
                                    std::to_string(r));
        const double ratio = std::log(*lm) / std::log(r);
        rho = std::max(rho, ratio);
        lam = std::min(lam, ratio);
    }
    return {rho, lam};
}

} // namespace escape
