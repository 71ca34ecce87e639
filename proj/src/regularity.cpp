#include "escape/regularity.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace escape {

namespace {

// +1 holds, -1 fails, 0 not evaluable at this point.
using Pred = std::function<int(const TowerReal&)>;

int run_pred(const Pred& pred, const TowerReal& x) {
    try {
        return pred(x);
    } catch (const std::domain_error&) {
        return 0;
    }
}

struct TailScan {
    Verdict verdict = Verdict::INCONCLUSIVE;
    std::optional<TowerReal> threshold;
    std::optional<TowerReal> counterexample;
    int samples = 0;
    int fail_count = 0;
};

// A tail certificate needs at least half a level of clean evidence.
constexpr int kMinCleanTail = 32;

// Tail semantics: find the least grid point from which the predicate holds at
// every later sampled point. SATISFIED_ON_RANGE needs the clean tail to reach
// the top of the grid and contain >= kMinCleanTail holding points; failures
// closer to the top than that are a VIOLATED, with the smallest failing point
// in the top two levels as the counterexample. Grids whose upper reaches are
// not evaluable come back INCONCLUSIVE.
TailScan scan_tail(const std::vector<TowerReal>& grid, const Pred& pred) {
    TailScan out;
    out.samples = static_cast<int>(grid.size());
    if (grid.empty()) return out;
    const int top_two = grid.back().level() - 1;

    std::optional<size_t> first_ok_after_fail;
    std::optional<TowerReal> cex_top_two;
    std::optional<TowerReal> last_fail;
    int tail_holds = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const int r = run_pred(pred, grid[i]);
        if (r > 0) {
            if (!first_ok_after_fail) first_ok_after_fail = i;
            ++tail_holds;
        } else if (r < 0) {
            ++out.fail_count;
            first_ok_after_fail.reset();
            tail_holds = 0;
            last_fail = grid[i];
            if (!cex_top_two && grid[i].level() >= top_two) cex_top_two = grid[i];
        }
    }
    if (first_ok_after_fail && tail_holds >= kMinCleanTail) {
        out.verdict = Verdict::SATISFIED_ON_RANGE;
        out.threshold = grid[*first_ok_after_fail];
        return out;
    }
    if (out.fail_count > 0) {
        out.verdict = Verdict::VIOLATED;
        out.counterexample = cex_top_two ? cex_top_two : last_fail;
        return out;
    }
    out.verdict = Verdict::INCONCLUSIVE;
    return out;
}

ConditionReport make_report(std::string id, const GrowthModel* f, GrowthParams params,
                            const std::vector<TowerReal>& grid, const TailScan& scan) {
    ConditionReport rep;
    rep.condition_id = std::move(id);
    rep.fn = f ? f->name : "-";
    rep.params = params;
    rep.verdict = scan.verdict;
    rep.witness.threshold = scan.threshold;
    rep.witness.counterexample = scan.counterexample;
    if (!grid.empty()) {
        rep.range_lo = grid.front();
        rep.range_hi = grid.back();
    }
    rep.samples = scan.samples;
    if (scan.verdict == Verdict::SATISFIED_ON_RANGE && scan.fail_count > 0)
        rep.notes = "interior violations below threshold: " +
                    std::to_string(scan.fail_count);
    return rep;
}

void append_note(ConditionReport& rep, const std::string& note) {
    if (note.empty()) return;
    rep.notes += (rep.notes.empty() ? "" : "; ") + note;
}

bool geq(const TowerReal& a, const TowerReal& b) { return compare(a, b) >= 0; }
bool gt(const TowerReal& a, const TowerReal& b) { return compare(a, b) > 0; }

std::string fmt_k(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k);
    return buf;
}

// Shared search over the k menu: first k whose tail scan satisfies wins.
ConditionReport k_search(std::string id, const GrowthModel& f, GrowthParams params,
                         const std::vector<double>& k_grid,
                         const std::function<Pred(double)>& pred_for_k) {
    const std::vector<TowerReal> grid = r_grid_for(f);
    std::ostringstream per_k;
    std::optional<TailScan> first_violated;
    std::optional<double> first_violated_k;
    for (double k : k_grid) {
        const TailScan scan = scan_tail(grid, pred_for_k(k));
        per_k << (per_k.tellp() > 0 ? "; " : "") << "k=" << fmt_k(k) << ":"
              << to_string(scan.verdict);
        if (scan.verdict == Verdict::SATISFIED_ON_RANGE) {
            params.k = k;
            ConditionReport rep = make_report(std::move(id), &f, params, grid, scan);
            rep.witness.k = k;
            append_note(rep, per_k.str());
            return rep;
        }
        if (scan.verdict == Verdict::VIOLATED && !first_violated) {
            first_violated = scan;
            first_violated_k = k;
        }
    }
    TailScan scan;
    if (first_violated) {
        scan = *first_violated;
    } else {
        scan.samples = static_cast<int>(grid.size());
    }
    ConditionReport rep = make_report(std::move(id), &f, params, grid, scan);
    if (first_violated_k) rep.witness.k = *first_violated_k;
    append_note(rep, per_k.str());
    return rep;
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::SATISFIED_ON_RANGE: return "SATISFIED_ON_RANGE";
        case Verdict::VIOLATED: return "VIOLATED";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

Verdict parse_verdict(const std::string& s) {
    if (s == "SATISFIED_ON_RANGE") return Verdict::SATISFIED_ON_RANGE;
    if (s == "VIOLATED") return Verdict::VIOLATED;
    if (s == "INCONCLUSIVE") return Verdict::INCONCLUSIVE;
    throw std::invalid_argument("unknown verdict: " + s);
}

ConditionReport check_theorem22(const GrowthModel& f, int m, double eps, double c,
                                double q, int n) {
    if (m < 2 || !(c > 1.0) || !(q > 0.0) || n < 0)
        throw std::invalid_argument("check_theorem22: need m >= 2, c > 1, q > 0, n >= 0");
    GrowthParams params;
    params.m = m;
    params.eps = eps;
    params.c = c;
    params.q = q;
    params.n = n;
    const std::vector<TowerReal> grid = r_grid_for(f);

    const Pred hypothesis = [&](const TowerReal& r) {
        const TowerReal lhs = exp_t(f.log_max_modulus(r)); // M(r)
        const TowerReal rhs = exp_iter(pow_t(log_iter(r, n), q), n + 1);
        return geq(lhs, rhs) ? +1 : -1;
    };
    const TailScan hyp = scan_tail(grid, hypothesis);
    if (hyp.verdict != Verdict::SATISFIED_ON_RANGE) {
        ConditionReport rep = make_report("theorem22", &f, params, grid, hyp);
        append_note(rep, "hypothesis (growth lower bound) " + to_string(hyp.verdict));
        return rep;
    }

    const Pred conclusion = [&](const TowerReal& r) {
        return gt(mu(f, m, eps, r), scale_t(r, c)) ? +1 : -1;
    };
    const TailScan scan = scan_tail(grid, conclusion);
    ConditionReport rep = make_report("theorem22", &f, params, grid, scan);
    append_note(rep, "hypothesis holds from " +
                         (hyp.threshold ? to_string(*hyp.threshold) : std::string("?")));
    return rep;
}

ConditionReport check_lemma23(double p, const std::vector<double>& a,
                              const std::vector<double>& b) {
    if (!(p >= 1.0) || a.empty() || b.empty())
        throw std::invalid_argument("check_lemma23: need p >= 1 and nonempty coefficients");
    for (double x : a)
        if (!(x > 0.0)) throw std::invalid_argument("check_lemma23: a_i must be positive");
    for (double x : b)
        if (!(x > 0.0)) throw std::invalid_argument("check_lemma23: b_i must be positive");

    const std::vector<TowerReal> grid = tower_grid(0, 3);
    const Pred pred = [&](const TowerReal& r) {
        TowerReal lhs = scale_t(r, a.back());
        for (size_t i = a.size() - 1; i-- > 0;) lhs = scale_t(log_t(lhs), a[i]);
        TowerReal rhs = pow_t(scale_t(r, b.back()), p);
        for (size_t i = b.size() - 1; i-- > 0;) rhs = scale_t(log_t(rhs), b[i]);
        rhs = log_t(rhs);
        return geq(lhs, rhs) ? +1 : -1;
    };
    const TailScan scan = scan_tail(grid, pred);
    GrowthParams params;
    params.p = p;
    params.n = static_cast<int>(a.size());
    ConditionReport rep = make_report("lemma23", nullptr, params, grid, scan);
    std::ostringstream os;
    os << "|a|=" << a.size() << " |b|=" << b.size();
    append_note(rep, os.str());
    return rep;
}

ConditionReport check_m_log_regular(const GrowthModel& f, int m, double eps,
                                    const std::vector<double>& k_grid) {
    if (m < 1 || !(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("check_m_log_regular: need m >= 1, eps in (0,1)");
    GrowthParams params;
    params.m = m;
    params.eps = eps;
    return k_search("m_log", f, params, k_grid, [&f, m, eps](double k) -> Pred {
        return [&f, m, eps, k](const TowerReal& r) {
            const TowerReal lhs = mu(f, m, eps, exp_iter(pow_t(r, k), m - 1));
            const TowerReal rhs = exp_iter(exp_t(scale_t(f.log_max_modulus(r), k)), m - 1);
            return geq(lhs, rhs) ? +1 : -1;
        };
    });
}

ConditionReport check_strong_log_regular(const GrowthModel& f, double eps,
                                         const std::vector<double>& k_grid) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("check_strong_log_regular: eps must lie in (0,1)");
    GrowthParams params;
    params.eps = eps;
    return k_search("strong_log", f, params, k_grid, [&f, eps](double k) -> Pred {
        return [&f, eps, k](const TowerReal& r) {
            const TowerReal lhs = f.log_max_modulus(pow_t(r, k));
            const TowerReal rhs = pow_t(scale_t(f.log_max_modulus(r), k), 1.0 / eps);
            return geq(lhs, rhs) ? +1 : -1;
        };
    });
}

bool weak_inequality_holds(const GrowthModel& f, int m, double eps, const TowerReal& r,
                           const TowerReal& R, int horizon, int* first_fail) {
    TowerReal mu_t = log_iter(r, m - 1); // mu iterates, conjugated coordinates
    TowerReal M_t = log_t(R);
    for (int n = 1; n <= horizon; ++n) {
        try {
            mu_t = phi_m_eps(f, m, eps, mu_t);
            M_t = f.log_max_modulus(exp_t(M_t));
        } catch (const std::domain_error&) {
            if (first_fail) *first_fail = n;
            return false;
        }
        if (compare(exp_iter(mu_t, m - 1), exp_t(M_t)) < 0) {
            if (first_fail) *first_fail = n;
            return false;
        }
    }
    return true;
}

ConditionReport check_m_weak_regular(const GrowthModel& f, int m, double eps,
                                     const TowerReal& R, int horizon) {
    if (m < 1 || horizon < 1)
        throw std::invalid_argument("check_m_weak_regular: need m >= 1, horizon >= 1");
    GrowthParams params;
    params.m = m;
    params.eps = eps;
    params.R = R;

    std::vector<TowerReal> grid = r_grid_for(f);
    std::erase_if(grid, [&](const TowerReal& p) { return compare(p, R) <= 0; });

    ConditionReport rep;
    rep.condition_id = "m_weak";
    rep.fn = f.name;
    rep.params = params;
    rep.samples = static_cast<int>(grid.size());
    if (!grid.empty()) {
        rep.range_lo = grid.front();
        rep.range_hi = grid.back();
    }

    int best_n = -1;
    std::optional<TowerReal> best_r;
    for (const TowerReal& r : grid) {
        int fail_n = horizon + 1;
        if (weak_inequality_holds(f, m, eps, r, R, horizon, &fail_n)) {
            rep.verdict = Verdict::SATISFIED_ON_RANGE;
            rep.witness.threshold = r;
            rep.notes = "finite horizon N=" + std::to_string(horizon);
            return rep;
        }
        if (fail_n - 1 > best_n) {
            best_n = fail_n - 1;
            best_r = r;
        }
    }
    rep.verdict = Verdict::VIOLATED;
    rep.witness.counterexample = best_r;
    rep.notes = "at-horizon N=" + std::to_string(horizon) +
                "; best run reached n=" + std::to_string(best_n) +
                (best_r ? " at r=" + to_string(*best_r) : "");
    return rep;
}

ConditionReport check_growth_condition(const GrowthModel& f, int m, int n, double q,
                                       double q_tilde) {
    if (m < 2 || n < 0 || !(q > 0.0) || !(q < 1.0) || !(q_tilde > 0.0))
        throw std::invalid_argument(
            "check_growth_condition: need m >= 2, n >= 0, q in (0,1), qt > 0");
    GrowthParams params;
    params.m = m;
    params.n = n;
    params.q = q;
    params.q_tilde = q_tilde;
    const std::vector<TowerReal> grid = t_grid_for(f);
    const Pred pred = [&](const TowerReal& t) {
        const TowerReal phi = phi_m(f, m, t);
        const TowerReal base = log_iter(t, n + m - 2);
        const TowerReal lo = exp_iter(pow_t(base, q), n + m - 1);
        const TowerReal hi = exp_iter(pow_t(base, q_tilde), n + m - 1);
        return (geq(phi, lo) && geq(hi, phi)) ? +1 : -1;
    };
    const TailScan scan = scan_tail(grid, pred);
    return make_report("growth", &f, params, grid, scan);
}

ConditionReport check_psi_phi(const GrowthModel& f, int m, int n, double q,
                              double q_tilde, double p, double d) {
    if (!(p * q > 1.0) || !(d > 1.0))
        throw std::invalid_argument("check_psi_phi: need pq > 1 and d > 1");
    GrowthParams params;
    params.m = m;
    params.n = n;
    params.q = q;
    params.q_tilde = q_tilde;
    params.p = p;
    params.d = d;

    ConditionReport sandwich = check_growth_condition(f, m, n, q, q_tilde);
    if (sandwich.verdict != Verdict::SATISFIED_ON_RANGE) {
        sandwich.condition_id = "psi_phi";
        sandwich.params = params;
        append_note(sandwich, "growth sandwich " + to_string(sandwich.verdict));
        return sandwich;
    }

    const std::vector<TowerReal> grid = t_grid_for(f);
    const Pred pred = [&](const TowerReal& t) {
        const TowerReal lhs = phi_m(f, m, psi_m(n, m, p, t));
        const TowerReal rhs = pow_t(psi_m(n, m, p, phi_m(f, m, t)), d);
        return geq(lhs, rhs) ? +1 : -1;
    };
    const TailScan scan = scan_tail(grid, pred);
    ConditionReport rep = make_report("psi_phi", &f, params, grid, scan);
    append_note(rep, "sandwich holds from " +
                         (sandwich.witness.threshold
                              ? to_string(*sandwich.witness.threshold)
                              : std::string("?")));
    return rep;
}

ConditionReport check_lemma34(int n, double d, double q) {
    if (n < 1 || !(d > 0.0) || !(q > 0.0) || !(q < 1.0))
        throw std::invalid_argument("check_lemma34: need n >= 1, d > 0, q in (0,1)");
    GrowthParams params;
    params.n = n;
    params.d = d;
    params.q = q;
    const std::vector<TowerReal> grid = tower_grid(0, 3);
    const Pred pred = [&](const TowerReal& r) {
        const TowerReal lhs = log_iter(pow_t(r, q), n);
        const TowerReal rhs = scale_t(pow_t(log_iter(r, n), q), d);
        return gt(lhs, rhs) ? +1 : -1; // strict
    };
    const TailScan scan = scan_tail(grid, pred);
    return make_report("lemma34", nullptr, params, grid, scan);
}

ConditionReport check_lemma52_transfer(const GrowthModel& f, double eps, double k) {
    if (!(eps > 0.0) || !(eps < 1.0) || !(k > 1.0))
        throw std::invalid_argument("check_lemma52_transfer: need eps in (0,1), k > 1");
    GrowthParams params;
    params.eps = eps;
    params.k = k;

    const auto phi = [&](const TowerReal& t) {
        return f.kind == GrowthKind::PiecewisePhi ? f.phi_spec.value(t)
                                                  : phi_m(f, 2, t);
    };
    const std::vector<TowerReal> grid = t_grid_for(f);
    const Pred pred = [&](const TowerReal& t) {
        const TowerReal lhs = phi(exp_t(scale_t(t, k)));
        const TowerReal rhs = exp_t(scale_t(phi(t), k / eps));
        return geq(lhs, rhs) ? +1 : -1;
    };
    const TailScan scan = scan_tail(grid, pred);
    ConditionReport rep = make_report("lemma52", &f, params, grid, scan);
    rep.witness.k = k;

    if (f.kind == GrowthKind::PiecewisePhi && scan.threshold) {
        // per-branch coverage above the threshold
        int base_pts = 0;
        std::map<int, int> seg_pts;
        for (const TowerReal& t : grid) {
            if (compare(t, *scan.threshold) < 0) continue;
            const int seg = f.phi_spec.segment_of(t);
            if (seg < 0)
                ++base_pts;
            else
                ++seg_pts[seg];
        }
        std::ostringstream os;
        os << "branch coverage above t1: mu=" << base_pts;
        for (const auto& [seg, cnt] : seg_pts) os << " seg" << (seg + 1) << "=" << cnt;
        append_note(rep, os.str());
    }
    return rep;
}

} // namespace escape
