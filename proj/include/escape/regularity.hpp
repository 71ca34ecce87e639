#pragma once

// Numerical verification of the regularity and growth conditions, with
// witnesses. Every checker scans a tower-spaced grid and reports a finite
// surrogate for "for r large enough": SATISFIED_ON_RANGE means the inequality
// holds from the witness threshold on, with the top two sampled levels clean;
// a violation inside the top two levels is VIOLATED (with a re-checkable
// counterexample); INCONCLUSIVE covers grids whose top is not evaluable.

#include "escape/growth.hpp"

#include <optional>
#include <string>
#include <vector>

namespace escape {

enum class Verdict { SATISFIED_ON_RANGE, VIOLATED, INCONCLUSIVE };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& s);

struct Witness {
    std::optional<double> k;                 // selected from the k menu
    std::optional<TowerReal> threshold;      // R or t0
    std::optional<TowerReal> counterexample; // re-checkable violating point
};

struct ConditionReport {
    std::string condition_id;
    std::string fn;
    GrowthParams params;
    Verdict verdict = Verdict::INCONCLUSIVE;
    Witness witness;
    TowerReal range_lo, range_hi;
    int samples = 0;
    std::string notes;
};

// Growth-dominance check: under the hypothesis M(r) >= exp^{n+1}((log^n r)^q),
// search for the least R with mu_{m,eps}(r) > c r from R on.
ConditionReport check_theorem22(const GrowthModel& f, int m, double eps, double c,
                                double q, int n);

// Nested-log comparison. The two nesting depths are taken from the coefficient
// lists: a_1 log(a_2 log(...(a_j r))) with |a|-1 logs against
// log(b_1 log(...((b_j r)^p))) with |b| logs; the canonical instance has
// |a| = |b| = n.
ConditionReport check_lemma23(double p, const std::vector<double>& a,
                              const std::vector<double>& b);

// m-log-regularity: mu_{m,eps}(exp^{m-1}(r^k)) >= exp^{m-1}(M(r)^k) for some
// k in the menu. The witness is the first menu k that satisfies, with its R.
ConditionReport check_m_log_regular(const GrowthModel& f, int m, double eps,
                                    const std::vector<double>& k_grid = k_menu());

// m-weak-regularity at a finite horizon: least sampled r > R with
// mu_{m,eps}^n(r) >= M^n(R) for all n <= horizon.
ConditionReport check_m_weak_regular(const GrowthModel& f, int m, double eps,
                                     const TowerReal& R, int horizon);

// Strong log-regularity: log M(r^k) >= (k log M(r))^{1/eps}.
ConditionReport check_strong_log_regular(const GrowthModel& f, double eps,
                                         const std::vector<double>& k_grid = k_menu());

// Growth sandwich:
// exp^{n+m-1}((log^{n+m-2} t)^q) <= phi_m(t) <= exp^{n+m-1}((log^{n+m-2} t)^qt).
ConditionReport check_growth_condition(const GrowthModel& f, int m, int n, double q,
                                       double q_tilde);

// Sandwich plus the conclusion phi_m(psi_m(t)) >= (psi_m(phi_m(t)))^d, with
// psi_m(t) = exp^{n+m-1}((log^{n+m-1} t)^p), pq > 1.
ConditionReport check_psi_phi(const GrowthModel& f, int m, int n, double q,
                              double q_tilde, double p, double d);

// Iterated-log power inequality, strict: log^n(r^q) > d (log^n r)^q.
ConditionReport check_lemma34(int n, double d, double q);

// Transfer condition phi(e^{kt}) >= exp((k/eps) phi(t)), evaluated
// on a grid that covers the base branch and the chord segments.
ConditionReport check_lemma52_transfer(const GrowthModel& f, double eps, double k);

// One m-weak inequality probe at a given start (used by the implication-chain
// tests): true iff mu_{m,eps}^n(r) >= M^n(R) for all n <= horizon; on failure
// *first_fail is the first bad n.
bool weak_inequality_holds(const GrowthModel& f, int m, double eps, const TowerReal& r,
                           const TowerReal& R, int horizon, int* first_fail = nullptr);

} // namespace escape
