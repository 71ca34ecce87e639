#pragma once

// Growth models: entire functions represented by their maximum-modulus
// growth, plus the derived comparison maps mu_{m,eps}, phi_m, psi_m and
// their iterates. All radial quantities are TowerReals so the maps stay
// evaluable far beyond double range.

#include "escape/tower.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace escape {

enum class GrowthKind { ClosedFormLogM, PowerSeries, PiecewisePhi };

std::string to_string(GrowthKind k);
GrowthKind parse_growth_kind(const std::string& s);

// Real-variable growth curve phi(t) = log M(e^t): base mu(t) = exp(t^{1/2})
// except on segments [t_{n+1}^{3/4}, t_{n+1}], where phi is the chord of mu
// over the segment. Breakpoints t_1 given, t_{n+1} = exp(t_n).
struct PiecewisePhiSpec {
    double t1 = 10.0;
    int breakpoint_count = 8;           // 0 = pure base curve
    std::vector<TowerReal> breakpoints; // t_1..t_count, built by finalize()

    TowerReal segment_lo(int n) const;  // t_{n+1}^{3/4}
    TowerReal segment_hi(int n) const;  // t_{n+1}
    int segment_count() const { return std::max(0, breakpoint_count - 1); }

    // Segment index containing t, or -1 (base branch).
    int segment_of(const TowerReal& t) const;

    TowerReal base_value(const TowerReal& t) const; // exp(t^{1/2})
    TowerReal value(const TowerReal& t) const;      // phi(t), t > 0
};

// Parameter bag shared by the derived maps and the condition checkers.
struct GrowthParams {
    int m = 2;
    double eps = 0.5;
    int n = 0;
    double q = 0.5;
    double q_tilde = 1.1;
    double p = 2.0;
    double k = 0.0; // 0 = searched over the k menu
    double c = 2.0;
    double d = 2.0;
    int ell = 0;
    TowerReal R;
};

class GrowthModel {
public:
    std::string name;
    GrowthKind kind = GrowthKind::ClosedFormLogM;

    // Closed forms: "exp", "lambda_exp", "cosh", "exp_sq", "poly".
    std::string form;
    double lambda = 1.0;
    std::vector<double> coefficients; // power series / poly, ascending degree
    double series_r_max = 64.0;       // sampling validity cap for PowerSeries
    PiecewisePhiSpec phi_spec;

    double r_min = 1.0;               // M(r) > r for r >= r_min
    bool positive_ray = false;        // f maps (0,inf) into itself and f|ray = M

    std::map<std::string, std::string> expect;  // suite regression annotations
    std::map<std::string, double> check_params; // per-model checker defaults

    // log M(r). Throws std::domain_error below/outside the model's domain.
    TowerReal log_max_modulus(const TowerReal& r) const;

    bool has_eval() const;
    std::complex<double> eval(std::complex<double> z) const;

    // Least sampled r with mu_{m,eps}(r) > r stably (cached for the standard
    // menu by finalize(); nullopt when no sampled tail qualifies).
    std::optional<TowerReal> mu_exceeds_r_from(int m, double eps) const;

    // Builds breakpoints and eager threshold caches. Models are immutable
    // after this; all evaluation is const and thread-safe.
    void finalize();

private:
    std::map<std::pair<int, int>, std::optional<TowerReal>> mu_thresholds_;
};

// Standard parameter menus.
const std::vector<double>& eps_menu();       // {0.25, 0.5, 0.75}
const std::vector<double>& k_menu();         // {1.25, 1.5, 2, 3, 5, 10}
const std::vector<int>& m_menu();            // {1, 2, 3}

// Sampling grids: per level, 64 points with mantissa e^{i/64}, levels lo..hi.
std::vector<TowerReal> tower_grid(int level_lo, int level_hi, int per_level = 64);

// Model-aware r-grid: standard grid from max(r_min, 1), plus segment-covering
// refinement for piecewise models. Sorted ascending.
std::vector<TowerReal> r_grid_for(const GrowthModel& f, int level_hi = 3);

// t-grid for the phi-side conditions (t = log r coordinates).
std::vector<TowerReal> t_grid_for(const GrowthModel& f, int level_hi = 3);

// --- derived comparison maps -------------------------------------------------

// log M(r).
TowerReal max_modulus_log(const GrowthModel& f, const TowerReal& r);

// mu_{m,eps}(r) = exp^m(eps * log^m M(r)). Domain errors name the log depth.
TowerReal mu(const GrowthModel& f, int m, double eps, const TowerReal& r);

// phi_m(t) = log^{m-1} M(exp^{m-1}(t));  phi_{m,eps} = phi_m^eps.
TowerReal phi_m(const GrowthModel& f, int m, const TowerReal& t);
TowerReal phi_m_eps(const GrowthModel& f, int m, double eps, const TowerReal& t);

// psi_m(t) = exp^{n+m-1}((log^{n+m-1} t)^p).
TowerReal psi_m(int n, int m, double p, const TowerReal& t);

// n-fold iterates. Both run in conjugated t-coordinates (one log^{m-1} at
// entry, exp^{m-1} at exit) so per-step renormalization does not accumulate:
// M^n(r) = exp^{m-1}(phi_m^n(log^{m-1} r)), and likewise for mu with
// phi_{m,eps}.
TowerReal iterate_mu(const GrowthModel& f, int m, double eps, const TowerReal& r, int n);
TowerReal iterate_M(const GrowthModel& f, const TowerReal& r, int n);

// Sampled order / lower-order estimates: max and min of
// log log M(r) / log r over the grid. Estimates only; limits are not
// computable from samples. Needs >= 10 radii spanning >= 6 decades.
std::pair<double, double> estimate_order(const GrowthModel& f,
                                         const std::vector<double>& r_grid);

// Least sampled r beyond which mu_{m,eps}(r) > r with no later sampled
// violation and a clean grid top (finite surrogate for "r large enough").
std::optional<TowerReal> find_mu_gt_r_threshold(const GrowthModel& f, int m, double eps);

} // namespace escape
