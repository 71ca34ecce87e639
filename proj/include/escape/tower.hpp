#pragma once

// Level-index ("tower") magnitudes: a value stored as exp^level(mantissa).
//
// Canonical form: level 0 holds any real < e (including negatives and values
// in (0,1)); level >= 1 holds a mantissa in [1, e). The level-k band is then
// [exp^k(1), exp^{k+1}(1)), so canonical bands are disjoint and ordered and a
// comparison rarely needs more than one mantissa lift.
//
// log_t / exp_t on canonical towers of level >= 1 are exact level moves (no
// floating-point operation touches the mantissa), which is what keeps long
// iterated-exponential chains drift-free. Scalar multiples are folded in one
// level down: a * exp^L(x) has log = ln(a) + exp^{L-1}(x); once that log is
// too large for a double, the factor is below representable precision and is
// absorbed.
//
// There is deliberately no addition or subtraction of towers.

#include <optional>
#include <string>
#include <string_view>

namespace escape {

// Relative tolerance on mantissas for equality / comparison ties.
inline constexpr double kTowerTol = 1e-9;

class TowerReal {
public:
    TowerReal() = default;

    int level() const { return level_; }
    double mantissa() const { return mantissa_; }

private:
    TowerReal(int level, double mantissa) : level_(level), mantissa_(mantissa) {}

    int level_ = 0;
    double mantissa_ = 0.0;

    friend TowerReal normalize(long level, double mantissa);
};

// Canonicalizes (level, mantissa). Any finite mantissa is valid at any level;
// non-finite input throws std::invalid_argument.
TowerReal normalize(long level, double mantissa);

inline TowerReal tower(double v) { return normalize(0, v); }

// Natural log. Exact level decrement for level >= 1; throws std::domain_error
// for non-positive level-0 values.
TowerReal log_t(const TowerReal& v);

// exp. Exact level increment for level >= 1.
TowerReal exp_t(const TowerReal& v);

// a * v for a > 0. Folds ln(a) into the log one level down; absorbed when the
// log exceeds double range (relative effect below kTowerTol by a wide margin).
TowerReal scale_t(const TowerReal& v, double a);

// v^k for k > 0, as exp_t(scale_t(log_t(v), k)). Requires v > 0.
TowerReal pow_t(const TowerReal& v, double k);

// Three-way comparison with kTowerTol ties: -1, 0, +1. Total order on
// canonical towers; levels differing by >= 2 are decided on level alone.
int compare(const TowerReal& a, const TowerReal& b);

inline bool operator<(const TowerReal& a, const TowerReal& b) { return compare(a, b) < 0; }
inline bool operator>(const TowerReal& a, const TowerReal& b) { return compare(a, b) > 0; }
inline bool operator<=(const TowerReal& a, const TowerReal& b) { return compare(a, b) <= 0; }
inline bool operator>=(const TowerReal& a, const TowerReal& b) { return compare(a, b) >= 0; }
inline bool operator==(const TowerReal& a, const TowerReal& b) { return compare(a, b) == 0; }
inline bool operator!=(const TowerReal& a, const TowerReal& b) { return compare(a, b) != 0; }

// The represented value as a double, if it fits.
std::optional<double> to_double(const TowerReal& v);

// m-fold log / exp.
TowerReal log_iter(const TowerReal& v, int times);
TowerReal exp_iter(const TowerReal& v, int times);

// Textual form "T(level;mantissa)"; print/parse round-trips exactly.
std::string to_string(const TowerReal& v);

// Accepts "T(l;m)" or a plain decimal. Throws std::invalid_argument on junk.
TowerReal parse_tower(std::string_view text);

} // namespace escape
