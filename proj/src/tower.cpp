#include "escape/tower.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace escape {

namespace {

constexpr double kE = std::numbers::e;
// exp(x) is finite in double up to ~709.78.
constexpr double kExpArgMax = 709.0;

bool mantissa_close(double x, double y) {
    if (x == y) return true;
    const double scale = std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) <= kTowerTol * scale;
}

} // namespace

TowerReal normalize(long level, double mantissa) {
    if (!std::isfinite(mantissa))
        throw std::invalid_argument("tower: non-finite mantissa");
    if (level < 0)
        throw std::invalid_argument("tower: negative level");
    double x = mantissa;
    long l = level;
    for (;;) {
        if (x >= kE) {
            x = std::log(x);
            ++l;
        } else if (l > 0 && x < 1.0) {
            x = std::exp(x);
            --l;
        } else {
            break;
        }
    }
    return TowerReal(static_cast<int>(l), x);
}

TowerReal log_t(const TowerReal& v) {
    if (v.level() >= 1)
        return normalize(v.level() - 1, v.mantissa());
    if (v.mantissa() <= 0.0)
        throw std::domain_error("log_t: log of non-positive value");
    return normalize(0, std::log(v.mantissa()));
}

TowerReal exp_t(const TowerReal& v) {
    if (v.level() >= 1)
        return normalize(v.level() + 1, v.mantissa());
    if (v.mantissa() >= 1.0)
        return normalize(1, v.mantissa());
    return normalize(0, std::exp(v.mantissa()));
}

TowerReal scale_t(const TowerReal& v, double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("scale_t: factor must be positive and finite");
    if (a == 1.0) return v;
    if (v.level() == 0)
        return normalize(0, v.mantissa() * a);
    const TowerReal lg = log_t(v);
    if (auto d = to_double(lg); d && std::abs(*d) < 1e305)
        return exp_t(normalize(0, *d + std::log(a)));
    return v; // ln(a) below representable precision of the log
}

TowerReal pow_t(const TowerReal& v, double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("pow_t: exponent must be positive and finite");
    if (k == 1.0) return v;
    return exp_t(scale_t(log_t(v), k));
}

int compare(const TowerReal& a, const TowerReal& b) {
    int la = a.level(), lb = b.level();
    double xa = a.mantissa(), xb = b.mantissa();
    if (la != lb) {
        // Lift the lower tower one level; a gap of >= 2 cannot be a tie.
        if (la + 1 == lb) {
            if (xa <= 0.0) return -1;
            la += 1;
            xa = std::log(xa);
        } else if (lb + 1 == la) {
            if (xb <= 0.0) return +1;
            lb += 1;
            xb = std::log(xb);
        } else {
            return la < lb ? -1 : +1;
        }
    }
    if (mantissa_close(xa, xb)) return 0;
    return xa < xb ? -1 : +1;
}

std::optional<double> to_double(const TowerReal& v) {
    double x = v.mantissa();
    for (int i = 0; i < v.level(); ++i) {
        if (x > kExpArgMax) return std::nullopt;
        x = std::exp(x);
    }
    return x;
}

TowerReal log_iter(const TowerReal& v, int times) {
    TowerReal r = v;
    for (int i = 0; i < times; ++i) {
        try {
            r = log_t(r);
        } catch (const std::domain_error&) {
            throw std::domain_error("log_iter: iterated log undefined at depth " +
                                    std::to_string(i + 1));
        }
    }
    return r;
}

TowerReal exp_iter(const TowerReal& v, int times) {
    TowerReal r = v;
    for (int i = 0; i < times; ++i) r = exp_t(r);
    return r;
}

std::string to_string(const TowerReal& v) {
    // shortest digits that recover the mantissa exactly
    char num[32];
    const auto res = std::to_chars(num, num + sizeof num, v.mantissa());
    return "T(" + std::to_string(v.level()) + ";" +
           std::string(num, res.ptr - num) + ")";
}

TowerReal parse_tower(std::string_view text) {
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos)
        throw std::invalid_argument("parse_tower: empty input");
    text = text.substr(b, e - b + 1);

    std::string s(text);
    if (s.size() > 2 && (s[0] == 'T' || s[0] == 't') && s[1] == '(' && s.back() == ')') {
        const size_t semi = s.find(';');
        if (semi == std::string::npos)
            throw std::invalid_argument("parse_tower: expected T(level;mantissa)");
        char* end = nullptr;
        const long level = std::strtol(s.c_str() + 2, &end, 10);
        if (end != s.c_str() + semi)
            throw std::invalid_argument("parse_tower: bad level in " + s);
        const double m = std::strtod(s.c_str() + semi + 1, &end);
        if (end != s.c_str() + s.size() - 1)
            throw std::invalid_argument("parse_tower: bad mantissa in " + s);
        return normalize(level, m);
    }
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw std::invalid_argument("parse_tower: cannot parse '" + s + "'");
    return normalize(0, d);
}

} // namespace escape
