#include "escape/catalog.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace escape {

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr - buf);
}

GrowthModel healthy_defaults(GrowthModel m) {
    m.check_params = {{"growth_q", 0.9}, {"growth_qt", 1.1}, {"psi_p", 2.0},
                      {"psi_d", 2.0},   {"t22_c", 2.0},     {"t22_q", 0.5},
                      {"t22_n", 0.0}};
    m.expect = {{"strong_log", "SATISFIED_ON_RANGE"},
                {"m_log", "SATISFIED_ON_RANGE"},
                {"theorem22", "SATISFIED_ON_RANGE"},
                {"growth", "SATISFIED_ON_RANGE"},
                {"psi_phi", "SATISFIED_ON_RANGE"}};
    return m;
}

} // namespace

Catalog builtin_catalog() {
    Catalog cat;

    {
        GrowthModel m;
        m.name = "exp";
        m.kind = GrowthKind::ClosedFormLogM;
        m.form = "exp";
        m.r_min = 1.0;
        m.positive_ray = true;
        cat.push_back(healthy_defaults(std::move(m)));
    }
    {
        GrowthModel m;
        m.name = "quarter_exp"; // 0.25 e^z
        m.kind = GrowthKind::ClosedFormLogM;
        m.form = "lambda_exp";
        m.lambda = 0.25;
        m.r_min = 3.0;
        m.positive_ray = true;
        cat.push_back(healthy_defaults(std::move(m)));
    }
    {
        GrowthModel m;
        m.name = "cosh";
        m.kind = GrowthKind::ClosedFormLogM;
        m.form = "cosh";
        m.r_min = 2.0;
        m.positive_ray = true;
        cat.push_back(healthy_defaults(std::move(m)));
    }
    {
        GrowthModel m;
        m.name = "cosh_series"; // truncated series, sampling cross-check only
        m.kind = GrowthKind::PowerSeries;
        m.r_min = 2.0;
        m.series_r_max = 12.0;
        m.positive_ray = true;
        m.coefficients.assign(45, 0.0);
        m.coefficients[0] = 1.0;
        for (int k = 2; k <= 44; k += 2)
            m.coefficients[k] =
                m.coefficients[k - 2] / (static_cast<double>(k - 1) * k);
        cat.push_back(std::move(m));
    }
    {
        GrowthModel m;
        m.name = "exp_z2"; // exp(z^2), order 2
        m.kind = GrowthKind::ClosedFormLogM;
        m.form = "exp_sq";
        m.r_min = 1.0;
        m.positive_ray = true;
        m = healthy_defaults(std::move(m));
        m.check_params["growth_qt"] = 1.5; // 2t <= t^qt needs headroom
        cat.push_back(std::move(m));
    }
    {
        GrowthModel m;
        m.name = "poly6"; // z^6 + 3z^2 + 2; order 0, the negative control
        m.kind = GrowthKind::ClosedFormLogM;
        m.form = "poly";
        m.coefficients = {2.0, 0.0, 3.0, 0.0, 0.0, 0.0, 1.0};
        m.r_min = 2.0;
        m.positive_ray = true;
        m.check_params = {{"growth_q", 0.9}, {"growth_qt", 1.5}, {"psi_p", 2.0},
                          {"psi_d", 2.0},   {"t22_c", 2.0},     {"t22_q", 0.5},
                          {"t22_n", 0.0}};
        m.expect = {{"strong_log", "VIOLATED"},
                    {"m_log", "VIOLATED"},
                    {"theorem22", "VIOLATED"},
                    {"growth", "VIOLATED"},
                    {"psi_phi", "VIOLATED"}};
        cat.push_back(std::move(m));
    }
    {
        GrowthModel m;
        m.name = "ex53"; // chords of exp(sqrt t) over [t_{n+1}^{3/4}, t_{n+1}]
        m.kind = GrowthKind::PiecewisePhi;
        m.phi_spec.t1 = 10.0;
        m.phi_spec.breakpoint_count = 8;
        m.r_min = 2.0;
        m.expect = {{"strong_log", "VIOLATED"},
                    {"m_log_m2", "SATISFIED_ON_RANGE"},
                    {"lemma52", "SATISFIED_ON_RANGE"}};
        cat.push_back(std::move(m));
    }
    {
        GrowthModel m;
        m.name = "sqrt_mu"; // the base curve exp(sqrt t) alone
        m.kind = GrowthKind::PiecewisePhi;
        m.phi_spec.t1 = 10.0;
        m.phi_spec.breakpoint_count = 0;
        m.r_min = 2.0;
        m.expect = {{"lemma52", "SATISFIED_ON_RANGE"}};
        cat.push_back(std::move(m));
    }

    for (GrowthModel& m : cat) m.finalize();
    return cat;
}

const GrowthModel& find_model(const Catalog& cat, const std::string& name) {
    for (const GrowthModel& m : cat)
        if (m.name == name) return m;
    std::string names;
    for (const GrowthModel& m : cat) names += (names.empty() ? "" : ", ") + m.name;
    throw std::out_of_range("no model '" + name + "' in catalog (" + names + ")");
}

std::string dump_catalog(const Catalog& cat) {
    std::ostringstream out;
    out << "# growth-model catalog\n";
    for (const GrowthModel& m : cat) {
        out << "\n[" << m.name << "]\n";
        out << "kind = " << to_string(m.kind) << "\n";
        if (m.kind == GrowthKind::ClosedFormLogM) out << "form = " << m.form << "\n";
        if (m.form == "lambda_exp") out << "lambda = " << fmt(m.lambda) << "\n";
        if (!m.coefficients.empty()) {
            out << "coefficients =";
            for (double c : m.coefficients) out << " " << fmt(c);
            out << "\n";
        }
        if (m.kind == GrowthKind::PowerSeries)
            out << "series_r_max = " << fmt(m.series_r_max) << "\n";
        if (m.kind == GrowthKind::PiecewisePhi) {
            out << "t1 = " << fmt(m.phi_spec.t1) << "\n";
            out << "breakpoints = " << m.phi_spec.breakpoint_count << "\n";
        }
        out << "R_min = " << fmt(m.r_min) << "\n";
        out << "positive_ray = " << (m.positive_ray ? 1 : 0) << "\n";
        for (const auto& [k, v] : m.check_params)
            out << "param." << k << " = " << fmt(v) << "\n";
        for (const auto& [k, v] : m.expect) out << "expect." << k << " = " << v << "\n";
    }
    return out.str();
}

Catalog parse_catalog(const std::string& text) {
    Catalog cat;
    GrowthModel* cur = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto err = [&](const std::string& what) {
            throw std::invalid_argument("catalog line " + std::to_string(lineno) +
                                        ": " + what);
        };
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);

        if (line.front() == '[') {
            if (line.back() != ']') err("unterminated section header");
            cat.emplace_back();
            cur = &cat.back();
            cur->name = line.substr(1, line.size() - 2);
            if (cur->name.empty()) err("empty model name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) err("expected key = value");
        if (!cur) err("key before any [model] section");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));

        if (key == "kind") {
            cur->kind = parse_growth_kind(val);
        } else if (key == "form") {
            cur->form = val;
        } else if (key == "lambda") {
            cur->lambda = std::stod(val);
        } else if (key == "coefficients") {
            cur->coefficients.clear();
            std::istringstream cs(val);
            double c;
            while (cs >> c) cur->coefficients.push_back(c);
        } else if (key == "series_r_max") {
            cur->series_r_max = std::stod(val);
        } else if (key == "t1") {
            cur->phi_spec.t1 = std::stod(val);
        } else if (key == "breakpoints") {
            cur->phi_spec.breakpoint_count = std::stoi(val);
        } else if (key == "R_min") {
            cur->r_min = std::stod(val);
        } else if (key == "positive_ray") {
            cur->positive_ray = std::stoi(val) != 0;
        } else if (key.rfind("param.", 0) == 0) {
            cur->check_params[key.substr(6)] = std::stod(val);
        } else if (key.rfind("expect.", 0) == 0) {
            cur->expect[key.substr(7)] = val;
        } else {
            err("unknown key '" + key + "'");
        }
    }
    for (GrowthModel& m : cat) m.finalize();
    return cat;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("catalog not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

} // namespace escape
