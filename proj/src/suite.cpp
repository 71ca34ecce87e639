#include "escape/suite.hpp"

#include "escape/report.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace escape {

namespace {

double param_or(const GrowthModel& f, const std::string& key, double fallback) {
    const auto it = f.check_params.find(key);
    return it == f.check_params.end() ? fallback : it->second;
}

// Uniform double in [-10, 10] built from raw bits so the stream depends only
// on the mt19937_64 sequence.
double uniform_pm10(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 20.0 * u - 10.0;
}

struct Gate {
    const GrowthModel& f;
    SuiteResult& out;

    // Records the row; when the catalog annotates this condition, a verdict
    // mismatch fails the gate.
    void record(const ConditionReport& rep, const std::string& expect_key) {
        out.reports_csv += format_report_row(rep) + "\n";
        ++out.checks;
        auto it = f.expect.find(expect_key + "_m" + std::to_string(rep.params.m));
        if (it == f.expect.end()) it = f.expect.find(expect_key);
        if (it == f.expect.end()) return;
        if (to_string(rep.verdict) != it->second)
            out.mismatch_lines.push_back(f.name + "/" + rep.condition_id + ": got " +
                                         to_string(rep.verdict) + ", expected " +
                                         it->second);
    }
};

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto err = [&](const std::string& what) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": " +
                                        what);
        };
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']') err("unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) err("expected key = value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));

        if (!section.empty()) {
            if (key == "R")
                cfg.fn_R[section] = std::stod(val);
            else
                err("unknown per-function key '" + key + "'");
            continue;
        }
        if (key == "catalog") {
            cfg.catalog_path = val;
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "horizon") {
            cfg.horizon = std::stoi(val);
        } else if (key == "ell_max") {
            cfg.ell_max = std::stoi(val);
        } else if (key == "ceiling") {
            cfg.ceiling = std::stod(val);
        } else if (key == "seed") {
            cfg.seed = std::stoul(val);
        } else if (key == "threads") {
            cfg.threads = std::stoi(val);
        } else if (key == "random_seeds") {
            cfg.random_seeds = std::stoi(val);
        } else if (key == "eps_menu") {
            cfg.eps_list.clear();
            std::istringstream vs(val);
            double x;
            while (vs >> x) cfg.eps_list.push_back(x);
        } else if (key == "k_menu") {
            cfg.k_list.clear();
            std::istringstream vs(val);
            double x;
            while (vs >> x) cfg.k_list.push_back(x);
        } else if (key == "m_menu") {
            cfg.m_list.clear();
            std::istringstream vs(val);
            int x;
            while (vs >> x) cfg.m_list.push_back(x);
        } else {
            err("unknown key '" + key + "'");
        }
    }
    if (cfg.eps_list.empty() || cfg.k_list.empty() || cfg.m_list.empty())
        throw std::invalid_argument("config: menus must be nonempty");
    if (cfg.horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config not found: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

TowerReal classify_base_R(const RunConfig& cfg, const GrowthModel& f) {
    if (auto it = cfg.fn_R.find(f.name); it != cfg.fn_R.end()) return tower(it->second);
    return tower(std::max(f.r_min, 2.0));
}

SuiteResult run_suite(const Catalog& cat, const RunConfig& cfg) {
    SuiteResult out;
    out.reports_csv = report_csv_header() + "\n";
    out.classifications_csv = classification_csv_header() + "\n";

    for (const GrowthModel& f : cat) {
        Gate gate{f, out};
        for (double eps : cfg.eps_list) {
            gate.record(check_strong_log_regular(f, eps, cfg.k_list), "strong_log");
            for (int m : cfg.m_list)
                gate.record(check_m_log_regular(f, m, eps, cfg.k_list), "m_log");
            if (f.kind != GrowthKind::PiecewisePhi)
                gate.record(check_theorem22(f, 2, eps, param_or(f, "t22_c", 2.0),
                                            param_or(f, "t22_q", 0.5),
                                            static_cast<int>(param_or(f, "t22_n", 0.0))),
                            "theorem22");
            if (f.kind == GrowthKind::PiecewisePhi)
                gate.record(check_lemma52_transfer(f, eps, 2.0), "lemma52");
        }
        gate.record(check_growth_condition(f, 2, 0, param_or(f, "growth_q", 0.9),
                                           param_or(f, "growth_qt", 1.1)),
                    "growth");
        gate.record(check_psi_phi(f, 2, 0, param_or(f, "growth_q", 0.9),
                                  param_or(f, "growth_qt", 1.1),
                                  param_or(f, "psi_p", 2.0), param_or(f, "psi_d", 2.0)),
                    "psi_phi");
        // finite-horizon weak regularity where the mu > r tail exists
        if (f.mu_exceeds_r_from(1, 0.5))
            gate.record(check_m_weak_regular(f, 1, 0.5, classify_base_R(cfg, f),
                                             std::min(cfg.horizon, 20)),
                        "m_weak");
    }
    // model-independent lemmas, informational rows
    out.reports_csv += format_report_row(check_lemma34(1, 2.0, 0.5)) + "\n";
    out.reports_csv += format_report_row(check_lemma23(2.0, {1.0}, {1.0})) + "\n";
    out.checks += 2;

    // deterministic classification battery
    const std::vector<std::complex<double>> fixed = {
        {0.0, 0.0}, {1.0, 0.0}, {10.0, 0.0}, {0.0, 2.0}, {-3.0, 0.0}, {0.5, 0.5}};
    for (const GrowthModel& f : cat) {
        if (!f.has_eval()) continue;
        const TowerReal R = classify_base_R(cfg, f);
        std::vector<std::complex<double>> seeds = fixed;
        std::mt19937_64 rng(cfg.seed);
        for (int i = 0; i < cfg.random_seeds; ++i) {
            const double re = uniform_pm10(rng);
            const double im = uniform_pm10(rng);
            seeds.emplace_back(re, im);
        }
        for (const auto z : seeds) {
            const OrbitRecord rec = iterate_orbit(f, z, cfg.horizon, cfg.ceiling);
            const EscapeClass cls =
                classify_escape(f, rec, R, cfg.m_list, cfg.eps_list, cfg.ell_max);
            out.classifications_csv +=
                format_classification_row(make_classification_row(f.name, z, cls)) +
                "\n";
        }
    }

    out.mismatches = static_cast<int>(out.mismatch_lines.size());
    return out;
}

} // namespace escape
