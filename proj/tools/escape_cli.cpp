// escape: growth-condition checks and escape-speed classification for a
// catalog of entire functions.

#include "CLI11.hpp"

#include "escape/catalog.hpp"
#include "escape/render.hpp"
#include "escape/report.hpp"
#include "escape/suite.hpp"

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace escape;

std::complex<double> parse_complex(std::string s) {
    std::erase_if(s, [](char c) { return c == ' ' || c == '\t'; });
    if (s.empty()) throw CLI::ValidationError("--z", "empty complex literal");
    if (s.front() == '(' && s.back() == ')') {
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--z", "expected (re,im)");
        return {std::stod(s.substr(1, comma - 1)),
                std::stod(s.substr(comma + 1, s.size() - comma - 2))};
    }
    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        // split real and imaginary at the last +/- that is not an exponent sign
        size_t split = std::string::npos;
        for (size_t i = s.size(); i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
                split = i;
                break;
            }
        }
        if (split == std::string::npos)
            return {0.0, s.empty() || s == "+" ? 1.0 : (s == "-" ? -1.0 : std::stod(s))};
        const std::string re = s.substr(0, split);
        std::string im = s.substr(split);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return {std::stod(re), std::stod(im)};
    }
    return {std::stod(s), 0.0};
}

Catalog load_or_builtin(const std::string& path) {
    return path.empty() ? builtin_catalog() : load_catalog(path);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

std::string tower_line(const TowerReal& v) {
    std::string s = to_string(v);
    if (auto d = to_double(v)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.10g", *d);
        s += "  (~" + std::string(buf) + ")";
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"escape-speed analysis of entire-function iteration"};
    app.require_subcommand(1);

    std::string catalog_path;
    app.add_option("--catalog", catalog_path, "catalog file (default: built-in)");

    // ---- catalog ----
    auto* cmd_catalog = app.add_subcommand("catalog", "list catalog entries");
    bool dump = false;
    cmd_catalog->add_flag("--dump", dump, "print the full catalog file text");

    // ---- eval ----
    auto* cmd_eval = app.add_subcommand("eval", "evaluate growth maps");
    std::string fn, op = "logm", r_text = "10", t_text = "1";
    int m = 2, n_shift = 0, steps = 1;
    double eps = 0.5, p = 2.0;
    cmd_eval->add_option("--fn", fn, "model name")->required();
    cmd_eval->add_option("--op", op,
                         "logm | mu | iter_mu | iter_m | phi | psi | phi_eps | order");
    cmd_eval->add_option("--m", m, "depth m");
    cmd_eval->add_option("--eps", eps, "eps in (0,1]");
    cmd_eval->add_option("--n", n_shift, "shift n (psi)");
    cmd_eval->add_option("--p", p, "exponent p (psi)");
    cmd_eval->add_option("--steps", steps, "iteration count");
    cmd_eval->add_option("--r", r_text, "radius (decimal or T(l;m))");
    cmd_eval->add_option("--t", t_text, "t value (decimal or T(l;m))");

    // ---- check ----
    auto* cmd_check = app.add_subcommand("check", "run a condition checker");
    std::string cond;
    cmd_check->add_option("condition", cond,
                          "theorem22 | lemma23 | lemma34 | lemma52 | m_log | m_weak | "
                          "strong_log | growth | psi_phi")
        ->required();
    std::string chk_fn, R_text = "2";
    int chk_m = 2, chk_n = 0, horizon = 20;
    double chk_eps = 0.5, chk_q = 0.5, chk_qt = 1.1, chk_p = 2.0, chk_d = 2.0,
           chk_c = 2.0;
    std::vector<double> ks, as, bs;
    cmd_check->add_option("--fn", chk_fn, "model name (model-dependent conditions)");
    cmd_check->add_option("--m", chk_m, "depth m");
    cmd_check->add_option("--eps", chk_eps, "eps in (0,1)");
    cmd_check->add_option("--k", ks, "k menu override");
    cmd_check->add_option("--q", chk_q, "exponent q");
    cmd_check->add_option("--qt", chk_qt, "exponent q-tilde");
    cmd_check->add_option("--p", chk_p, "exponent p");
    cmd_check->add_option("--d", chk_d, "factor d");
    cmd_check->add_option("--c", chk_c, "factor c");
    cmd_check->add_option("--n", chk_n, "shift n / nesting depth");
    cmd_check->add_option("--a", as, "lemma23 left coefficients");
    cmd_check->add_option("--b", bs, "lemma23 right coefficients");
    cmd_check->add_option("--R", R_text, "base radius (m_weak)");
    cmd_check->add_option("--horizon", horizon, "finite horizon (m_weak)");

    // ---- classify ----
    auto* cmd_classify = app.add_subcommand("classify", "classify one seed point");
    std::string z_text = "0", cls_R = "2", dump_orbit;
    int cls_horizon = 40, ell_max = 8;
    double ceiling = 1e15;
    std::string cls_fn;
    cmd_classify->add_option("--fn", cls_fn, "model name")->required();
    cmd_classify->add_option("--z", z_text, "seed, e.g. \"0.0+3.14159i\"")->required();
    cmd_classify->add_option("--R", cls_R, "base radius");
    cmd_classify->add_option("--horizon", cls_horizon, "orbit horizon");
    cmd_classify->add_option("--ell-max", ell_max, "largest shift searched");
    cmd_classify->add_option("--ceiling", ceiling, "level-0 ceiling");
    cmd_classify->add_option("--dump-orbit", dump_orbit, "write orbit CSV here");

    // ---- render ----
    auto* cmd_render = app.add_subcommand("render", "classify a pixel grid");
    std::string rnd_fn, center_text = "0", out_path = "escape.ppm", hist_path;
    RenderJob job;
    int threads = 0;
    std::string job_R = "2";
    cmd_render->add_option("--fn", rnd_fn, "model name")->required();
    cmd_render->add_option("--center", center_text, "rectangle center (complex)");
    cmd_render->add_option("--width", job.width, "rectangle width");
    cmd_render->add_option("--height", job.height, "rectangle height");
    cmd_render->add_option("--px", job.px, "pixels across");
    cmd_render->add_option("--py", job.py, "pixels down");
    cmd_render->add_option("--R", job_R, "base radius");
    cmd_render->add_option("--horizon", job.horizon, "orbit horizon");
    cmd_render->add_option("--ell-max", job.ell_max, "largest shift searched");
    cmd_render->add_option("--threads", threads, "worker threads (0 = auto)");
    cmd_render->add_option("--out", out_path, "output PPM path");
    cmd_render->add_option("--histogram", hist_path, "verdict histogram CSV path");

    // ---- suite ----
    auto* cmd_suite = app.add_subcommand("suite", "run the full battery + CSVs");
    std::string config_path, suite_out;
    cmd_suite->add_option("--config", config_path, "run configuration file");
    cmd_suite->add_option("--out", suite_out, "output directory (default from config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage error
    }

    try {
        if (*cmd_catalog) {
            const Catalog cat = load_or_builtin(catalog_path);
            if (dump) {
                std::cout << dump_catalog(cat);
            } else {
                for (const GrowthModel& f : cat) {
                    std::printf("%-12s kind=%-13s R_min=%-4g", f.name.c_str(),
                                to_string(f.kind).c_str(), f.r_min);
                    if (!f.expect.empty()) {
                        std::printf(" expects:");
                        for (const auto& [k, v] : f.expect)
                            std::printf(" %s=%s", k.c_str(), v.c_str());
                    }
                    std::printf("\n");
                }
            }
            return 0;
        }

        if (*cmd_eval) {
            const Catalog cat = load_or_builtin(catalog_path);
            const GrowthModel& f = find_model(cat, fn);
            const TowerReal r = parse_tower(r_text);
            const TowerReal t = parse_tower(t_text);
            if (op == "logm") {
                std::cout << tower_line(max_modulus_log(f, r)) << "\n";
            } else if (op == "mu") {
                std::cout << tower_line(mu(f, m, eps, r)) << "\n";
            } else if (op == "iter_mu") {
                std::cout << tower_line(iterate_mu(f, m, eps, r, steps)) << "\n";
            } else if (op == "iter_m") {
                std::cout << tower_line(iterate_M(f, r, steps)) << "\n";
            } else if (op == "phi") {
                std::cout << tower_line(phi_m(f, m, t)) << "\n";
            } else if (op == "phi_eps") {
                std::cout << tower_line(phi_m_eps(f, m, eps, t)) << "\n";
            } else if (op == "psi") {
                std::cout << tower_line(psi_m(n_shift, m, p, t)) << "\n";
            } else if (op == "order") {
                std::vector<double> radii;
                for (int i = 0; i < 13; ++i) radii.push_back(10.0 * std::pow(10.0, i / 2.0));
                const auto [rho, lam] = estimate_order(f, radii);
                std::printf("order_estimate=%.9g lower_order_estimate=%.9g "
                            "(sampled, %zu radii)\n",
                            rho, lam, radii.size());
            } else {
                std::cerr << "unknown --op " << op << "\n";
                return 2;
            }
            return 0;
        }

        if (*cmd_check) {
            const Catalog cat = load_or_builtin(catalog_path);
            const std::vector<double>& kg = ks.empty() ? k_menu() : ks;
            ConditionReport rep;
            if (cond == "lemma34") {
                rep = check_lemma34(chk_n == 0 ? 1 : chk_n, chk_d, chk_q);
            } else if (cond == "lemma23") {
                rep = check_lemma23(chk_p, as.empty() ? std::vector<double>{1.0} : as,
                                    bs.empty() ? std::vector<double>{1.0} : bs);
            } else {
                if (chk_fn.empty())
                    throw std::invalid_argument("--fn is required for " + cond);
                const GrowthModel& f = find_model(cat, chk_fn);
                if (cond == "theorem22")
                    rep = check_theorem22(f, chk_m, chk_eps, chk_c, chk_q, chk_n);
                else if (cond == "m_log")
                    rep = check_m_log_regular(f, chk_m, chk_eps, kg);
                else if (cond == "strong_log")
                    rep = check_strong_log_regular(f, chk_eps, kg);
                else if (cond == "m_weak")
                    rep = check_m_weak_regular(f, chk_m, chk_eps, parse_tower(R_text),
                                               horizon);
                else if (cond == "growth")
                    rep = check_growth_condition(f, chk_m, chk_n, chk_q, chk_qt);
                else if (cond == "psi_phi")
                    rep = check_psi_phi(f, chk_m, chk_n, chk_q, chk_qt, chk_p, chk_d);
                else if (cond == "lemma52")
                    rep = check_lemma52_transfer(f, chk_eps,
                                                 ks.empty() ? 2.0 : ks.front());
                else {
                    std::cerr << "unknown condition " << cond << "\n";
                    return 2;
                }
            }
            std::cout << describe(rep) << "\n";
            std::cout << report_csv_header() << "\n" << format_report_row(rep) << "\n";
            return rep.verdict == Verdict::INCONCLUSIVE ? 3 : 0;
        }

        if (*cmd_classify) {
            const Catalog cat = load_or_builtin(catalog_path);
            const GrowthModel& f = find_model(cat, cls_fn);
            const std::complex<double> z = parse_complex(z_text);
            const OrbitRecord rec = iterate_orbit(f, z, cls_horizon, ceiling);
            const EscapeClass cls = classify_escape(f, rec, parse_tower(cls_R), m_menu(),
                                                    eps_menu(), ell_max);
            std::cout << describe(cls) << "\n";
            std::cout << classification_csv_header() << "\n"
                      << format_classification_row(make_classification_row(f.name, z, cls))
                      << "\n";
            if (!dump_orbit.empty()) write_file(dump_orbit, orbit_csv(rec));
            return 0;
        }

        if (*cmd_render) {
            const Catalog cat = load_or_builtin(catalog_path);
            const GrowthModel& f = find_model(cat, rnd_fn);
            job.fn = rnd_fn;
            job.center = parse_complex(center_text);
            job.R = parse_tower(job_R);
            const RenderResult res = render(f, job, threads);
            write_ppm(out_path, res);
            if (!hist_path.empty()) write_file(hist_path, histogram_csv(res));
            long total = 0;
            for (const auto& [v, c] : res.histogram) total += c;
            std::printf("wrote %s (%dx%d, %ld pixels)\n", out_path.c_str(), res.width,
                        res.height, total);
            for (const auto& [v, c] : res.histogram)
                std::printf("  %-24s %ld\n", v.c_str(), c);
            return 0;
        }

        if (*cmd_suite) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = load_config(config_path);
            if (!catalog_path.empty()) cfg.catalog_path = catalog_path;
            if (!suite_out.empty()) cfg.output_dir = suite_out;
            const Catalog cat = load_or_builtin(cfg.catalog_path);
            const SuiteResult res = run_suite(cat, cfg);
            std::filesystem::create_directories(cfg.output_dir);
            write_file(cfg.output_dir + "/reports.csv", res.reports_csv);
            write_file(cfg.output_dir + "/classifications.csv", res.classifications_csv);
            std::printf("suite: %d checks, %d expectation mismatches\n", res.checks,
                        res.mismatches);
            for (const std::string& line : res.mismatch_lines)
                std::printf("  MISMATCH %s\n", line.c_str());
            std::printf("wrote %s/reports.csv and %s/classifications.csv\n",
                        cfg.output_dir.c_str(), cfg.output_dir.c_str());
            return res.mismatches == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
