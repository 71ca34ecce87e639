#pragma once

// The full acceptance battery over a catalog: every applicable checker per
// model plus a deterministic classification sample, written as two CSVs. The
// catalog's expect.* annotations make this a self-contained regression gate.

#include "escape/catalog.hpp"

#include <map>
#include <string>
#include <vector>

namespace escape {

struct RunConfig {
    std::string catalog_path; // empty = builtin
    std::string output_dir = "out";
    std::vector<int> m_list = m_menu();
    std::vector<double> eps_list = eps_menu();
    std::vector<double> k_list = k_menu();
    int horizon = 40;
    int ell_max = 8;
    double ceiling = 1e15;
    unsigned long seed = 12345;
    int threads = 0;
    int random_seeds = 24;              // per-model random classification sample
    std::map<std::string, double> fn_R; // per-function [section] R overrides
};

// Line-oriented "key = value" text with optional [fn] sections.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Classification base radius for a model: the per-function override, else
// max(R_min, 2).
TowerReal classify_base_R(const RunConfig& cfg, const GrowthModel& f);

struct SuiteResult {
    std::string reports_csv;         // header + one row per check
    std::string classifications_csv; // header + one row per seed
    int checks = 0;
    int mismatches = 0;              // verdicts differing from expect.*
    std::vector<std::string> mismatch_lines;
};

SuiteResult run_suite(const Catalog& cat, const RunConfig& cfg);

} // namespace escape
