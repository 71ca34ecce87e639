#pragma once

// CSV schemas shared by the CLI and the suite. Both row kinds round-trip
// through parse/format.
//
//   reports:         condition_id,fn,m,eps,k,q,n,verdict,witness,range_lo,range_hi
//   classifications: fn,re,im,verdict,m,eps,ell,horizon

#include "escape/orbit.hpp"
#include "escape/regularity.hpp"

#include <string>

namespace escape {

std::string report_csv_header();
std::string format_report_row(const ConditionReport& rep);

struct ReportRow {
    std::string condition_id;
    std::string fn;
    int m = 0;
    double eps = 0.0;
    std::string k;       // "-" when absent
    double q = 0.0;
    int n = 0;
    std::string verdict;
    std::string witness; // "R=T(..)", "cex=T(..)", or "-"
    std::string range_lo;
    std::string range_hi;
};

ReportRow parse_report_row(const std::string& line);
std::string format_report_row(const ReportRow& row);

std::string classification_csv_header();

struct ClassificationRow {
    std::string fn;
    double re = 0.0;
    double im = 0.0;
    std::string verdict;
    int m = 0;
    double eps = 0.0;
    int ell = 0;
    int horizon = 0;
};

ClassificationRow make_classification_row(const std::string& fn,
                                          std::complex<double> z,
                                          const EscapeClass& cls);
std::string format_classification_row(const ClassificationRow& row);
ClassificationRow parse_classification_row(const std::string& line);

// One-line human-readable verdict, e.g. "SATISFIED_ON_RANGE k=3 R=T(1;...)".
std::string describe(const ConditionReport& rep);
std::string describe(const EscapeClass& cls);

} // namespace escape
