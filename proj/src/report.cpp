#include "escape/report.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace escape {

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr - buf);
}

std::vector<std::string> split_csv(const std::string& line, size_t expect) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        const size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    if (out.size() != expect)
        throw std::invalid_argument("csv row: expected " + std::to_string(expect) +
                                    " fields, got " + std::to_string(out.size()) +
                                    " in: " + line);
    return out;
}

std::string witness_field(const ConditionReport& rep) {
    if (rep.witness.threshold) return "R=" + to_string(*rep.witness.threshold);
    if (rep.witness.counterexample)
        return "cex=" + to_string(*rep.witness.counterexample);
    return "-";
}

} // namespace

std::string report_csv_header() {
    return "condition_id,fn,m,eps,k,q,n,verdict,witness,range_lo,range_hi";
}

std::string format_report_row(const ConditionReport& rep) {
    ReportRow row;
    row.condition_id = rep.condition_id;
    row.fn = rep.fn;
    row.m = rep.params.m;
    row.eps = rep.params.eps;
    row.k = rep.witness.k ? fmt(*rep.witness.k)
                          : (rep.params.k > 0.0 ? fmt(rep.params.k) : "-");
    row.q = rep.params.q;
    row.n = rep.params.n;
    row.verdict = to_string(rep.verdict);
    row.witness = witness_field(rep);
    row.range_lo = rep.samples > 0 ? to_string(rep.range_lo) : "-";
    row.range_hi = rep.samples > 0 ? to_string(rep.range_hi) : "-";
    return format_report_row(row);
}

std::string format_report_row(const ReportRow& r) {
    std::ostringstream os;
    os << r.condition_id << "," << r.fn << "," << r.m << "," << fmt(r.eps) << ","
       << r.k << "," << fmt(r.q) << "," << r.n << "," << r.verdict << ","
       << r.witness << "," << r.range_lo << "," << r.range_hi;
    return os.str();
}

ReportRow parse_report_row(const std::string& line) {
    const auto f = split_csv(line, 11);
    ReportRow r;
    r.condition_id = f[0];
    r.fn = f[1];
    r.m = std::stoi(f[2]);
    r.eps = std::stod(f[3]);
    r.k = f[4];
    r.q = std::stod(f[5]);
    r.n = std::stoi(f[6]);
    r.verdict = f[7];
    r.witness = f[8];
    r.range_lo = f[9];
    r.range_hi = f[10];
    return r;
}

std::string classification_csv_header() {
    return "fn,re,im,verdict,m,eps,ell,horizon";
}

ClassificationRow make_classification_row(const std::string& fn,
                                          std::complex<double> z,
                                          const EscapeClass& cls) {
    ClassificationRow row;
    row.fn = fn;
    row.re = z.real();
    row.im = z.imag();
    row.verdict = to_string(cls.verdict);
    row.m = cls.m;
    row.eps = cls.eps;
    row.ell = cls.ell;
    row.horizon = cls.horizon;
    return row;
}

std::string format_classification_row(const ClassificationRow& r) {
    std::ostringstream os;
    os << r.fn << "," << fmt(r.re) << "," << fmt(r.im) << "," << r.verdict << ","
       << r.m << "," << fmt(r.eps) << "," << r.ell << "," << r.horizon;
    return os.str();
}

ClassificationRow parse_classification_row(const std::string& line) {
    const auto f = split_csv(line, 8);
    ClassificationRow r;
    r.fn = f[0];
    r.re = std::stod(f[1]);
    r.im = std::stod(f[2]);
    r.verdict = f[3];
    r.m = std::stoi(f[4]);
    r.eps = std::stod(f[5]);
    r.ell = std::stoi(f[6]);
    r.horizon = std::stoi(f[7]);
    return r;
}

std::string describe(const ConditionReport& rep) {
    std::ostringstream os;
    os << to_string(rep.verdict);
    if (rep.witness.k) os << " k=" << *rep.witness.k;
    if (rep.witness.threshold) {
        os << " R=" << to_string(*rep.witness.threshold);
        if (auto d = to_double(*rep.witness.threshold)) os << " (~" << *d << ")";
    }
    if (rep.witness.counterexample)
        os << " counterexample=" << to_string(*rep.witness.counterexample);
    if (!rep.notes.empty()) os << "  [" << rep.notes << "]";
    return os.str();
}

std::string describe(const EscapeClass& cls) {
    std::ostringstream os;
    os << to_string(cls.verdict);
    if (cls.verdict == EscapeVerdict::QUITE_FAST || cls.verdict == EscapeVerdict::QM)
        os << "(m=" << cls.m << ",eps=" << cls.eps << ")";
    if (cls.verdict == EscapeVerdict::FAST || cls.verdict == EscapeVerdict::QUITE_FAST ||
        cls.verdict == EscapeVerdict::QM)
        os << " ell=" << cls.ell;
    os << " horizon=" << cls.horizon << " R=" << to_string(cls.R_used);
    return os.str();
}

} // namespace escape
