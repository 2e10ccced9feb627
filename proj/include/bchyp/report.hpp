#ifndef BCHYP_REPORT_HPP
#define BCHYP_REPORT_HPP

#include <string>
#include <vector>

#include "bchyp/analysis.hpp"

namespace bch {

// Versioned CSV schema, one row per check:
//   check, hypothesis, samples, tolerance, worst_violation, passed, witnesses
inline constexpr const char* kReportSchemaVersion = "1";

std::string checksToCsv(const std::vector<CheckReport>& reports);
std::string checksToJson(const std::vector<CheckReport>& reports, std::uint64_t seed);

// Per-sample rows: check, parameters, violation, tolerance, margin
std::string samplesToCsv(const std::vector<CheckReport>& reports);

// Scan rows: fixed column layout
//   id, m_s, m_m, m_l, ell, ell_tilde, lambda_re_*, lambda_im_*, x_*,
//   value_re, value_im, method, err_est
struct ScanRow {
    int id = 0;
    Multiplicity m;
    Deformation d;
    CVec lambda;
    Vec x;
    Cplx value{0.0, 0.0};
    std::string method;
    double errEstimate = 0.0;
};

std::string scanToCsv(const std::vector<ScanRow>& rows, int rank);

} // namespace bch

#endif
