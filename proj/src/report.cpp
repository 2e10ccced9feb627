#include "bchyp/report.hpp"

#include <sstream>

#include "json.hpp"

namespace bch {

namespace {

std::string csvEscape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

} // namespace

std::string checksToCsv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "# bchyp-report-v" << kReportSchemaVersion << "\n";
    os << "check,hypothesis,samples,tolerance,worst_violation,passed,witnesses\n";
    for (const auto& r : reports) {
        std::string wit;
        for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
            if (i) wit += " | ";
            wit += r.witnesses[i];
        }
        os << r.checkName << ',' << csvEscape(r.hypothesisSet) << ',' << r.samplesTried
           << ',' << formatDouble(r.declaredTolerance) << ','
           << formatDouble(r.worstViolation) << ',' << (r.passed ? "1" : "0") << ','
           << csvEscape(wit) << "\n";
    }
    return os.str();
}

std::string checksToJson(const std::vector<CheckReport>& reports, std::uint64_t seed) {
    nlohmann::json j;
    j["schema"] = kReportSchemaVersion;
    j["seed"] = seed;
    bool all = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json e;
        e["check"] = r.checkName;
        e["hypothesis"] = r.hypothesisSet;
        e["samples"] = r.samplesTried;
        e["tolerance"] = r.declaredTolerance;
        e["worst_violation"] = r.worstViolation;
        e["passed"] = r.passed;
        e["witnesses"] = r.witnesses;
        arr.push_back(e);
        all = all && r.passed;
    }
    j["checks"] = arr;
    j["all_passed"] = all;
    return j.dump(2) + "\n";
}

std::string samplesToCsv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "# bchyp-samples-v" << kReportSchemaVersion << "\n";
    os << "check,params,violation,tolerance,margin\n";
    for (const auto& r : reports)
        for (const auto& row : r.rows)
            os << r.checkName << ',' << csvEscape(row.params) << ','
               << formatDouble(row.violation) << ',' << formatDouble(r.declaredTolerance)
               << ',' << formatDouble(r.declaredTolerance - row.violation) << "\n";
    return os.str();
}

std::string scanToCsv(const std::vector<ScanRow>& rows, int rank) {
    std::ostringstream os;
    os << "# bchyp-scan-v" << kReportSchemaVersion << "\n";
    os << "id,m_s,m_m,m_l,ell,ell_tilde";
    for (int j = 1; j <= rank; ++j) os << ",lambda_re_" << j;
    for (int j = 1; j <= rank; ++j) os << ",lambda_im_" << j;
    for (int j = 1; j <= rank; ++j) os << ",x_" << j;
    os << ",value_re,value_im,method,err_est\n";
    for (const auto& r : rows) {
        os << r.id << ',' << formatDouble(r.m.ms) << ',' << formatDouble(r.m.mm) << ','
           << formatDouble(r.m.ml) << ',' << formatDouble(r.d.ell) << ','
           << formatDouble(r.d.ellTilde);
        for (int j = 0; j < rank; ++j) os << ',' << formatDouble(r.lambda[j].real());
        for (int j = 0; j < rank; ++j) os << ',' << formatDouble(r.lambda[j].imag());
        for (int j = 0; j < rank; ++j) os << ',' << formatDouble(r.x[j]);
        os << ',' << formatDouble(r.value.real()) << ',' << formatDouble(r.value.imag())
           << ',' << r.method << ',' << formatDouble(r.errEstimate) << "\n";
    }
    return os.str();
}

} // namespace bch
