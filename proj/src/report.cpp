#include "tmotive/report.hpp"

#include <sstream>

#include "json.hpp"

namespace tmotive {

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    os << (passed() ? "PASS" : "FAIL") << " " << name;
    if (!params.empty()) os << " [" << params << "]";
    os << "\n";
    for (const auto& c : checks) {
        os << "  " << (c.pass ? "ok  " : "FAIL") << " " << c.label;
        if (c.agreement >= exact_agreement)
            os << " (exact)";
        else
            os << " (agreement valuation " << c.agreement << ")";
        if (!c.detail.empty()) os << " " << c.detail;
        os << "\n";
    }
    if (!note.empty()) os << "  note: " << note << "\n";
    return os.str();
}

std::string VerificationReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["params"] = params;
    j["pass"] = passed();
    if (!note.empty()) j["note"] = note;
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e;
        e["label"] = c.label;
        e["pass"] = c.pass;
        if (c.agreement >= exact_agreement)
            e["agreement"] = "exact";
        else
            e["agreement"] = c.agreement;
        if (!c.detail.empty()) e["detail"] = c.detail;
        cs.push_back(e);
    }
    j["checks"] = cs;
    return j.dump();
}

}  // namespace tmotive
