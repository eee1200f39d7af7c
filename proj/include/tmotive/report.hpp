#ifndef TMOTIVE_REPORT_HPP
#define TMOTIVE_REPORT_HPP

#include <string>
#include <vector>

#include "tmotive/laurent.hpp"

namespace tmotive {

// Agreement is the u-adic valuation to which two sides coincide;
// exact_agreement marks identities checked in exact arithmetic.
inline constexpr long long exact_agreement = Laurent::inf_prec;

struct CheckResult {
    std::string label;
    bool pass = false;
    long long agreement = 0;
    std::string detail;
};

struct VerificationReport {
    std::string name;
    std::string params;
    std::vector<CheckResult> checks;
    std::string note;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(std::string label, bool pass, long long agreement = exact_agreement,
             std::string detail = "") {
        checks.push_back({std::move(label), pass, agreement, std::move(detail)});
    }
    std::string to_text() const;
    std::string to_json() const;
};

}  // namespace tmotive

#endif
