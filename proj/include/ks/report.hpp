#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ks {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct ReportCheck {
    std::string name;
    nlohmann::json expected;
    nlohmann::json observed;
    double tolerance = 0.0;
    bool pass = false;
};

/// Named checks plus run metadata; passes iff every check passes.
struct VerificationReport {
    std::vector<ReportCheck> checks;
    std::optional<std::uint64_t> seed;
    std::string timestamp;

    VerificationReport();

    void add(std::string name, nlohmann::json expected, nlohmann::json observed, double tolerance, bool pass);
    bool pass() const;

    /// {"version", "seed", "timestamp", "pass", "checks": [{name, expected, observed, tolerance, pass}]}
    nlohmann::json to_json() const;
    /// One "PASS|FAIL name: observed (expected ..., tol ...)" line per check, then a summary line.
    std::string to_text() const;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

} // namespace ks
