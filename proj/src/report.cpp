#include "ks/report.hpp"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace ks {

VerificationReport::VerificationReport() : timestamp(utc_timestamp()) {}

void VerificationReport::add(std::string name, nlohmann::json expected, nlohmann::json observed, double tolerance,
                             bool pass)
{
    checks.push_back({std::move(name), std::move(expected), std::move(observed), tolerance, pass});
}

bool VerificationReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ReportCheck& c) { return c.pass; });
}

nlohmann::json VerificationReport::to_json() const
{
    nlohmann::json doc;
    doc["version"] = kArtifactVersion;
    doc["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    doc["timestamp"] = timestamp;
    doc["pass"] = pass();
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        doc["checks"].push_back({{"name", c.name},
                                 {"expected", c.expected},
                                 {"observed", c.observed},
                                 {"tolerance", c.tolerance},
                                 {"pass", c.pass}});
    }
    return doc;
}

std::string VerificationReport::to_text() const
{
    std::ostringstream out;
    std::size_t failed = 0;
    for (const auto& c : checks) {
        failed += c.pass ? 0 : 1;
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.observed.dump() << " (expected "
            << c.expected.dump() << ", tol " << c.tolerance << ")\n";
    }
    out << checks.size() << " checks, " << failed << " failed: " << (failed == 0 ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream out;
    out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

} // namespace ks
