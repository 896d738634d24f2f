#pragma once

#include "ks/quantum_state.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ks {

/// prod of the named +/-1 variables = required_product.
struct SignConstraint {
    std::vector<std::string> variables;
    int required_product = 1;
    std::string provenance;
};

/// Throws InvalidArgument on empty or repeated variables or a product other than +/-1.
SignConstraint make_constraint(std::vector<std::string> variables, int required_product, std::string provenance = {});

/// Product of two constraints; variables appearing in both square to 1 and drop out.
SignConstraint multiply(const SignConstraint& lhs, const SignConstraint& rhs);

/// "a1 b2 b3 = +1"
std::string to_string(const SignConstraint& c);

struct PremiseCheck {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Every numerical fact the constraint derivation rests on, in derivation order.
/// Never throws on bad matrices; a failed check is reported instead.
std::vector<PremiseCheck> verify_ghz_premises(const GhzSystem& sys, double tol);

/// The three strict-correlation constraints and the triple-product constraint.
/// Throws PremiseFailure naming the first premise that does not verify.
std::vector<SignConstraint> derive_constraints(const GhzSystem& sys, double tol);

struct SearchResult {
    std::vector<std::string> variables;
    /// Each assignment lists +1/-1 per entry of `variables`.
    std::vector<std::vector<int>> satisfying;
    std::uint64_t searched = 0;
};

inline constexpr std::size_t kMaxSearchVariables = 20;

/// Enumerates all 2^n assignments of the variables appearing in the
/// constraints (sorted by name), +1 before -1, first variable slowest.
SearchResult exhaustive_search(const std::vector<SignConstraint>& constraints);
/// Same over an explicit variable list, which must cover every constrained variable.
SearchResult exhaustive_search(const std::vector<SignConstraint>& constraints, std::vector<std::string> variables);

struct ContradictionReport {
    /// Keys "Q1", "Q2", "Q3", "A1A2A3".
    std::map<std::string, double> quantum_expectations;
    std::vector<PremiseCheck> premises;
    std::vector<SignConstraint> constraints;
    std::uint64_t assignments_searched = 0;
    std::size_t satisfying_assignments = 0;
    /// Product of the three strict-correlation constraints after squares cancel.
    SignConstraint reduced_constraint;
    std::string reduced_argument;
};

/// Builds the GHZ system, verifies the premises, derives the constraints and searches.
ContradictionReport run_ks_theorem(double tol);
ContradictionReport run_ks_theorem(const GhzSystem& sys, double tol);

/// Fields "expectations", "constraints", "searched", "satisfying", "reduction", "premises".
nlohmann::json to_json(const ContradictionReport& report);
nlohmann::json to_json(const SignConstraint& c);
std::string to_text(const ContradictionReport& report);

} // namespace ks
