#include "ks/ghz_contradiction.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ks {

namespace {

const ComplexMatrix& one8()
{
    static const ComplexMatrix id = ComplexMatrix::identity(8);
    return id;
}

// Real part of <psi, M psi> without requiring M Hermitian.
double raw_expectation(const PureState& psi, const ComplexMatrix& m)
{
    const ComplexVector mv = m * std::span<const Complex>(psi.amplitudes());
    return inner(psi.amplitudes(), mv).real();
}

double commutator_norm(const ComplexMatrix& x, const ComplexMatrix& y)
{
    return max_distance(x * y, y * x);
}

struct PremiseLog {
    double tol;
    std::vector<PremiseCheck> checks;

    void deviation(std::string name, double observed)
    {
        checks.push_back({std::move(name), 0.0, observed, tol, observed <= tol});
    }
    void value(std::string name, double expected, double observed)
    {
        checks.push_back({std::move(name), expected, observed, tol, std::abs(observed - expected) <= tol});
    }
};

std::string joined(const std::vector<std::string>& names, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        out += (i ? sep : "") + names[i];
    }
    return out;
}

} // namespace

SignConstraint make_constraint(std::vector<std::string> variables, int required_product, std::string provenance)
{
    if (variables.empty()) {
        throw InvalidArgument("sign constraint needs at least one variable");
    }
    if (required_product != 1 && required_product != -1) {
        throw InvalidArgument("sign constraint product must be +1 or -1");
    }
    const std::set<std::string> unique(variables.begin(), variables.end());
    if (unique.size() != variables.size()) {
        throw InvalidArgument("sign constraint repeats a variable");
    }
    return SignConstraint{std::move(variables), required_product, std::move(provenance)};
}

SignConstraint multiply(const SignConstraint& lhs, const SignConstraint& rhs)
{
    std::vector<std::string> vars;
    for (const auto& v : lhs.variables) {
        if (std::find(rhs.variables.begin(), rhs.variables.end(), v) == rhs.variables.end()) {
            vars.push_back(v);
        }
    }
    for (const auto& v : rhs.variables) {
        if (std::find(lhs.variables.begin(), lhs.variables.end(), v) == lhs.variables.end()) {
            vars.push_back(v);
        }
    }
    std::sort(vars.begin(), vars.end());
    return SignConstraint{std::move(vars), lhs.required_product * rhs.required_product,
                          "product of (" + to_string(lhs) + ") and (" + to_string(rhs) + ")"};
}

std::string to_string(const SignConstraint& c)
{
    const std::string lhs = c.variables.empty() ? "1" : joined(c.variables, " ");
    return lhs + (c.required_product > 0 ? " = +1" : " = -1");
}

std::vector<PremiseCheck> verify_ghz_premises(const GhzSystem& sys, double tol)
{
    PremiseLog log{tol, {}};
    const ComplexMatrix triple = sys.a[0] * sys.a[1] * sys.a[2];

    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        log.deviation("A" + n + " Hermitian", max_distance(sys.a[j], sys.a[j].adjoint()));
        log.deviation("B" + n + " Hermitian", max_distance(sys.b[j], sys.b[j].adjoint()));
        log.deviation("Q" + n + " Hermitian", max_distance(sys.q[j], sys.q[j].adjoint()));
    }
    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        log.deviation("A" + n + "^2 = 1", max_distance(sys.a[j] * sys.a[j], one8()));
        log.deviation("B" + n + "^2 = 1", max_distance(sys.b[j] * sys.b[j], one8()));
        log.deviation("Q" + n + "^2 = 1", max_distance(sys.q[j] * sys.q[j], one8()));
    }

    // Q_j is the product of one A factor and two B factors on distinct sites.
    const std::array<std::array<const ComplexMatrix*, 3>, 3> factors{{
        {&sys.a[0], &sys.b[1], &sys.b[2]},
        {&sys.b[0], &sys.a[1], &sys.b[2]},
        {&sys.b[0], &sys.b[1], &sys.a[2]},
    }};
    const std::array<std::string, 3> factor_names{"A1 B2 B3", "B1 A2 B3", "B1 B2 A3"};
    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        const auto& f = factors[j];
        log.deviation("Q" + n + " = " + factor_names[j], max_distance(sys.q[j], *f[0] * *f[1] * *f[2]));
        log.deviation("factors " + factor_names[j] + " commute",
                      std::max({commutator_norm(*f[0], *f[1]), commutator_norm(*f[0], *f[2]),
                                commutator_norm(*f[1], *f[2])}));
    }
    log.deviation("A1, A2, A3 commute",
                  std::max({commutator_norm(sys.a[0], sys.a[1]), commutator_norm(sys.a[0], sys.a[2]),
                            commutator_norm(sys.a[1], sys.a[2])}));
    log.deviation("Q1, Q2, Q3 commute",
                  std::max({commutator_norm(sys.q[0], sys.q[1]), commutator_norm(sys.q[0], sys.q[2]),
                            commutator_norm(sys.q[1], sys.q[2])}));

    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        ComplexVector diff = sys.q[j] * std::span<const Complex>(sys.psi.amplitudes());
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff[i] -= sys.psi.amplitudes()[i];
        }
        log.deviation("Q" + n + " psi = psi", norm2(diff));
    }
    for (std::size_t j = 0; j < 3; ++j) {
        log.value("<Q" + std::to_string(j + 1) + "> = 1", 1.0, raw_expectation(sys.psi, sys.q[j]));
    }
    log.deviation("Q1 Q2 Q3 = -A1 A2 A3", max_norm(sys.q[0] * sys.q[1] * sys.q[2] + triple));
    log.deviation("(A1 A2 A3)^2 = 1", max_distance(triple * triple, one8()));
    log.value("<A1 A2 A3> = -1", -1.0, raw_expectation(sys.psi, triple));
    return log.checks;
}

std::vector<SignConstraint> derive_constraints(const GhzSystem& sys, double tol)
{
    for (const auto& c : verify_ghz_premises(sys, tol)) {
        if (!c.pass) {
            std::ostringstream detail;
            detail.precision(17);
            detail << "observed " << c.observed << ", expected " << c.expected << ", tolerance " << c.tolerance;
            throw PremiseFailure(c.name, detail.str());
        }
    }
    std::vector<SignConstraint> out;
    const std::array<std::vector<std::string>, 3> vars{{{"a1", "b2", "b3"}, {"b1", "a2", "b3"}, {"b1", "b2", "a3"}}};
    const std::array<std::string, 3> factor_names{"A1, B2, B3", "B1, A2, B3", "B1, B2, A3"};
    for (std::size_t j = 0; j < 3; ++j) {
        const std::string n = std::to_string(j + 1);
        out.push_back(make_constraint(vars[j], +1,
                                      "<Q" + n + "> = 1 and Q" + n + "^2 = 1: a +/-1 variable with mean 1, so q" + n +
                                          " = 1 on the support; product rule over the commuting factors " +
                                          factor_names[j] + " gives q" + n + " = " + joined(vars[j], " ")));
    }
    out.push_back(make_constraint({"a1", "a2", "a3"}, -1,
                                  "Q1 Q2 Q3 = -A1 A2 A3 gives <A1 A2 A3> = -1 and (A1 A2 A3)^2 = 1, so the image of "
                                  "A1 A2 A3 is -1 on the support; product rule over the commuting A1, A2, A3 gives "
                                  "a1 a2 a3 = -1"));
    return out;
}

SearchResult exhaustive_search(const std::vector<SignConstraint>& constraints)
{
    std::set<std::string> names;
    for (const auto& c : constraints) {
        names.insert(c.variables.begin(), c.variables.end());
    }
    return exhaustive_search(constraints, std::vector<std::string>(names.begin(), names.end()));
}

SearchResult exhaustive_search(const std::vector<SignConstraint>& constraints, std::vector<std::string> variables)
{
    if (variables.size() > kMaxSearchVariables) {
        throw TooManyVariables(std::to_string(variables.size()) + " variables exceed the limit of " +
                               std::to_string(kMaxSearchVariables));
    }
    // Constraint -> variable positions.
    std::vector<std::vector<std::size_t>> positions;
    for (const auto& c : constraints) {
        (void)make_constraint(c.variables, c.required_product);
        std::vector<std::size_t> pos;
        for (const auto& v : c.variables) {
            const auto it = std::find(variables.begin(), variables.end(), v);
            if (it == variables.end()) {
                throw InvalidArgument("constraint variable '" + v + "' missing from the search variables");
            }
            pos.push_back(static_cast<std::size_t>(it - variables.begin()));
        }
        positions.push_back(std::move(pos));
    }

    const std::size_t n = variables.size();
    SearchResult result;
    result.searched = std::uint64_t{1} << n;
    std::vector<int> assignment(n);
    for (std::uint64_t code = 0; code < result.searched; ++code) {
        for (std::size_t k = 0; k < n; ++k) {
            assignment[k] = (code >> (n - 1 - k)) & 1u ? -1 : 1;
        }
        bool ok = true;
        for (std::size_t c = 0; c < constraints.size() && ok; ++c) {
            int prod = 1;
            for (std::size_t p : positions[c]) {
                prod *= assignment[p];
            }
            ok = prod == constraints[c].required_product;
        }
        if (ok) {
            result.satisfying.push_back(assignment);
        }
    }
    result.variables = std::move(variables);
    return result;
}

ContradictionReport run_ks_theorem(double tol)
{
    return run_ks_theorem(build_ghz(), tol);
}

ContradictionReport run_ks_theorem(const GhzSystem& sys, double tol)
{
    ContradictionReport report;
    report.premises = verify_ghz_premises(sys, tol);
    report.constraints = derive_constraints(sys, tol);
    for (std::size_t j = 0; j < 3; ++j) {
        report.quantum_expectations["Q" + std::to_string(j + 1)] = raw_expectation(sys.psi, sys.q[j]);
    }
    report.quantum_expectations["A1A2A3"] = raw_expectation(sys.psi, ghz_a_product(sys));

    const SearchResult search = exhaustive_search(report.constraints);
    report.assignments_searched = search.searched;
    report.satisfying_assignments = search.satisfying.size();

    const SignConstraint reduced = multiply(multiply(report.constraints[0], report.constraints[1]),
                                            report.constraints[2]);
    report.reduced_constraint = reduced;
    const SignConstraint& triple = report.constraints[3];
    const std::string lhs = joined(reduced.variables, "");
    std::ostringstream text;
    text << "q1 q2 q3 = (a1 b2 b3)(b1 a2 b3)(b1 b2 a3) = a1 a2 a3 b1^2 b2^2 b3^2; "
         << "the b-factors appear quadratically and b_j = +/-1, so q1 q2 q3 = 1 forces " << lhs << " = "
         << (reduced.required_product > 0 ? "+1" : "-1") << ", while the operator identity forces "
         << joined(triple.variables, "") << " = " << (triple.required_product > 0 ? "+1" : "-1")
         << (reduced.variables == triple.variables && reduced.required_product != triple.required_product
                 ? ": contradiction"
                 : "");
    report.reduced_argument = text.str();
    return report;
}

nlohmann::json to_json(const SignConstraint& c)
{
    return nlohmann::json{{"variables", c.variables}, {"product", c.required_product}, {"provenance", c.provenance}};
}

nlohmann::json to_json(const ContradictionReport& report)
{
    nlohmann::json doc;
    doc["expectations"] = report.quantum_expectations;
    doc["constraints"] = nlohmann::json::array();
    for (const auto& c : report.constraints) {
        doc["constraints"].push_back(to_json(c));
    }
    doc["searched"] = report.assignments_searched;
    doc["satisfying"] = report.satisfying_assignments;
    doc["reduction"] = report.reduced_argument;
    doc["premises"] = nlohmann::json::array();
    for (const auto& p : report.premises) {
        doc["premises"].push_back({{"name", p.name},
                                   {"expected", p.expected},
                                   {"observed", p.observed},
                                   {"tolerance", p.tolerance},
                                   {"pass", p.pass}});
    }
    return doc;
}

std::string to_text(const ContradictionReport& report)
{
    std::ostringstream os;
    os.precision(15);
    os << "GHZ value-assignment contradiction\n\nQuantum expectations in psi:\n";
    for (const auto& [name, value] : report.quantum_expectations) {
        os << "  <" << name << "> = " << value << "\n";
    }
    os << "\nPremises:\n";
    for (const auto& p : report.premises) {
        os << "  [" << (p.pass ? "ok" : "FAIL") << "] " << p.name << "  (observed " << p.observed << ")\n";
    }
    os << "\nConstraints:\n";
    for (const auto& c : report.constraints) {
        os << "  " << to_string(c) << "\n      " << c.provenance << "\n";
    }
    os << "\nReduction: " << report.reduced_argument << "\n";
    os << "\nSearched " << report.assignments_searched << " assignments, " << report.satisfying_assignments
       << " satisfy all constraints.\n";
    return os.str();
}

} // namespace ks
