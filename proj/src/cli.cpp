#include "ks/cli.hpp"

#include "ks/error.hpp"
#include "ks/hv_embedding.hpp"
#include "ks/registry_spec.hpp"
#include "ks/report.hpp"
#include "ks/sphere_model.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace ks {

namespace {

using nlohmann::json;

constexpr double kDefaultTol = 1e-10;
constexpr double kQuadratureTol = 1e-6;
constexpr double kMassTol = 1e-9;
constexpr std::size_t kQuadratureNodes = 64;
constexpr std::size_t kMonteCarloSamples = 100000;
constexpr std::size_t kKs2RandomPoints = 1000;
constexpr std::size_t kKs2EquatorPoints = 100;

void emit(std::ostream& out, const VerificationReport& report, const json& extra, bool as_json,
          const std::string& text_tail = {})
{
    if (as_json) {
        json doc = report.to_json();
        for (const auto& [key, value] : extra.items()) {
            doc[key] = value;
        }
        out << doc.dump(2) << "\n";
    } else {
        out << text_tail << report.to_text();
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void add_premises(VerificationReport& report, const std::vector<PremiseCheck>& premises)
{
    for (const auto& p : premises) {
        report.add(p.name, p.expected, p.observed, p.tolerance, p.pass);
    }
}

int ghz_verify(double tol, bool as_json, std::ostream& out)
{
    VerificationReport report;
    try {
        const ContradictionReport result = run_ks_theorem(tol);
        add_premises(report, result.premises);
        report.add("assignments searched", 64, result.assignments_searched, 0.0, result.assignments_searched == 64);
        report.add("satisfying assignments", 0, result.satisfying_assignments, 0.0,
                   result.satisfying_assignments == 0);
        emit(out, report, to_json(result), as_json, to_text(result) + "\n");
    } catch (const PremiseFailure& e) {
        add_premises(report, verify_ghz_premises(build_ghz(), tol));
        emit(out, report, json{{"error", e.what()}}, as_json);
    }
    return report.pass() ? kExitSuccess : kExitContrary;
}

json witness_json(const PointwiseResult& r)
{
    if (!r.witness) {
        return nullptr;
    }
    return {{"point", r.witness_label}, {"lhs", r.witness_lhs}, {"rhs", r.witness_rhs}};
}

std::string witness_text(const std::string& name, const PointwiseResult& r)
{
    if (!r.witness) {
        return {};
    }
    std::ostringstream s;
    s << "witness for " << name << ": point " << r.witness_label << ", " << r.witness_lhs << " != " << r.witness_rhs
      << "\n";
    return s.str();
}

int trivial_embed(const std::string& spec_path, std::optional<std::size_t> state_index, double tol, bool as_json,
                  std::ostream& out, std::ostream& err)
{
    const RegistrySpec spec = load_registry_spec(spec_path);
    const ObservableRegistry registry = build_registry(spec, tol);
    std::vector<NamedState> states = spec.states;
    if (states.empty()) {
        err << "registry spec declares no states\n";
        return kExitUsage;
    }
    if (state_index) {
        if (*state_index >= states.size()) {
            err << "--state-index " << *state_index << " out of range (" << states.size() << " states)\n";
            return kExitUsage;
        }
        states = {states[*state_index]};
    }
    const FiniteHVModel model = trivial_embedding(registry, states);

    VerificationReport report;
    bool ks1_all = true;
    for (const auto& id : registry.ids()) {
        for (const auto& [name, psi] : states) {
            const Ks1Result r = ks1_report(model, registry, id, name, psi, tol);
            ks1_all = ks1_all && r.pass;
            report.add("KS1 " + id + " in " + name, 0.0, r.max_deviation, tol, r.pass);
        }
    }

    json findings = json::array();
    std::string tail;
    auto record = [&](const std::string& name, const PointwiseResult& r) {
        report.add(name, 0, r.violations, 0.0, r.pass);
        findings.push_back({{"check", name},
                            {"points_checked", r.points_checked},
                            {"violations", r.violations},
                            {"witness", witness_json(r)}});
        tail += witness_text(name, r);
    };
    for (const auto& rel : spec.relations) {
        record("KS2 " + rel.target + " = u(" + rel.source + ")",
               ks2_report(model, registry, rel.source, rel.target, rel.u));
    }
    for (const auto& p : spec.products) {
        record("product rule " + p.id + " = " + p.lhs + " " + p.rhs,
               product_rule_report(model, registry, p.lhs, p.rhs, p.id, tol));
    }
    for (const auto& s : spec.sums) {
        record("sum rule " + s.id + " = " + s.lhs + " + " + s.rhs,
               sum_rule_report(model, registry, s.lhs, s.rhs, s.id, tol));
    }

    emit(out, report, json{{"points", model.size()}, {"ks1_pass", ks1_all}, {"findings", findings}}, as_json, tail);
    return ks1_all ? kExitSuccess : kExitContrary;
}

ComplexMatrix random_qubit_observable(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    const double a0 = g(rng);
    const double x = g(rng);
    const double y = g(rng);
    const double z = g(rng);
    return ComplexMatrix{{a0 + z, Complex(x, -y)}, {Complex(x, y), a0 - z}};
}

PureState random_qubit_state(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    const double a = g(rng);
    const double b = g(rng);
    const double c = g(rng);
    const double d = g(rng);
    return PureState::normalized({Complex(a, b), Complex(c, d)});
}

int sphere_verify(std::size_t pairs, Integration method, std::size_t n, std::uint64_t seed, bool as_json,
                  std::ostream& out)
{
    VerificationReport report;
    report.seed = seed;
    std::mt19937_64 rng(seed);
    const RealFunction u = RealFunction::polynomial({0.0, 2.0, 0.0, 1.0});

    double max_delta = 0.0;
    double max_mass_error = 0.0;
    std::size_t within_three_sigma = 0;
    std::size_t ks2_bad = 0;
    std::size_t ks2_points = 0;
    for (std::size_t k = 0; k < pairs; ++k) {
        const ComplexMatrix a = random_qubit_observable(rng);
        const PureState psi = random_qubit_state(rng);
        const SphereObservable obs = sphere_observable_from_matrix(a, kDefaultTol);
        const SphereDensity dens = density_from_state(psi);
        const double born = born_distribution(psi, eigendecompose(a, kDefaultTol)).probability_of(obs.lambda1);
        const Ks1Estimate est = ks1_probability(obs, dens, method, n, seed + k);
        const double delta = std::abs(est.p_lambda1 - born);
        max_delta = std::max(max_delta, delta);

        if (method == Integration::quadrature) {
            report.add("KS1 pair " + std::to_string(k), born, est.p_lambda1, kQuadratureTol, delta <= kQuadratureTol);
            max_mass_error = std::max(max_mass_error, std::abs(density_mass(dens, n) - 1.0));
        } else {
            const double sigma = std::sqrt(born * (1.0 - born) / static_cast<double>(n));
            within_three_sigma += delta <= 3.0 * sigma ? 1 : 0;
        }

        std::vector<SpherePoint> points = uniform_sphere_points(kKs2RandomPoints, seed + k);
        const auto circle = great_circle_points(obs.axis.value_or(Vec3{0, 0, 1}), kKs2EquatorPoints);
        points.insert(points.end(), circle.begin(), circle.end());
        ks2_bad += ks2_violations(a, u, points, kDefaultTol);
        ks2_points += points.size();
    }

    if (method == Integration::quadrature) {
        report.add("density normalization", 1.0, 1.0 + max_mass_error, kMassTol, max_mass_error <= kMassTol);
    } else {
        const auto needed = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(pairs)));
        report.add("pairs within 3 standard errors", needed, within_three_sigma, 0.0, within_three_sigma >= needed);
    }
    report.add("KS2 violations", 0, ks2_bad, 0.0, ks2_bad == 0);

    const json extra{{"pairs", pairs},
                     {"method", method == Integration::quadrature ? "quadrature" : "montecarlo"},
                     {"n", n},
                     {"max_ks1_delta", max_delta},
                     {"ks2_points", ks2_points}};
    emit(out, report, extra, as_json);
    return report.pass() ? kExitSuccess : kExitContrary;
}

int search(const std::string& path, bool as_json, std::ostream& out)
{
    const std::vector<SignConstraint> constraints = parse_constraint_lines(read_file(path));
    const SearchResult result = exhaustive_search(constraints);

    VerificationReport report;
    const std::uint64_t space = std::uint64_t{1} << result.variables.size();
    report.add("assignment space exhausted", space, result.searched, 0.0, result.searched == space);

    json assignments = json::array();
    std::ostringstream text;
    text << result.satisfying.size() << " of " << result.searched << " assignments satisfy " << constraints.size()
         << " constraints\n";
    for (const auto& assignment : result.satisfying) {
        json a = json::object();
        for (std::size_t i = 0; i < result.variables.size(); ++i) {
            a[result.variables[i]] = assignment[i];
            text << (i ? " " : "  ") << result.variables[i] << "=" << (assignment[i] > 0 ? "+1" : "-1");
        }
        text << "\n";
        assignments.push_back(std::move(a));
    }
    const json extra{{"variables", result.variables},
                     {"searched", result.searched},
                     {"satisfying", result.satisfying.size()},
                     {"assignments", assignments}};
    emit(out, report, extra, as_json, text.str());
    return kExitSuccess;
}

} // namespace

std::vector<SignConstraint> parse_constraint_lines(std::string_view text)
{
    std::vector<SignConstraint> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t stop = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, stop - start);
        ++line_no;
        start = stop + 1;
        line = line.substr(0, line.find('#'));

        std::vector<std::string> vars;
        std::size_t i = 0;
        auto col = [&] { return i + 1; };
        auto skip = [&] {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
            }
        };
        skip();
        if (i == line.size()) {
            continue;
        }
        while (i < line.size() && line[i] != '=') {
            if (!(std::isalpha(static_cast<unsigned char>(line[i])) || line[i] == '_')) {
                throw SyntaxError(line_no, col(), "expected a variable name");
            }
            const std::size_t b = i;
            while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) {
                ++i;
            }
            vars.emplace_back(line.substr(b, i - b));
            skip();
        }
        if (i == line.size()) {
            throw SyntaxError(line_no, col(), "expected '='");
        }
        if (vars.empty()) {
            throw SyntaxError(line_no, col(), "no variables before '='");
        }
        ++i;
        skip();
        const std::size_t value_col = col();
        std::string value;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            value += line[i++];
        }
        skip();
        if (i != line.size()) {
            throw SyntaxError(line_no, col(), "unexpected text after the product value");
        }
        int product = 0;
        if (value == "+1" || value == "1") {
            product = 1;
        } else if (value == "-1") {
            product = -1;
        } else {
            throw SyntaxError(line_no, value_col, "product must be +1 or -1");
        }
        try {
            out.push_back(make_constraint(std::move(vars), product, "line " + std::to_string(line_no)));
        } catch (const InvalidArgument& e) {
            throw SyntaxError(line_no, 1, e.what());
        }
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Kochen-Specker contextuality checker"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);

    double tol = kDefaultTol;
    bool as_json = false;

    auto* ghz = app.add_subcommand("ghz-verify", "verify the GHZ premises and search for value assignments");
    ghz->add_option("--tol", tol, "numerical tolerance")->check(CLI::NonNegativeNumber);
    ghz->add_flag("--json", as_json, "emit a JSON report");

    std::string spec_path;
    std::optional<std::size_t> state_index;
    auto* embed = app.add_subcommand("trivial-embed", "check the product-of-spectra embedding of a registry");
    embed->add_option("--spec", spec_path, "registry spec (JSON)")->required();
    embed->add_option("--state-index", state_index, "use only the K-th state (0-based)");
    embed->add_option("--tol", tol, "numerical tolerance")->check(CLI::NonNegativeNumber);
    embed->add_flag("--json", as_json, "emit a JSON report");

    std::size_t pairs = 100;
    Integration method = Integration::quadrature;
    std::optional<std::size_t> nodes;
    std::uint64_t seed = kDefaultSeed;
    const std::map<std::string, Integration> methods{{"quadrature", Integration::quadrature},
                                                      {"montecarlo", Integration::montecarlo}};
    auto* sphere = app.add_subcommand("sphere-verify", "check the qubit sphere model against the Born rule");
    sphere->add_option("--pairs", pairs, "random (observable, state) pairs")->check(CLI::PositiveNumber);
    sphere->add_option("--method", method, "quadrature or montecarlo")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    sphere->add_option("--n", nodes, "quadrature nodes per axis, or Monte Carlo samples")
        ->check(CLI::PositiveNumber);
    sphere->add_option("--seed", seed, "random seed");
    sphere->add_flag("--json", as_json, "emit a JSON report");

    std::string constraints_path;
    auto* srch = app.add_subcommand("search", "exhaustive search over +/-1 assignments");
    srch->add_option("--constraints", constraints_path, "constraint file")->required();
    srch->add_flag("--json", as_json, "emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (ghz->parsed()) {
            return ghz_verify(tol, as_json, out);
        }
        if (embed->parsed()) {
            return trivial_embed(spec_path, state_index, tol, as_json, out, err);
        }
        if (sphere->parsed()) {
            const std::size_t n =
                nodes.value_or(method == Integration::quadrature ? kQuadratureNodes : kMonteCarloSamples);
            return sphere_verify(pairs, method, n, seed, as_json, out);
        }
        return search(constraints_path, as_json, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace ks
