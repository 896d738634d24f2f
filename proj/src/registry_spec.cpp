#include "ks/registry_spec.hpp"

#include "ks/error.hpp"
#include "ks/operator_expr.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace ks {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void spec_error(const std::string& where, const std::string& what)
{
    throw InvalidArgument("registry spec, " + where + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        spec_error(where, std::string("missing \"") + key + "\"");
    }
    return obj.at(key);
}

std::string string_at(const Json& obj, const char* key, const std::string& where)
{
    const Json& v = member(obj, key, where);
    if (!v.is_string()) {
        spec_error(where + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& v, const std::string& where)
{
    if (!v.is_array()) {
        spec_error(where, "expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            spec_error(where, "expected an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<RegistrySpec::Composite> composites(const Json& doc, const char* section, const char* operands)
{
    std::vector<RegistrySpec::Composite> out;
    if (!doc.contains(section)) {
        return out;
    }
    const Json& list = doc.at(section);
    if (!list.is_array()) {
        spec_error(section, "expected an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = std::string(section) + "[" + std::to_string(i) + "]";
        const Json& ops = member(list[i], operands, where);
        if (!ops.is_array() || ops.size() != 2 || !ops[0].is_string() || !ops[1].is_string()) {
            spec_error(where + "." + operands, "expected two observable ids");
        }
        out.push_back({string_at(list[i], "id", where), ops[0].get<std::string>(), ops[1].get<std::string>()});
    }
    return out;
}

RealFunction relation_function(const Json& rel, const std::string& where)
{
    const bool has_poly = rel.contains("poly");
    const bool has_table = rel.contains("table");
    if (has_poly == has_table) {
        spec_error(where, "give exactly one of \"poly\" or \"table\"");
    }
    if (has_poly) {
        const auto coeffs = numbers(rel.at("poly"), where + ".poly");
        if (coeffs.empty()) {
            spec_error(where + ".poly", "needs at least one coefficient");
        }
        return RealFunction::polynomial(coeffs);
    }
    const Json& table = rel.at("table");
    if (!table.is_array()) {
        spec_error(where + ".table", "expected an array of [x, y] pairs");
    }
    RealFunction::Table entries;
    for (const auto& pair : table) {
        const auto xy = numbers(pair, where + ".table");
        if (xy.size() != 2) {
            spec_error(where + ".table", "expected an array of [x, y] pairs");
        }
        entries.emplace_back(xy[0], xy[1]);
    }
    return RealFunction::table(std::move(entries));
}

} // namespace

RegistrySpec parse_registry_spec(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        spec_error("document", e.what());
    }
    if (!doc.is_object()) {
        spec_error("document", "expected a JSON object");
    }

    RegistrySpec spec;
    const Json& sites = member(doc, "sites", "document");
    if (!sites.is_number_integer() || sites.get<long long>() < 1 || sites.get<long long>() > 12) {
        spec_error("sites", "expected an integer in [1, 12]");
    }
    spec.sites = sites.get<std::size_t>();

    const Json& observables = member(doc, "observables", "document");
    if (!observables.is_object()) {
        spec_error("observables", "expected an object of id: expression");
    }
    for (const auto& [id, expr] : observables.items()) {
        const std::string where = "observables." + id;
        if (!expr.is_string()) {
            spec_error(where, "expected an expression string");
        }
        try {
            parse(expr.get<std::string>(), spec.sites);
        } catch (const SyntaxError& e) {
            spec_error(where, e.what());
        } catch (const SiteOutOfRange& e) {
            spec_error(where, e.what());
        }
        spec.observables.push_back({id, expr.get<std::string>()});
    }

    spec.products = composites(doc, "products", "factors");
    spec.sums = composites(doc, "sums", "terms");

    if (doc.contains("relations")) {
        const Json& rels = doc.at("relations");
        if (!rels.is_array()) {
            spec_error("relations", "expected an array");
        }
        for (std::size_t i = 0; i < rels.size(); ++i) {
            const std::string where = "relations[" + std::to_string(i) + "]";
            spec.relations.push_back({string_at(rels[i], "source", where), string_at(rels[i], "target", where),
                                      relation_function(rels[i], where)});
        }
    }

    if (doc.contains("states")) {
        const Json& states = doc.at("states");
        if (!states.is_object()) {
            spec_error("states", "expected an object of name: {re, im}");
        }
        const std::size_t dim = std::size_t{1} << spec.sites;
        for (const auto& [name, amp] : states.items()) {
            const std::string where = "states." + name;
            const auto re = numbers(member(amp, "re", where), where + ".re");
            const auto im = amp.contains("im") ? numbers(amp.at("im"), where + ".im") : std::vector<double>(re.size());
            if (re.size() != dim || im.size() != dim) {
                spec_error(where, "expected " + std::to_string(dim) + " amplitudes");
            }
            ComplexVector v(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                v[k] = Complex(re[k], im[k]);
            }
            try {
                spec.states.emplace_back(name, PureState::normalized(std::move(v)));
            } catch (const NotNormalized&) {
                spec_error(where, "zero state vector");
            }
        }
    }
    return spec;
}

RegistrySpec load_registry_spec(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot read registry spec " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_registry_spec(buf.str());
}

ObservableRegistry build_registry(const RegistrySpec& spec, double tol)
{
    ObservableRegistry registry(tol);
    for (const auto& obs : spec.observables) {
        registry.add(obs.id, evaluate(parse(obs.expression, spec.sites), spec.sites));
    }
    for (const auto& p : spec.products) {
        if (!registry.contains(p.id)) {
            registry.add(p.id, registry.at(p.lhs).matrix * registry.at(p.rhs).matrix);
        }
    }
    for (const auto& s : spec.sums) {
        if (!registry.contains(s.id)) {
            registry.add(s.id, registry.at(s.lhs).matrix + registry.at(s.rhs).matrix);
        }
    }
    for (const auto& rel : spec.relations) {
        registry.declare_relation(rel.source, rel.u, rel.target);
    }
    return registry;
}

} // namespace ks
