#include "ks/hv_embedding.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace ks {

namespace {

constexpr double kWeightSumTolerance = 1e-10;
constexpr double kWeightRangeSlack = 1e-12;

std::string format_value(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

bool support_point(const FiniteHVModel& model, std::size_t point)
{
    for (const auto& [id, w] : model.state_weights()) {
        if (w[point] > kSupportThreshold) {
            return true;
        }
    }
    return false;
}

void require_model_observable(const FiniteHVModel& model, const std::string& id)
{
    (void)model.values(id);
}

PointwiseResult check_pointwise(const FiniteHVModel& model, bool support_only,
                                const std::function<std::pair<double, double>(std::size_t)>& sides)
{
    PointwiseResult r;
    for (std::size_t p = 0; p < model.size(); ++p) {
        if (support_only && !support_point(model, p)) {
            continue;
        }
        ++r.points_checked;
        const auto [lhs, rhs] = sides(p);
        if (!(std::abs(lhs - rhs) <= kValueMatch)) {
            ++r.violations;
            if (!r.witness) {
                r.witness = p;
                r.witness_label = model.points()[p];
                r.witness_lhs = lhs;
                r.witness_rhs = rhs;
            }
        }
    }
    r.pass = r.violations == 0;
    return r;
}

void require_commuting_pair(const ObservableRegistry& registry, const std::string& id1, const std::string& id2,
                            double tol)
{
    if (!commutes(registry.at(id1).matrix, registry.at(id2).matrix, tol)) {
        throw NotCommuting(id1 + " and " + id2 + " do not commute");
    }
}

} // namespace

// ---------------------------------------------------------------------------
// ObservableRegistry

void ObservableRegistry::add(const std::string& id, const ComplexMatrix& matrix)
{
    if (contains(id)) {
        throw InvalidArgument("observable '" + id + "' registered twice");
    }
    if (!ids_.empty() && matrix.dim() != dim_) {
        throw DimMismatch("observable '" + id + "' has dim " + std::to_string(matrix.dim()) + ", registry has " +
                          std::to_string(dim_));
    }
    if (!is_hermitian(matrix, tol_)) {
        throw NotHermitian("observable '" + id + "' is not Hermitian");
    }
    entries_.emplace(id, RegisteredObservable{matrix, eigendecompose(matrix, tol_)});
    ids_.push_back(id);
    dim_ = matrix.dim();
}

void ObservableRegistry::declare_relation(const std::string& source, const RealFunction& u, const std::string& target)
{
    const auto& src = at(source);
    const auto& tgt = at(target);
    const double err = max_distance(apply_function(src.spectral, u), tgt.matrix);
    if (err > kRelationTolerance) {
        throw InvalidArgument("relation " + target + " = " + u.name() + "(" + source + ") fails by " +
                              format_value(err));
    }
    relations_.push_back({source, u, target});
}

const RegisteredObservable& ObservableRegistry::at(const std::string& id) const
{
    const auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw UnknownId("unknown observable '" + id + "'");
    }
    return it->second;
}

const FunctionRelation* ObservableRegistry::find_relation(const std::string& source, const std::string& target) const
{
    for (const auto& r : relations_) {
        if (r.source == source && r.target == target) {
            return &r;
        }
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// FiniteHVModel

FiniteHVModel::FiniteHVModel(std::vector<std::string> points, ValueMaps values, StateWeights states)
    : points_(std::move(points)), values_(std::move(values)), states_(std::move(states))
{
    for (const auto& [id, v] : values_) {
        if (v.size() != points_.size()) {
            throw InvalidArgument("value map '" + id + "' has " + std::to_string(v.size()) + " entries for " +
                                  std::to_string(points_.size()) + " points");
        }
    }
    for (const auto& [id, w] : states_) {
        if (w.size() != points_.size()) {
            throw InvalidArgument("state '" + id + "' has " + std::to_string(w.size()) + " weights for " +
                                  std::to_string(points_.size()) + " points");
        }
        double total = 0.0;
        for (double x : w) {
            if (x < -kWeightRangeSlack || x > 1.0 + kWeightRangeSlack) {
                throw InvalidArgument("state '" + id + "' has weight " + format_value(x) + " outside [0, 1]");
            }
            total += x;
        }
        if (std::abs(total - 1.0) > kWeightSumTolerance) {
            throw InvalidArgument("state '" + id + "' weights sum to " + format_value(total));
        }
    }
}

const std::vector<double>& FiniteHVModel::values(const std::string& observable) const
{
    const auto it = values_.find(observable);
    if (it == values_.end()) {
        throw UnknownId("model has no value map for '" + observable + "'");
    }
    return it->second;
}

const std::vector<double>& FiniteHVModel::weights(const std::string& state) const
{
    const auto it = states_.find(state);
    if (it == states_.end()) {
        throw UnknownId("model has no state '" + state + "'");
    }
    return it->second;
}

// ---------------------------------------------------------------------------
// Constructions

FiniteHVModel trivial_embedding(const ObservableRegistry& registry, const std::vector<PureState>& states,
                                std::size_t point_cap)
{
    std::vector<NamedState> named;
    for (std::size_t i = 0; i < states.size(); ++i) {
        named.emplace_back("psi" + std::to_string(i), states[i]);
    }
    return trivial_embedding(registry, named, point_cap);
}

FiniteHVModel trivial_embedding(const ObservableRegistry& registry, const std::vector<NamedState>& states,
                                std::size_t point_cap)
{
    const auto& ids = registry.ids();
    if (ids.empty()) {
        throw InvalidArgument("trivial_embedding needs a nonempty registry");
    }
    std::size_t count = 1;
    std::vector<std::vector<double>> spectra;
    for (const auto& id : ids) {
        spectra.push_back(registry.at(id).spectral.eigenvalues());
        const std::size_t k = spectra.back().size();
        if (count > point_cap / k) {
            throw SizeError("product of spectra exceeds " + std::to_string(point_cap) + " points");
        }
        count *= k;
    }

    // Born atoms per (state, observable).
    std::vector<std::vector<std::vector<double>>> born(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        for (const auto& id : ids) {
            const auto w = born_distribution(states[s].second, registry.at(id).spectral);
            std::vector<double> probs;
            for (const auto& a : w.atoms()) {
                probs.push_back(a.probability);
            }
            born[s].push_back(std::move(probs));
        }
    }

    std::vector<std::string> points;
    points.reserve(count);
    FiniteHVModel::ValueMaps values;
    for (const auto& id : ids) {
        values[id].reserve(count);
    }
    FiniteHVModel::StateWeights weights;
    for (const auto& s : states) {
        weights[s.first].reserve(count);
    }

    // Mixed-radix counter, last observable fastest.
    std::vector<std::size_t> digit(ids.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::string label;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const double v = spectra[k][digit[k]];
            values[ids[k]].push_back(v);
            label += (k ? "|" : "") + ids[k] + "=" + format_value(v);
        }
        points.push_back(std::move(label));
        for (std::size_t s = 0; s < states.size(); ++s) {
            double w = 1.0;
            for (std::size_t k = 0; k < ids.size(); ++k) {
                w *= born[s][k][digit[k]];
            }
            weights[states[s].first].push_back(w);
        }
        for (std::size_t k = ids.size(); k-- > 0;) {
            if (++digit[k] < spectra[k].size()) {
                break;
            }
            digit[k] = 0;
        }
    }
    return FiniteHVModel(std::move(points), std::move(values), std::move(weights));
}

FiniteHVModel generator_embedding(const ObservableRegistry& registry, const std::vector<std::string>& family,
                                  const std::vector<NamedState>& states)
{
    std::vector<ComplexMatrix> ops;
    for (const auto& id : family) {
        ops.push_back(registry.at(id).matrix);
    }
    const CommonGenerator g = common_generator(ops, registry.tol());

    std::vector<std::string> points;
    for (double key : g.spectrum) {
        points.push_back("A=" + format_value(key));
    }
    FiniteHVModel::ValueMaps values;
    for (std::size_t j = 0; j < family.size(); ++j) {
        auto& f = values[family[j]];
        for (double key : g.spectrum) {
            f.push_back(g.functions[j](key));
        }
    }
    FiniteHVModel::StateWeights weights;
    for (const auto& [name, psi] : states) {
        if (psi.dim() != registry.dim()) {
            throw DimMismatch("state '" + name + "' does not match the registry dimension");
        }
        auto& w = weights[name];
        for (const auto& projector : g.joint_projectors) {
            const ComplexVector pv = projector * std::span<const Complex>(psi.amplitudes());
            w.push_back(std::max(0.0, inner(psi.amplitudes(), pv).real()));
        }
    }
    return FiniteHVModel(std::move(points), std::move(values), std::move(weights));
}

// ---------------------------------------------------------------------------
// Checkers

Ks1Result ks1_report(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& observable,
                     const std::string& state, const PureState& psi, double tol)
{
    const auto& entry = registry.at(observable);
    const auto& f = model.values(observable);
    const auto& rho = model.weights(state);
    const BornDistribution w = born_distribution(psi, entry.spectral);

    Ks1Result r;
    r.quantum = w.atoms();
    double classical_mean = 0.0;
    for (const auto& atom : w.atoms()) {
        double pulled_back = 0.0;
        for (std::size_t p = 0; p < model.size(); ++p) {
            if (std::abs(f[p] - atom.eigenvalue) <= kValueMatch) {
                pulled_back += rho[p];
            }
        }
        r.classical.push_back({atom.eigenvalue, pulled_back});
        r.max_deviation = std::max(r.max_deviation, std::abs(pulled_back - atom.probability));
    }
    double matched = 0.0;
    for (const auto& c : r.classical) {
        matched += c.probability;
    }
    for (std::size_t p = 0; p < model.size(); ++p) {
        classical_mean += f[p] * rho[p];
    }
    r.unmatched_weight = std::max(0.0, 1.0 - matched);
    r.expectation_deviation = std::abs(classical_mean - expectation(psi, entry.matrix, registry.tol()));

    double scale = 1.0;
    for (const auto& atom : w.atoms()) {
        scale += std::abs(atom.eigenvalue);
    }
    r.pass = r.max_deviation <= tol && r.unmatched_weight <= tol && r.expectation_deviation <= tol * scale;
    return r;
}

bool check_ks1(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& observable,
               const std::string& state, const PureState& psi, double tol)
{
    return ks1_report(model, registry, observable, state, psi, tol).pass;
}

PointwiseResult ks2_report(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& source,
                           const std::string& target, const RealFunction& u)
{
    (void)registry.at(source);
    (void)registry.at(target);
    if (registry.find_relation(source, target) == nullptr) {
        throw UndeclaredRelation("no declared relation " + target + " = u(" + source + ")");
    }
    const auto& fs = model.values(source);
    const auto& ft = model.values(target);
    return check_pointwise(model, false, [&](std::size_t p) { return std::pair{ft[p], u(fs[p])}; });
}

bool check_ks2(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& source,
               const std::string& target, const RealFunction& u)
{
    return ks2_report(model, registry, source, target, u).pass;
}

PointwiseResult product_rule_report(const FiniteHVModel& model, const ObservableRegistry& registry,
                                    const std::string& id1, const std::string& id2, const std::string& id_product,
                                    double tol)
{
    require_commuting_pair(registry, id1, id2, tol);
    const ComplexMatrix expected = registry.at(id1).matrix * registry.at(id2).matrix;
    if (max_distance(expected, registry.at(id_product).matrix) > tol) {
        throw InvalidArgument("'" + id_product + "' is not registered as " + id1 + " * " + id2);
    }
    const auto& f1 = model.values(id1);
    const auto& f2 = model.values(id2);
    const auto& fp = model.values(id_product);
    return check_pointwise(model, true, [&](std::size_t p) { return std::pair{fp[p], f1[p] * f2[p]}; });
}

bool check_product_rule(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& id1,
                        const std::string& id2, const std::string& id_product, double tol)
{
    return product_rule_report(model, registry, id1, id2, id_product, tol).pass;
}

PointwiseResult sum_rule_report(const FiniteHVModel& model, const ObservableRegistry& registry,
                                const std::string& id1, const std::string& id2, const std::string& id_sum, double tol)
{
    require_commuting_pair(registry, id1, id2, tol);
    const ComplexMatrix expected = registry.at(id1).matrix + registry.at(id2).matrix;
    if (max_distance(expected, registry.at(id_sum).matrix) > tol) {
        throw InvalidArgument("'" + id_sum + "' is not registered as " + id1 + " + " + id2);
    }
    const auto& f1 = model.values(id1);
    const auto& f2 = model.values(id2);
    const auto& fs = model.values(id_sum);
    return check_pointwise(model, true, [&](std::size_t p) { return std::pair{fs[p], f1[p] + f2[p]}; });
}

bool check_sum_rule(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& id1,
                    const std::string& id2, const std::string& id_sum, double tol)
{
    return sum_rule_report(model, registry, id1, id2, id_sum, tol).pass;
}

double classical_expectation(const FiniteHVModel& model, const std::string& observable, const std::string& state)
{
    const auto& f = model.values(observable);
    const auto& rho = model.weights(state);
    double m = 0.0;
    for (std::size_t p = 0; p < model.size(); ++p) {
        m += f[p] * rho[p];
    }
    return m;
}

double relation_probability(const FiniteHVModel& model, const std::string& source, const std::string& target,
                            const RealFunction& u, const std::string& state)
{
    require_model_observable(model, source);
    const auto& fs = model.values(source);
    const auto& ft = model.values(target);
    const auto& rho = model.weights(state);
    double prob = 0.0;
    for (std::size_t p = 0; p < model.size(); ++p) {
        if (std::abs(ft[p] - u(fs[p])) <= kValueMatch) {
            prob += rho[p];
        }
    }
    return prob;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json model_to_json(const FiniteHVModel& model)
{
    nlohmann::json doc;
    doc["points"] = model.points();
    doc["values"] = nlohmann::json::object();
    for (const auto& [id, v] : model.value_maps()) {
        doc["values"][id] = v;
    }
    doc["states"] = nlohmann::json::object();
    for (const auto& [id, w] : model.state_weights()) {
        doc["states"][id] = w;
    }
    return doc;
}

FiniteHVModel model_from_json(const nlohmann::json& doc)
{
    try {
        if (!doc.is_object() || !doc.contains("points") || !doc.contains("values") || !doc.contains("states")) {
            throw InvalidArgument("model document needs \"points\", \"values\" and \"states\"");
        }
        std::vector<std::string> points;
        for (const auto& p : doc.at("points")) {
            points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
        }
        FiniteHVModel::ValueMaps values;
        for (const auto& [id, v] : doc.at("values").items()) {
            values[id] = v.get<std::vector<double>>();
        }
        FiniteHVModel::StateWeights states;
        for (const auto& [id, w] : doc.at("states").items()) {
            states[id] = w.get<std::vector<double>>();
        }
        return FiniteHVModel(std::move(points), std::move(values), std::move(states));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed model document: ") + e.what());
    }
}

} // namespace ks
