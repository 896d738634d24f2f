#pragma once

#include "ks/matrix.hpp"
#include "ks/quantum_state.hpp"
#include "ks/spectral.hpp"

#include "json.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ks {

/// Value-map entries are matched against eigenvalues within this tolerance.
inline constexpr double kValueMatch = 1e-8;
/// A declared relation target = u(source) must hold to this accuracy.
inline constexpr double kRelationTolerance = 1e-8;
/// Points at or below this weight count as outside the support.
inline constexpr double kSupportThreshold = 1e-12;
inline constexpr std::size_t kDefaultPointCap = 1'000'000;

struct RegisteredObservable {
    ComplexMatrix matrix;
    SpectralMeasure spectral;
};

/// target = u(source)
struct FunctionRelation {
    std::string source;
    RealFunction u;
    std::string target;
};

/// A finite set of observables on one Hilbert space, plus declared functional relations.
class ObservableRegistry {
public:
    explicit ObservableRegistry(double tol = 1e-10) : tol_(tol) {}

    /// Throws NotHermitian, DimMismatch, InvalidArgument on a duplicate id.
    void add(const std::string& id, const ComplexMatrix& matrix);
    /// Throws UnknownId, InvalidArgument if ||u(A_source) - A_target||_max > kRelationTolerance.
    void declare_relation(const std::string& source, const RealFunction& u, const std::string& target);

    bool contains(const std::string& id) const { return entries_.count(id) != 0; }
    const RegisteredObservable& at(const std::string& id) const;
    /// Insertion order.
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<FunctionRelation>& relations() const noexcept { return relations_; }
    const FunctionRelation* find_relation(const std::string& source, const std::string& target) const;
    std::size_t dim() const noexcept { return dim_; }
    double tol() const noexcept { return tol_; }

private:
    double tol_;
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::map<std::string, RegisteredObservable> entries_;
    std::vector<FunctionRelation> relations_;
};

/// Finite sample space with value maps f_A and state weights rho_psi.
class FiniteHVModel {
public:
    using ValueMaps = std::map<std::string, std::vector<double>>;
    using StateWeights = std::map<std::string, std::vector<double>>;

    /// Throws InvalidArgument unless every value map is total and every
    /// state's weights lie in [0, 1] and sum to 1 within 1e-10.
    FiniteHVModel(std::vector<std::string> points, ValueMaps values, StateWeights states);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<std::string>& points() const noexcept { return points_; }
    const ValueMaps& value_maps() const noexcept { return values_; }
    const StateWeights& state_weights() const noexcept { return states_; }

    /// Throw UnknownId.
    const std::vector<double>& values(const std::string& observable) const;
    const std::vector<double>& weights(const std::string& state) const;

private:
    std::vector<std::string> points_;
    ValueMaps values_;
    StateWeights states_;
};

using NamedState = std::pair<std::string, PureState>;

/// Product-of-spectra sample space, coordinate projections, product of Born measures.
/// States are named "psi0", "psi1", ... Throws SizeError above `point_cap`.
FiniteHVModel trivial_embedding(const ObservableRegistry& registry, const std::vector<PureState>& states,
                                std::size_t point_cap = kDefaultPointCap);
FiniteHVModel trivial_embedding(const ObservableRegistry& registry, const std::vector<NamedState>& states,
                                std::size_t point_cap = kDefaultPointCap);

/// A model whose value maps all factor through one common generator of the
/// commuting family: f_j = u_j(f_A). Points are the joint eigenspaces.
FiniteHVModel generator_embedding(const ObservableRegistry& registry, const std::vector<std::string>& family,
                                  const std::vector<NamedState>& states);

struct Ks1Result {
    bool pass = false;
    /// max over eigenvalues of |rho(f^-1(lambda)) - w(lambda)|
    double max_deviation = 0.0;
    /// |sum f rho - <psi, A psi>|
    double expectation_deviation = 0.0;
    /// Weight on points whose value matches no eigenvalue.
    double unmatched_weight = 0.0;
    std::vector<BornAtom> classical;
    std::vector<BornAtom> quantum;
};

Ks1Result ks1_report(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& observable,
                     const std::string& state, const PureState& psi, double tol);
bool check_ks1(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& observable,
               const std::string& state, const PureState& psi, double tol);

/// Outcome of a pointwise identity check; the witness is the first violating point.
struct PointwiseResult {
    bool pass = true;
    std::size_t points_checked = 0;
    std::size_t violations = 0;
    std::optional<std::size_t> witness;
    std::string witness_label;
    double witness_lhs = 0.0;
    double witness_rhs = 0.0;
};

/// f_target(w) = u(f_source(w)) at every point. Throws UnknownId, UndeclaredRelation.
PointwiseResult ks2_report(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& source,
                           const std::string& target, const RealFunction& u);
bool check_ks2(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& source,
               const std::string& target, const RealFunction& u);

/// f_{A1 A2} = f_{A1} f_{A2} on the support. Throws NotCommuting, UnknownId,
/// InvalidArgument if the product id is not registered with A1 A2.
PointwiseResult product_rule_report(const FiniteHVModel& model, const ObservableRegistry& registry,
                                    const std::string& id1, const std::string& id2, const std::string& id_product,
                                    double tol);
bool check_product_rule(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& id1,
                        const std::string& id2, const std::string& id_product, double tol);

/// f_{A1 + A2} = f_{A1} + f_{A2} on the support.
PointwiseResult sum_rule_report(const FiniteHVModel& model, const ObservableRegistry& registry,
                                const std::string& id1, const std::string& id2, const std::string& id_sum, double tol);
bool check_sum_rule(const FiniteHVModel& model, const ObservableRegistry& registry, const std::string& id1,
                    const std::string& id2, const std::string& id_sum, double tol);

/// sum_w f_A(w) rho(w). Throws UnknownId.
double classical_expectation(const FiniteHVModel& model, const std::string& observable, const std::string& state);

/// rho({w : f_target(w) = u(f_source(w))})
double relation_probability(const FiniteHVModel& model, const std::string& source, const std::string& target,
                            const RealFunction& u, const std::string& state);

/// {"points": [...], "values": {id: [...]}, "states": {id: [...]}}
nlohmann::json model_to_json(const FiniteHVModel& model);
/// Throws InvalidArgument on schema violations.
FiniteHVModel model_from_json(const nlohmann::json& doc);

} // namespace ks
