#pragma once

#include "ks/matrix.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ks {

/// Eigenvalues closer than this are merged into one spectral branch.
inline constexpr double kEigenvalueCluster = 1e-8;
/// Two function values u(x), u(y) are the same outcome when closer than this.
inline constexpr double kValueCollision = 1e-8;

/// A real function of one real variable, either closed-form or a finite table.
class RealFunction {
public:
    using Evaluator = std::function<double(double)>;
    using Table = std::vector<std::pair<double, double>>;

    static RealFunction closed_form(Evaluator f, std::string name = "u");
    static RealFunction identity();
    /// c[0] + c[1] x + c[2] x^2 + ...
    static RealFunction polynomial(std::vector<double> coefficients);
    /// Keys match within kEigenvalueCluster.
    static RealFunction table(Table entries);
    static RealFunction product(const RealFunction& f, const RealFunction& g);
    static RealFunction sum(const RealFunction& f, const RealFunction& g);

    /// Throws DomainError outside the domain of a table-backed function.
    double operator()(double x) const;
    bool defined_at(double x) const;
    bool is_table() const noexcept { return table_.has_value(); }
    const std::optional<Table>& table_entries() const noexcept { return table_; }
    const std::string& name() const noexcept { return name_; }

private:
    RealFunction(Evaluator f, std::function<bool(double)> domain, std::optional<Table> table, std::string name);

    Evaluator eval_;
    std::function<bool(double)> domain_;
    std::optional<Table> table_;
    std::string name_;
};

struct SpectralBranch {
    double eigenvalue;
    ComplexMatrix projector;
};

/// Largest deviations from the spectral-measure axioms, max-norm.
struct SpectralResiduals {
    double idempotence = 0.0;   // max_i ||P_i^2 - P_i||
    double hermiticity = 0.0;   // max_i ||P_i - P_i^dagger||
    double orthogonality = 0.0; // max_{i != j} ||P_i P_j||
    double completeness = 0.0;  // ||sum_i P_i - 1||

    double worst() const;
};

/// Distinct eigenvalues (ascending) paired with orthogonal projectors.
class SpectralMeasure {
public:
    /// Branches must be nonempty, strictly ascending, and of one dimension.
    SpectralMeasure(std::vector<SpectralBranch> branches, double tol);

    const std::vector<SpectralBranch>& branches() const noexcept { return branches_; }
    std::size_t dim() const noexcept { return dim_; }
    double tol() const noexcept { return tol_; }

    std::vector<double> eigenvalues() const;
    /// Projector of the branch whose eigenvalue is within kEigenvalueCluster of lambda.
    std::optional<ComplexMatrix> projector_for(double lambda) const;

    /// sum_i lambda_i P_i
    ComplexMatrix reconstruct() const;
    SpectralResiduals residuals() const;

private:
    std::vector<SpectralBranch> branches_;
    std::size_t dim_ = 0;
    double tol_ = 0.0;
};

/// Throws NotHermitian if ||a - a^dagger||_max > tol, NoConvergence from the solver.
SpectralMeasure eigendecompose(const ComplexMatrix& a, double tol);

/// u(A) = sum_i u(lambda_i) P_i. Throws DomainError.
ComplexMatrix apply_function(const SpectralMeasure& e, const RealFunction& u);

/// E^{u(A)}(mu) == sum { P_i : u(lambda_i) = mu } for every eigenvalue mu of u(A).
bool pushforward_check(const SpectralMeasure& e, const RealFunction& u, double tol);

/// Groups the branches of e by their image under u: (mu, sum of projectors), mu ascending.
std::vector<SpectralBranch> pushforward_branches(const SpectralMeasure& e, const RealFunction& u);

/// A single Hermitian generator for a commuting family, with ops[j] = functions[j](generator).
struct CommonGenerator {
    ComplexMatrix generator;
    /// Generator eigenvalue on each joint eigenspace, ascending.
    std::vector<double> spectrum;
    std::vector<RealFunction> functions;
    /// Joint eigenspace projectors, ordered as the generator's ascending spectrum.
    std::vector<ComplexMatrix> joint_projectors;
    /// labels[k][j] is the eigenvalue of ops[j] on joint eigenspace k.
    std::vector<std::vector<double>> labels;
};

/// Joint diagonalization by recursive splitting. If ops[0] alone already
/// separates the joint eigenspaces it is returned as the generator;
/// otherwise generator = sum_k k * Pi_k. Throws NotHermitian, NotCommuting, DimMismatch.
CommonGenerator common_generator(const std::vector<ComplexMatrix>& ops, double tol);

} // namespace ks
