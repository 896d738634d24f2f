#include "ks/spectral.hpp"

#include "ks/eigen.hpp"
#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ks {

namespace {

std::string format_value(double x)
{
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Consecutive values closer than gap fall into one cluster; returns index ranges.
std::vector<std::pair<std::size_t, std::size_t>> cluster_sorted(const std::vector<double>& sorted, double gap)
{
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted[i] - sorted[i - 1] > gap) {
            ranges.emplace_back(begin, i);
            begin = i;
        }
    }
    return ranges;
}

double mean_of(const std::vector<double>& v, std::pair<std::size_t, std::size_t> range)
{
    double s = 0.0;
    for (std::size_t i = range.first; i < range.second; ++i) {
        s += v[i];
    }
    return s / static_cast<double>(range.second - range.first);
}

} // namespace

// ---------------------------------------------------------------------------
// RealFunction

RealFunction::RealFunction(Evaluator f, std::function<bool(double)> domain, std::optional<Table> table,
                           std::string name)
    : eval_(std::move(f)), domain_(std::move(domain)), table_(std::move(table)), name_(std::move(name))
{
}

RealFunction RealFunction::closed_form(Evaluator f, std::string name)
{
    return RealFunction(std::move(f), [](double) { return true; }, std::nullopt, std::move(name));
}

RealFunction RealFunction::identity()
{
    return closed_form([](double x) { return x; }, "id");
}

RealFunction RealFunction::polynomial(std::vector<double> coefficients)
{
    std::string name = "poly(";
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        name += (i ? "," : "") + format_value(coefficients[i]);
    }
    name += ")";
    return closed_form(
        [c = std::move(coefficients)](double x) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) {
                acc = acc * x + *it;
            }
            return acc;
        },
        std::move(name));
}

RealFunction RealFunction::table(Table entries)
{
    auto find = [](const Table& t, double x) -> const std::pair<double, double>* {
        for (const auto& e : t) {
            if (std::abs(e.first - x) <= kEigenvalueCluster) {
                return &e;
            }
        }
        return nullptr;
    };
    std::string name = "table{";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        name += (i ? "," : "") + format_value(entries[i].first) + "->" + format_value(entries[i].second);
    }
    name += "}";
    Evaluator eval = [entries, find](double x) {
        if (const auto* e = find(entries, x)) {
            return e->second;
        }
        throw DomainError("table-backed function undefined at " + format_value(x));
    };
    auto domain = [entries, find](double x) { return find(entries, x) != nullptr; };
    return RealFunction(std::move(eval), std::move(domain), std::move(entries), std::move(name));
}

RealFunction RealFunction::product(const RealFunction& f, const RealFunction& g)
{
    return RealFunction([f, g](double x) { return f(x) * g(x); },
                        [f, g](double x) { return f.defined_at(x) && g.defined_at(x); }, std::nullopt,
                        "(" + f.name() + ")*(" + g.name() + ")");
}

RealFunction RealFunction::sum(const RealFunction& f, const RealFunction& g)
{
    return RealFunction([f, g](double x) { return f(x) + g(x); },
                        [f, g](double x) { return f.defined_at(x) && g.defined_at(x); }, std::nullopt,
                        "(" + f.name() + ")+(" + g.name() + ")");
}

double RealFunction::operator()(double x) const
{
    return eval_(x);
}

bool RealFunction::defined_at(double x) const
{
    return domain_(x);
}

// ---------------------------------------------------------------------------
// SpectralMeasure

double SpectralResiduals::worst() const
{
    return std::max({idempotence, hermiticity, orthogonality, completeness});
}

SpectralMeasure::SpectralMeasure(std::vector<SpectralBranch> branches, double tol)
    : branches_(std::move(branches)), tol_(tol)
{
    if (branches_.empty()) {
        throw InvalidArgument("spectral measure needs at least one branch");
    }
    dim_ = branches_.front().projector.dim();
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        if (branches_[i].projector.dim() != dim_) {
            throw DimMismatch("spectral branches of different dimension");
        }
        if (i > 0 && !(branches_[i].eigenvalue > branches_[i - 1].eigenvalue)) {
            throw InvalidArgument("spectral branches must be strictly ascending");
        }
    }
}

std::vector<double> SpectralMeasure::eigenvalues() const
{
    std::vector<double> out;
    out.reserve(branches_.size());
    for (const auto& b : branches_) {
        out.push_back(b.eigenvalue);
    }
    return out;
}

std::optional<ComplexMatrix> SpectralMeasure::projector_for(double lambda) const
{
    for (const auto& b : branches_) {
        if (std::abs(b.eigenvalue - lambda) <= kEigenvalueCluster) {
            return b.projector;
        }
    }
    return std::nullopt;
}

ComplexMatrix SpectralMeasure::reconstruct() const
{
    ComplexMatrix sum(dim_);
    for (const auto& b : branches_) {
        sum += b.eigenvalue * b.projector;
    }
    return sum;
}

SpectralResiduals SpectralMeasure::residuals() const
{
    SpectralResiduals r;
    ComplexMatrix total(dim_);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        const auto& p = branches_[i].projector;
        r.idempotence = std::max(r.idempotence, max_distance(p * p, p));
        r.hermiticity = std::max(r.hermiticity, max_distance(p, p.adjoint()));
        for (std::size_t j = i + 1; j < branches_.size(); ++j) {
            r.orthogonality = std::max(r.orthogonality, max_norm(p * branches_[j].projector));
        }
        total += p;
    }
    r.completeness = max_distance(total, ComplexMatrix::identity(dim_));
    return r;
}

// ---------------------------------------------------------------------------
// Operations

SpectralMeasure eigendecompose(const ComplexMatrix& a, double tol)
{
    if (a.dim() == 0) {
        throw InvalidArgument("cannot decompose an empty matrix");
    }
    if (!is_hermitian(a, tol)) {
        throw NotHermitian("eigendecompose: matrix is not Hermitian within " + format_value(tol));
    }
    const HermitianEigen eig = jacobi_eigen(a);

    std::vector<SpectralBranch> branches;
    for (const auto& range : cluster_sorted(eig.values, kEigenvalueCluster)) {
        ComplexMatrix projector(a.dim());
        for (std::size_t k = range.first; k < range.second; ++k) {
            projector += ComplexMatrix::outer(eig.vectors[k], eig.vectors[k]);
        }
        branches.push_back({mean_of(eig.values, range), std::move(projector)});
    }
    return SpectralMeasure(std::move(branches), tol);
}

ComplexMatrix apply_function(const SpectralMeasure& e, const RealFunction& u)
{
    ComplexMatrix out(e.dim());
    for (const auto& b : e.branches()) {
        if (!u.defined_at(b.eigenvalue)) {
            throw DomainError(u.name() + " is undefined at eigenvalue " + format_value(b.eigenvalue));
        }
        out += u(b.eigenvalue) * b.projector;
    }
    return out;
}

std::vector<SpectralBranch> pushforward_branches(const SpectralMeasure& e, const RealFunction& u)
{
    std::vector<std::pair<double, std::size_t>> images;
    for (std::size_t i = 0; i < e.branches().size(); ++i) {
        const double lambda = e.branches()[i].eigenvalue;
        if (!u.defined_at(lambda)) {
            throw DomainError(u.name() + " is undefined at eigenvalue " + format_value(lambda));
        }
        images.emplace_back(u(lambda), i);
    }
    std::sort(images.begin(), images.end());

    std::vector<double> values;
    for (const auto& im : images) {
        values.push_back(im.first);
    }
    std::vector<SpectralBranch> out;
    for (const auto& range : cluster_sorted(values, kValueCollision)) {
        ComplexMatrix projector(e.dim());
        for (std::size_t k = range.first; k < range.second; ++k) {
            projector += e.branches()[images[k].second].projector;
        }
        out.push_back({mean_of(values, range), std::move(projector)});
    }
    return out;
}

bool pushforward_check(const SpectralMeasure& e, const RealFunction& u, double tol)
{
    const auto expected = pushforward_branches(e, u);
    const SpectralMeasure image = eigendecompose(apply_function(e, u), tol);
    if (image.branches().size() != expected.size()) {
        return false;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& got = image.branches()[i];
        if (std::abs(got.eigenvalue - expected[i].eigenvalue) > kValueCollision) {
            return false;
        }
        if (max_distance(got.projector, expected[i].projector) > tol) {
            return false;
        }
    }
    return true;
}

CommonGenerator common_generator(const std::vector<ComplexMatrix>& ops, double tol)
{
    if (ops.empty()) {
        throw InvalidArgument("common_generator needs at least one operator");
    }
    const std::size_t d = ops.front().dim();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].dim() != d) {
            throw DimMismatch("common_generator: operators of different dimension");
        }
        if (!is_hermitian(ops[i], tol)) {
            throw NotHermitian("common_generator: operator " + std::to_string(i) + " is not Hermitian");
        }
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            if (!commutes(ops[i], ops[j], tol)) {
                throw NotCommuting("common_generator: operators " + std::to_string(i) + " and " +
                                   std::to_string(j) + " do not commute");
            }
        }
    }

    struct Subspace {
        std::vector<ComplexVector> basis;
        std::vector<double> label;
    };
    std::vector<Subspace> spaces(1);
    for (std::size_t i = 0; i < d; ++i) {
        ComplexVector e(d);
        e[i] = 1.0;
        spaces[0].basis.push_back(std::move(e));
    }

    for (const auto& op : ops) {
        std::vector<Subspace> refined;
        for (const auto& space : spaces) {
            const std::size_t m = space.basis.size();
            std::vector<ComplexVector> images;
            images.reserve(m);
            for (const auto& v : space.basis) {
                images.push_back(op * v);
            }
            ComplexMatrix compression(m);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < m; ++c) {
                    compression(r, c) = inner(space.basis[r], images[c]);
                }
            }
            const HermitianEigen eig = jacobi_eigen(compression);
            for (const auto& range : cluster_sorted(eig.values, kEigenvalueCluster)) {
                Subspace child;
                child.label = space.label;
                child.label.push_back(mean_of(eig.values, range));
                for (std::size_t k = range.first; k < range.second; ++k) {
                    ComplexVector w(d);
                    for (std::size_t r = 0; r < m; ++r) {
                        for (std::size_t i = 0; i < d; ++i) {
                            w[i] += eig.vectors[k][r] * space.basis[r][i];
                        }
                    }
                    child.basis.push_back(std::move(w));
                }
                refined.push_back(std::move(child));
            }
        }
        spaces = std::move(refined);
    }

    CommonGenerator out;
    for (const auto& space : spaces) {
        ComplexMatrix projector(d);
        for (const auto& v : space.basis) {
            projector += ComplexMatrix::outer(v, v);
        }
        out.joint_projectors.push_back(std::move(projector));
        out.labels.push_back(space.label);
    }

    // Labels come out lexicographically ascending, so if the first operator's
    // eigenvalues are distinct across joint eigenspaces they are also ascending.
    bool first_separates = true;
    for (std::size_t k = 1; k < spaces.size(); ++k) {
        if (spaces[k].label[0] - spaces[k - 1].label[0] <= kEigenvalueCluster) {
            first_separates = false;
        }
    }

    std::vector<double> keys;
    for (std::size_t k = 0; k < spaces.size(); ++k) {
        keys.push_back(first_separates ? spaces[k].label[0] : static_cast<double>(k));
    }
    out.spectrum = keys;
    out.generator = ComplexMatrix(d);
    for (std::size_t k = 0; k < spaces.size(); ++k) {
        out.generator += keys[k] * out.joint_projectors[k];
    }
    for (std::size_t j = 0; j < ops.size(); ++j) {
        RealFunction::Table table;
        for (std::size_t k = 0; k < spaces.size(); ++k) {
            table.emplace_back(keys[k], spaces[k].label[j]);
        }
        out.functions.push_back(RealFunction::table(std::move(table)));
    }
    return out;
}

} // namespace ks
