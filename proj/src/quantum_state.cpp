#include "ks/quantum_state.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ks {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kNegativeClamp = 1e-12;
constexpr double kTotalTolerance = 1e-10;

} // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.empty()) {
        throw NotNormalized("pure state needs at least one amplitude");
    }
    const double n = norm2(amplitudes_);
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw NotNormalized("state norm is " + std::to_string(n));
    }
}

PureState PureState::normalized(ComplexVector amplitudes)
{
    const double n = norm2(amplitudes);
    if (!(n > 0.0)) {
        throw NotNormalized("cannot normalize the zero vector");
    }
    for (auto& x : amplitudes) {
        x /= n;
    }
    return PureState(std::move(amplitudes));
}

PureState tensor(const PureState& a, const PureState& b)
{
    ComplexVector out;
    out.reserve(a.dim() * b.dim());
    for (const auto& x : a.amplitudes()) {
        for (const auto& y : b.amplitudes()) {
            out.push_back(x * y);
        }
    }
    return PureState::normalized(std::move(out));
}

BornDistribution::BornDistribution(std::vector<BornAtom> atoms) : atoms_(std::move(atoms))
{
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        auto& p = atoms_[i].probability;
        if (p < -kNegativeClamp || p > 1.0 + kNegativeClamp) {
            throw InvalidArgument("Born probability out of range: " + std::to_string(p));
        }
        p = std::clamp(p, 0.0, 1.0);
        if (i > 0 && !(atoms_[i].eigenvalue > atoms_[i - 1].eigenvalue)) {
            throw InvalidArgument("Born atoms must be strictly ascending");
        }
    }
    if (std::abs(total() - 1.0) > kTotalTolerance) {
        throw InvalidArgument("Born probabilities sum to " + std::to_string(total()));
    }
}

double BornDistribution::probability_of(double lambda) const
{
    for (const auto& a : atoms_) {
        if (std::abs(a.eigenvalue - lambda) <= kEigenvalueCluster) {
            return a.probability;
        }
    }
    return 0.0;
}

double BornDistribution::mean() const
{
    double m = 0.0;
    for (const auto& a : atoms_) {
        m += a.eigenvalue * a.probability;
    }
    return m;
}

double BornDistribution::total() const
{
    double t = 0.0;
    for (const auto& a : atoms_) {
        t += a.probability;
    }
    return t;
}

BornDistribution BornDistribution::pushforward(const RealFunction& u) const
{
    std::vector<BornAtom> images;
    for (const auto& a : atoms_) {
        images.push_back({u(a.eigenvalue), a.probability});
    }
    std::sort(images.begin(), images.end(),
              [](const BornAtom& x, const BornAtom& y) { return x.eigenvalue < y.eigenvalue; });

    std::vector<BornAtom> merged;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= images.size(); ++i) {
        if (i == images.size() || images[i].eigenvalue - images[i - 1].eigenvalue > kValueCollision) {
            double value = 0.0;
            double prob = 0.0;
            for (std::size_t k = begin; k < i; ++k) {
                value += images[k].eigenvalue;
                prob += images[k].probability;
            }
            merged.push_back({value / static_cast<double>(i - begin), prob});
            begin = i;
        }
    }
    return BornDistribution(std::move(merged));
}

BornDistribution born_distribution(const PureState& psi, const SpectralMeasure& e)
{
    if (psi.dim() != e.dim()) {
        throw DimMismatch("born_distribution: state dim " + std::to_string(psi.dim()) + " vs operator dim " +
                          std::to_string(e.dim()));
    }
    std::vector<BornAtom> atoms;
    for (const auto& b : e.branches()) {
        const ComplexVector pv = b.projector * std::span<const Complex>(psi.amplitudes());
        atoms.push_back({b.eigenvalue, inner(psi.amplitudes(), pv).real()});
    }
    return BornDistribution(std::move(atoms));
}

double expectation(const PureState& psi, const ComplexMatrix& a, double hermitian_tol)
{
    if (psi.dim() != a.dim()) {
        throw DimMismatch("expectation: state dim " + std::to_string(psi.dim()) + " vs operator dim " +
                          std::to_string(a.dim()));
    }
    if (!is_hermitian(a, hermitian_tol)) {
        throw NotHermitian("expectation of a non-Hermitian operator");
    }
    const ComplexVector av = a * std::span<const Complex>(psi.amplitudes());
    return inner(psi.amplitudes(), av).real();
}

ComplexMatrix pauli(PauliAxis axis)
{
    switch (axis) {
    case PauliAxis::x:
        return {{0.0, 1.0}, {1.0, 0.0}};
    case PauliAxis::y:
        return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    case PauliAxis::z:
        return {{1.0, 0.0}, {0.0, -1.0}};
    }
    throw InvalidArgument("unknown Pauli axis");
}

ComplexMatrix site_operator(PauliAxis axis, std::size_t site, std::size_t sites)
{
    if (site < 1 || site > sites) {
        throw SiteOutOfRange("site " + std::to_string(site) + " outside [1, " + std::to_string(sites) + "]");
    }
    const ComplexMatrix one = ComplexMatrix::identity(2);
    ComplexMatrix out = site == 1 ? pauli(axis) : one;
    for (std::size_t k = 2; k <= sites; ++k) {
        out = tensor(out, k == site ? pauli(axis) : one);
    }
    return out;
}

PureState spin_up() { return PureState({1.0, 0.0}); }
PureState spin_down() { return PureState({0.0, 1.0}); }

GhzSystem build_ghz()
{
    std::array<ComplexMatrix, 3> a;
    std::array<ComplexMatrix, 3> b;
    for (std::size_t j = 0; j < 3; ++j) {
        a[j] = site_operator(PauliAxis::x, j + 1, 3);
        b[j] = site_operator(PauliAxis::y, j + 1, 3);
    }
    std::array<ComplexMatrix, 3> q{a[0] * b[1] * b[2], b[0] * a[1] * b[2], b[0] * b[1] * a[2]};

    ComplexVector psi(8);
    psi[0] = 1.0 / std::sqrt(2.0);  // up up up
    psi[7] = -1.0 / std::sqrt(2.0); // down down down
    return GhzSystem{std::move(a), std::move(b), std::move(q), PureState(std::move(psi))};
}

ComplexMatrix ghz_a_product(const GhzSystem& sys)
{
    return sys.a[0] * sys.a[1] * sys.a[2];
}

bool verify_operator_identity(const GhzSystem& sys, double tol)
{
    return max_norm(sys.q[0] * sys.q[1] * sys.q[2] + ghz_a_product(sys)) <= tol;
}

} // namespace ks
