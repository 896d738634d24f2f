#pragma once

#include "ks/matrix.hpp"
#include "ks/spectral.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace ks {

/// Unit vector in C^d.
class PureState {
public:
    /// Throws NotNormalized unless | ||amplitudes|| - 1 | <= 1e-12.
    explicit PureState(ComplexVector amplitudes);
    /// Divides by the norm; throws NotNormalized for the zero vector.
    static PureState normalized(ComplexVector amplitudes);

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

private:
    ComplexVector amplitudes_;
};

PureState tensor(const PureState& a, const PureState& b);

struct BornAtom {
    double eigenvalue;
    double probability;
};

/// Outcome distribution on a finite spectrum; eigenvalues ascending and distinct.
class BornDistribution {
public:
    explicit BornDistribution(std::vector<BornAtom> atoms);

    const std::vector<BornAtom>& atoms() const noexcept { return atoms_; }
    /// 0 if lambda is not an atom.
    double probability_of(double lambda) const;
    double mean() const;
    double total() const;
    /// (u_* w)(mu) = w(u^{-1}(mu)), with outcomes merged within kValueCollision.
    BornDistribution pushforward(const RealFunction& u) const;

private:
    std::vector<BornAtom> atoms_;
};

/// <psi, P_i psi> per branch. Throws DimMismatch.
BornDistribution born_distribution(const PureState& psi, const SpectralMeasure& e);

/// <psi, A psi>. Throws DimMismatch, NotHermitian (checked within hermitian_tol).
double expectation(const PureState& psi, const ComplexMatrix& a, double hermitian_tol = 1e-10);

enum class PauliAxis { x, y, z };

ComplexMatrix pauli(PauliAxis axis);
/// 1 (x) ... (x) sigma_axis (x) ... (x) 1 with sigma at 1-based slot `site` of `sites`.
ComplexMatrix site_operator(PauliAxis axis, std::size_t site, std::size_t sites);

PureState spin_up();
PureState spin_down();

/// The three-qubit GHZ construction.
struct GhzSystem {
    std::array<ComplexMatrix, 3> a; // sigma_x on site j
    std::array<ComplexMatrix, 3> b; // sigma_y on site j
    std::array<ComplexMatrix, 3> q; // a1 b2 b3, b1 a2 b3, b1 b2 a3
    PureState psi;                  // (|up up up> - |down down down>) / sqrt 2
};

GhzSystem build_ghz();

/// a1 a2 a3
ComplexMatrix ghz_a_product(const GhzSystem& sys);

/// ||q1 q2 q3 + a1 a2 a3||_max <= tol
bool verify_operator_identity(const GhzSystem& sys, double tol);

} // namespace ks
