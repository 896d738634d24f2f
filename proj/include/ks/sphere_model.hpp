#pragma once

#include "ks/matrix.hpp"
#include "ks/quantum_state.hpp"
#include "ks/spectral.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ks {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

/// Point on the unit 2-sphere.
class SpherePoint {
public:
    /// Throws InvalidArgument unless | ||v|| - 1 | <= 1e-12.
    explicit SpherePoint(const Vec3& v);
    /// Polar angle theta in [0, pi], azimuth phi.
    static SpherePoint from_angles(double theta, double phi);

    const Vec3& vec() const noexcept { return v_; }

private:
    Vec3 v_;
};

/// Hemisphere data for a 2x2 Hermitian observable. lambda1 belongs to the
/// eigenvector whose Bloch vector is `axis`; the axis is the one of +/-n
/// that lies in the upper half space (ties broken by x, then y), so A and any
/// injective function of A share it.
struct SphereObservable {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::optional<Vec3> axis;
    bool degenerate = false;
};

/// Throws NotHermitian, DimMismatch (needs 2x2).
SphereObservable sphere_observable_from_matrix(const ComplexMatrix& a, double tol);

/// (2A - (lambda1 + lambda2)) / (lambda1 - lambda2), and axis . sigma. Throw InvalidArgument when degenerate.
ComplexMatrix spin_matrix(const ComplexMatrix& a, const SphereObservable& obs);
ComplexMatrix axis_spin_matrix(const SphereObservable& obs);

/// |axis . p| at or below this counts as the boundary great circle.
inline constexpr double kEquatorBand = 1e-12;

/// lambda1 on the open hemisphere around the axis, lambda2 on the rest.
double value_function(const SphereObservable& obs, const SpherePoint& p);

/// m_psi(p) = max(0, n . p) / pi for Bloch vector n.
struct SphereDensity {
    Vec3 bloch;

    double operator()(const SpherePoint& p) const;
};

/// Throws DimMismatch for a non-qubit state.
SphereDensity density_from_state(const PureState& psi);

enum class Integration { quadrature, montecarlo };

inline constexpr std::uint64_t kDefaultSeed = 20080125;

struct Ks1Estimate {
    double p_lambda1 = 0.0;
    double error_estimate = 0.0;
    std::uint64_t seed = 0;
};

/// rho_psi(f_A = lambda1). Quadrature: Gauss-Legendre in theta and phi with
/// n nodes per axis on each panel between hemisphere boundaries; the error
/// estimate compares against 2n nodes. Monte Carlo: n density-distributed
/// samples, binomial standard error.
Ks1Estimate ks1_probability(const SphereObservable& obs, const SphereDensity& dens, Integration method, std::size_t n,
                            std::uint64_t seed = kDefaultSeed);

/// Quadrature of integrand * m_psi over the sphere, panels split at the
/// boundaries of the observable's hemisphere and of the density support.
double integrate_with_density(const SphereObservable& obs, const SphereDensity& dens,
                              const std::function<double(const SpherePoint&)>& integrand, std::size_t n);

/// Integral of f_A m_psi.
double sphere_expectation(const SphereObservable& obs, const SphereDensity& dens, std::size_t n);
/// Integral of m_psi.
double density_mass(const SphereDensity& dens, std::size_t n);

/// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(std::size_t n);

/// Number of points where f_{u(A)}(p) != u(f_A(p)) beyond 1e-8.
std::size_t ks2_violations(const ComplexMatrix& a, const RealFunction& u, const std::vector<SpherePoint>& points,
                           double tol = 1e-10);
bool ks2_pointwise_check(const ComplexMatrix& a, const RealFunction& u, const std::vector<SpherePoint>& points,
                         double tol = 1e-10);

std::vector<SpherePoint> uniform_sphere_points(std::size_t count, std::uint64_t seed);
/// Points on the great circle orthogonal to `axis`.
std::vector<SpherePoint> great_circle_points(const Vec3& axis, std::size_t count);

} // namespace ks
