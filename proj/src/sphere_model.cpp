#include "ks/sphere_model.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ks {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kDegenerateGap = 1e-8;
constexpr double kAxisTieBreak = 1e-9;
constexpr double kBlochTolerance = 1e-10;
constexpr double kPi = std::numbers::pi;

Vec3 scaled(const Vec3& v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

Vec3 normalized(const Vec3& v) { return scaled(v, 1.0 / norm(v)); }

/// Some unit vector orthogonal to v (v nonzero).
Vec3 perpendicular(const Vec3& v)
{
    const Vec3 trial = std::abs(v[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    return normalized(cross(v, trial));
}

struct Frame {
    Vec3 e1, e2, e3;

    Vec3 at(double theta, double phi) const
    {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double cp = std::cos(phi);
        const double sp = std::sin(phi);
        Vec3 v{};
        for (std::size_t i = 0; i < 3; ++i) {
            v[i] = s * cp * e1[i] + s * sp * e2[i] + c * e3[i];
        }
        return normalized(v);
    }
};

double wrap_angle(double phi)
{
    phi = std::fmod(phi, 2.0 * kPi);
    return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

bool upper_hemisphere(const SphereObservable& obs, const SpherePoint& p)
{
    return obs.degenerate || dot(*obs.axis, p.vec()) > kEquatorBand;
}

} // namespace

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

SpherePoint::SpherePoint(const Vec3& v) : v_(v)
{
    if (std::abs(norm(v) - 1.0) > kUnitTolerance) {
        throw InvalidArgument("sphere point is not a unit vector");
    }
}

SpherePoint SpherePoint::from_angles(double theta, double phi)
{
    return SpherePoint(
        Vec3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

SphereObservable sphere_observable_from_matrix(const ComplexMatrix& a, double tol)
{
    if (a.dim() != 2) {
        throw DimMismatch("sphere observables are 2x2");
    }
    if (!is_hermitian(a, tol)) {
        throw NotHermitian("sphere observable is not Hermitian");
    }
    // A = a0 1 + v . sigma
    const double a0 = 0.5 * (a(0, 0).real() + a(1, 1).real());
    const Vec3 v{a(0, 1).real(), -a(0, 1).imag(), 0.5 * (a(0, 0).real() - a(1, 1).real())};
    const double r = norm(v);

    SphereObservable obs;
    if (2.0 * r <= kDegenerateGap) {
        obs.degenerate = true;
        obs.lambda1 = obs.lambda2 = a0;
        return obs;
    }
    const Vec3 n = scaled(v, 1.0 / r);
    double sign = 1.0;
    if (std::abs(n[2]) > kAxisTieBreak) {
        sign = n[2] > 0 ? 1.0 : -1.0;
    } else if (std::abs(n[0]) > kAxisTieBreak) {
        sign = n[0] > 0 ? 1.0 : -1.0;
    } else {
        sign = n[1] > 0 ? 1.0 : -1.0;
    }
    obs.axis = scaled(n, sign);
    obs.lambda1 = a0 + sign * r;
    obs.lambda2 = a0 - sign * r;
    return obs;
}

ComplexMatrix spin_matrix(const ComplexMatrix& a, const SphereObservable& obs)
{
    if (obs.degenerate) {
        throw InvalidArgument("degenerate observable has no spin matrix");
    }
    const double gap = obs.lambda1 - obs.lambda2;
    return (2.0 / gap) * a - ((obs.lambda1 + obs.lambda2) / gap) * ComplexMatrix::identity(2);
}

ComplexMatrix axis_spin_matrix(const SphereObservable& obs)
{
    if (obs.degenerate) {
        throw InvalidArgument("degenerate observable has no axis");
    }
    const Vec3& x = *obs.axis;
    return ComplexMatrix{{x[2], Complex(x[0], -x[1])}, {Complex(x[0], x[1]), -x[2]}};
}

double value_function(const SphereObservable& obs, const SpherePoint& p)
{
    return upper_hemisphere(obs, p) ? obs.lambda1 : obs.lambda2;
}

double SphereDensity::operator()(const SpherePoint& p) const
{
    return std::max(0.0, dot(bloch, p.vec())) / kPi;
}

SphereDensity density_from_state(const PureState& psi)
{
    if (psi.dim() != 2) {
        throw DimMismatch("sphere densities are defined for qubit states");
    }
    const Complex a = psi.amplitudes()[0];
    const Complex b = psi.amplitudes()[1];
    const Complex ab = std::conj(a) * b;
    const Vec3 n{2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
    if (std::abs(norm(n) - 1.0) > kBlochTolerance) {
        throw NotNormalized("Bloch vector is not a unit vector");
    }
    return SphereDensity{normalized(n)};
}

GaussLegendreRule gauss_legendre(std::size_t n)
{
    if (n == 0) {
        throw InvalidArgument("Gauss-Legendre rule needs at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) + 1.0) * x * p1 - static_cast<double>(k) * p2) /
                     (static_cast<double>(k) + 1.0);
            }
            // p0 = P_n(x), p1 = P_{n-1}(x)
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double step = p0 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double integrate_with_density(const SphereObservable& obs, const SphereDensity& dens,
                              const std::function<double(const SpherePoint&)>& integrand, std::size_t n)
{
    // Polar axis along n x a, so both hemisphere boundaries are meridians.
    const Vec3 bloch = normalized(dens.bloch);
    Frame frame{};
    frame.e1 = bloch;
    Vec3 e3 = perpendicular(bloch);
    if (!obs.degenerate) {
        const Vec3 c = cross(bloch, *obs.axis);
        if (norm(c) > kAxisTieBreak) {
            e3 = normalized(c);
        }
    }
    frame.e3 = e3;
    frame.e2 = cross(e3, bloch);

    std::vector<double> breaks{0.5 * kPi, 1.5 * kPi};
    if (!obs.degenerate) {
        const double phi_axis = std::atan2(dot(*obs.axis, frame.e2), dot(*obs.axis, frame.e1));
        breaks.push_back(wrap_angle(phi_axis + 0.5 * kPi));
        breaks.push_back(wrap_angle(phi_axis - 0.5 * kPi));
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double x, double y) { return y - x < 1e-14; }),
                 breaks.end());

    const GaussLegendreRule rule = gauss_legendre(n);
    double total = 0.0;
    for (std::size_t b = 0; b < breaks.size(); ++b) {
        const double lo = breaks[b];
        const double hi = b + 1 < breaks.size() ? breaks[b + 1] : breaks.front() + 2.0 * kPi;
        const double half_phi = 0.5 * (hi - lo);
        if (half_phi <= 0.0) {
            continue;
        }
        const double mid_phi = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = mid_phi + half_phi * rule.nodes[i];
            for (std::size_t j = 0; j < n; ++j) {
                const double theta = 0.5 * kPi * (1.0 + rule.nodes[j]);
                const SpherePoint p(frame.at(theta, phi));
                const double weight = rule.weights[i] * half_phi * rule.weights[j] * 0.5 * kPi * std::sin(theta);
                total += weight * integrand(p) * dens(p);
            }
        }
    }
    return total;
}

Ks1Estimate ks1_probability(const SphereObservable& obs, const SphereDensity& dens, Integration method, std::size_t n,
                            std::uint64_t seed)
{
    if (n == 0) {
        throw InvalidArgument("ks1_probability needs n >= 1");
    }
    Ks1Estimate est;
    est.seed = seed;
    if (method == Integration::quadrature) {
        auto indicator = [&](const SpherePoint& p) { return upper_hemisphere(obs, p) ? 1.0 : 0.0; };
        est.p_lambda1 = integrate_with_density(obs, dens, indicator, n);
        est.error_estimate = std::abs(integrate_with_density(obs, dens, indicator, 2 * n) - est.p_lambda1);
        return est;
    }

    const Vec3 bloch = normalized(dens.bloch);
    const Vec3 f1 = perpendicular(bloch);
    const Vec3 f2 = cross(bloch, f1);
    const Frame frame{f1, f2, bloch};
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = std::asin(std::sqrt(unit(engine)));
        const double phi = 2.0 * kPi * unit(engine);
        if (upper_hemisphere(obs, SpherePoint(frame.at(theta, phi)))) {
            ++hits;
        }
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    est.p_lambda1 = p;
    est.error_estimate = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return est;
}

double sphere_expectation(const SphereObservable& obs, const SphereDensity& dens, std::size_t n)
{
    return integrate_with_density(obs, dens, [&](const SpherePoint& p) { return value_function(obs, p); }, n);
}

double density_mass(const SphereDensity& dens, std::size_t n)
{
    const SphereObservable constant{1.0, 1.0, std::nullopt, true};
    return integrate_with_density(constant, dens, [](const SpherePoint&) { return 1.0; }, n);
}

std::size_t ks2_violations(const ComplexMatrix& a, const RealFunction& u, const std::vector<SpherePoint>& points,
                           double tol)
{
    const SphereObservable source = sphere_observable_from_matrix(a, tol);
    const ComplexMatrix ua = apply_function(eigendecompose(a, tol), u);
    const SphereObservable image = sphere_observable_from_matrix(ua, tol);
    std::size_t bad = 0;
    for (const auto& p : points) {
        if (!(std::abs(value_function(image, p) - u(value_function(source, p))) <= kValueCollision)) {
            ++bad;
        }
    }
    return bad;
}

bool ks2_pointwise_check(const ComplexMatrix& a, const RealFunction& u, const std::vector<SpherePoint>& points,
                         double tol)
{
    return ks2_violations(a, u, points, tol) == 0;
}

std::vector<SpherePoint> uniform_sphere_points(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<SpherePoint> out;
    out.reserve(count);
    while (out.size() < count) {
        const Vec3 v{gauss(engine), gauss(engine), gauss(engine)};
        if (norm(v) > 1e-6) {
            out.emplace_back(normalized(v));
        }
    }
    return out;
}

std::vector<SpherePoint> great_circle_points(const Vec3& axis, std::size_t count)
{
    const Vec3 n = normalized(axis);
    const Vec3 e1 = perpendicular(n);
    const Vec3 e2 = cross(n, e1);
    std::vector<SpherePoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
        Vec3 v{};
        for (std::size_t i = 0; i < 3; ++i) {
            v[i] = std::cos(t) * e1[i] + std::sin(t) * e2[i];
        }
        out.emplace_back(normalized(v));
    }
    return out;
}

} // namespace ks
