#include "ks/eigen.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ks {

namespace {

double off_diagonal_max(const ComplexMatrix& a)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = i + 1; j < a.dim(); ++j) {
            m = std::max(m, std::abs(a(i, j)));
        }
    }
    return m;
}

double diagonal_scale(const ComplexMatrix& a)
{
    double m = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m = std::max(m, std::abs(a(i, i)));
    }
    return m;
}

// Zeroes a(p,q) with J = D * R, D = diag(.., e^{-i phi} at q, ..), R the real
// symmetric Jacobi rotation for the phase-removed 2x2 block.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q)
{
    const Complex b = a(p, q);
    const double r = std::abs(b);
    const Complex phase = b / r;
    const Complex phase_conj = std::conj(phase);

    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t d = a.dim();
    // a <- a J, v <- v J
    for (std::size_t k = 0; k < d; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - s * phase_conj * akq;
        a(k, q) = s * akp + c * phase_conj * akq;

        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp - s * phase_conj * vkq;
        v(k, q) = s * vkp + c * phase_conj * vkq;
    }
    // a <- J^dagger a
    for (std::size_t k = 0; k < d; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk - s * phase * aqk;
        a(q, k) = s * apk + c * phase * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
}

} // namespace

HermitianEigen jacobi_eigen(const ComplexMatrix& input, const JacobiOptions& options)
{
    const std::size_t d = input.dim();
    ComplexMatrix a = 0.5 * (input + input.adjoint());
    ComplexMatrix v = ComplexMatrix::identity(d);

    bool converged = false;
    for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
        const double limit = options.threshold * diagonal_scale(a);
        if (off_diagonal_max(a) <= limit) {
            converged = true;
            break;
        }
        if (sweep == options.max_sweeps) {
            break;
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                if (std::abs(a(p, q)) > limit * 1e-3) {
                    rotate(a, v, p, q);
                }
            }
        }
    }
    if (!converged) {
        throw NoConvergence("Jacobi eigensolver exceeded " + std::to_string(options.max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigen out;
    out.values.reserve(d);
    out.vectors.reserve(d);
    for (std::size_t k : order) {
        out.values.push_back(a(k, k).real());
        ComplexVector col(d);
        for (std::size_t i = 0; i < d; ++i) {
            col[i] = v(i, k);
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

} // namespace ks
