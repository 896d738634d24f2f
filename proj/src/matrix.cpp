#include "ks/matrix.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ks {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op)
{
    if (a.dim() != b.dim()) {
        throw DimMismatch(std::string(op) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries))
{
    if (entries_.size() != dim_ * dim_) {
        throw DimMismatch("matrix of dim " + std::to_string(dim_) + " needs " + std::to_string(dim_ * dim_) +
                          " entries, got " + std::to_string(entries_.size()));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size())
{
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw DimMismatch("matrix literal is not square");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim)
{
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values)
{
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v, std::span<const Complex> w)
{
    if (v.size() != w.size()) {
        throw DimMismatch("outer product of unequal lengths");
    }
    ComplexMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            m(i, j) = v[i] * std::conj(w[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            m(j, i) = std::conj((*this)(i, j));
        }
    }
    return m;
}

Complex ComplexMatrix::trace() const
{
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other)
{
    require_same_dim(*this, other, "matrix sum");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += other.entries_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other)
{
    require_same_dim(*this, other, "matrix difference");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= other.entries_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar)
{
    for (auto& e : entries_) {
        e *= scalar;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix a) { return a *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_dim(a, b, "matrix product");
    const std::size_t d = a.dim();
    ComplexMatrix c(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v)
{
    if (a.dim() != v.size()) {
        throw DimMismatch("matrix-vector product: " + std::to_string(a.dim()) + " vs " + std::to_string(v.size()));
    }
    ComplexVector out(v.size());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            out[i] += a(i, j) * v[j];
        }
    }
    return out;
}

double max_norm(const ComplexMatrix& a)
{
    double m = 0.0;
    for (const auto& e : a.entries()) {
        m = std::max(m, std::abs(e));
    }
    return m;
}

double max_distance(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_dim(a, b, "matrix distance");
    double m = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol)
{
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = i; j < a.dim(); ++j) {
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b)
{
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            const Complex aij = a(i, j);
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    out(i * db + k, j * db + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

bool commutes(const ComplexMatrix& a, const ComplexMatrix& b, double tol)
{
    require_same_dim(a, b, "commutator");
    return max_distance(a * b, b * a) <= tol;
}

Complex inner(std::span<const Complex> v, std::span<const Complex> w)
{
    if (v.size() != w.size()) {
        throw DimMismatch("inner product of unequal lengths");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += std::conj(v[i]) * w[i];
    }
    return s;
}

double norm2(std::span<const Complex> v)
{
    double s = 0.0;
    for (const auto& x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

} // namespace ks
