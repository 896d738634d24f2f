#pragma once

#include "ks/matrix.hpp"

#include <vector>

namespace ks {

struct JacobiOptions {
    int max_sweeps = 100;
    /// Convergence when every off-diagonal modulus is below threshold * max(1, largest diagonal modulus).
    double threshold = 1e-12;
};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
/// vectors[k] is the unit eigenvector for values[k].
struct HermitianEigen {
    std::vector<double> values;
    std::vector<ComplexVector> vectors;
};

/// Cyclic complex Jacobi rotations. The input is assumed Hermitian; only
/// its Hermitian part is effectively used. Throws NoConvergence.
HermitianEigen jacobi_eigen(const ComplexMatrix& a, const JacobiOptions& options = {});

} // namespace ks
