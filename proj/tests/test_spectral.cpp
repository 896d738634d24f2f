#include "ks/error.hpp"
#include "ks/spectral.hpp"

#include "random_ops.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ks;
using ks::testing::pauli_x;
using ks::testing::pauli_y;
using ks::testing::pauli_z;

namespace {

const ComplexMatrix kI2 = ComplexMatrix::identity(2);

ComplexMatrix diag(std::vector<double> v) { return ComplexMatrix::diagonal(v); }

RealFunction square() { return RealFunction::polynomial({0, 0, 1}); }

} // namespace

TEST(Eigendecompose, SigmaZDiagonal)
{
    const SpectralMeasure e = eigendecompose(pauli_z(), 1e-10);
    ASSERT_EQ(e.branches().size(), 2u);
    EXPECT_DOUBLE_EQ(e.branches()[0].eigenvalue, -1.0);
    EXPECT_DOUBLE_EQ(e.branches()[1].eigenvalue, 1.0);
    EXPECT_LE(max_distance(e.branches()[0].projector, diag({0, 1})), 1e-15);
    EXPECT_LE(max_distance(e.branches()[1].projector, diag({1, 0})), 1e-15);
}

TEST(Eigendecompose, SigmaXProjectorsAreHalfOnePlusMinusSigmaX)
{
    const SpectralMeasure e = eigendecompose(pauli_x(), 1e-10);
    ASSERT_EQ(e.branches().size(), 2u);
    EXPECT_NEAR(e.branches()[0].eigenvalue, -1.0, 1e-12);
    EXPECT_NEAR(e.branches()[1].eigenvalue, 1.0, 1e-12);
    EXPECT_LE(max_distance(e.branches()[0].projector, 0.5 * (kI2 - pauli_x())), 1e-12);
    EXPECT_LE(max_distance(e.branches()[1].projector, 0.5 * (kI2 + pauli_x())), 1e-12);
    for (const auto& b : e.branches()) {
        EXPECT_LE(max_distance(b.projector * b.projector, b.projector), 1e-12);
    }
    EXPECT_LE(max_distance(e.reconstruct(), pauli_x()), 1e-12);
}

TEST(Eigendecompose, IdentityIsOneBranch)
{
    const SpectralMeasure e = eigendecompose(kI2, 1e-10);
    ASSERT_EQ(e.branches().size(), 1u);
    EXPECT_DOUBLE_EQ(e.branches()[0].eigenvalue, 1.0);
    EXPECT_EQ(e.branches()[0].projector, kI2);
}

TEST(Eigendecompose, DegenerateEigenvaluesMerge)
{
    ks::testing::Rng rng(11);
    const ComplexMatrix a = ks::testing::hermitian_with_spectrum(rng, {2, -1, 2, 2, -1});
    const SpectralMeasure e = eigendecompose(a, 1e-10);
    ASSERT_EQ(e.branches().size(), 2u);
    EXPECT_NEAR(e.branches()[0].projector.trace().real(), 2.0, 1e-10);
    EXPECT_NEAR(e.branches()[1].projector.trace().real(), 3.0, 1e-10);
    EXPECT_LE(e.residuals().worst(), 1e-10);
}

TEST(Eigendecompose, NotHermitianThrows)
{
    const ComplexMatrix a{{1.0, 2.0}, {0.0, 1.0}};
    EXPECT_THROW(eigendecompose(a, 1e-10), NotHermitian);
    EXPECT_THROW(eigendecompose(pauli_x() * pauli_y(), 1e-10), NotHermitian);
}

TEST(ApplyFunction, SquareOfSigmaZIsIdentity)
{
    EXPECT_LE(max_distance(apply_function(eigendecompose(pauli_z(), 1e-10), square()), kI2), 1e-15);
}

TEST(ApplyFunction, IdentityFunctionReproducesSigmaX)
{
    EXPECT_LE(max_distance(apply_function(eigendecompose(pauli_x(), 1e-10), RealFunction::identity()), pauli_x()),
              1e-12);
}

TEST(ApplyFunction, SymbolicCalculusHomomorphism)
{
    const ComplexMatrix a = tensor(pauli_x(), pauli_y());
    const SpectralMeasure e = eigendecompose(a, 1e-10);
    const auto u1 = RealFunction::polynomial({1, 1});
    const auto u2 = RealFunction::polynomial({-1, 1});
    const ComplexMatrix lhs = apply_function(e, u1) * apply_function(e, u2);
    const ComplexMatrix rhs = apply_function(e, RealFunction::product(u1, u2));
    EXPECT_LE(max_distance(lhs, rhs), 1e-12);
    // Independent route: (A + 1)(A - 1) = A^2 - 1 by matrix arithmetic.
    const ComplexMatrix one = ComplexMatrix::identity(4);
    EXPECT_LE(max_distance(lhs, a * a - one), 1e-12);
}

TEST(ApplyFunction, TableMissingEigenvalueThrows)
{
    const auto u = RealFunction::table({{1.0, 5.0}});
    EXPECT_THROW(apply_function(eigendecompose(pauli_z(), 1e-10), u), DomainError);
    EXPECT_THROW(u(-1.0), DomainError);
    EXPECT_DOUBLE_EQ(u(1.0 + 1e-10), 5.0);
}

TEST(Pushforward, SquareOfSigmaZCollapsesToIdentity)
{
    const SpectralMeasure e = eigendecompose(pauli_z(), 1e-10);
    EXPECT_TRUE(pushforward_check(e, square(), 1e-10));
    const auto grouped = pushforward_branches(e, square());
    ASSERT_EQ(grouped.size(), 1u);
    EXPECT_EQ(grouped[0].projector, kI2);
}

TEST(Pushforward, NegationSwapsProjectors)
{
    const SpectralMeasure e = eigendecompose(pauli_x(), 1e-10);
    const auto neg = RealFunction::polynomial({0, -1});
    EXPECT_TRUE(pushforward_check(e, neg, 1e-10));
    const SpectralMeasure image = eigendecompose(apply_function(e, neg), 1e-10);
    EXPECT_LE(max_distance(image.branches()[0].projector, e.branches()[1].projector), 1e-12);
    EXPECT_LE(max_distance(image.branches()[1].projector, e.branches()[0].projector), 1e-12);
}

TEST(Pushforward, RankTwoAtomOnThreeByThree)
{
    const SpectralMeasure e = eigendecompose(diag({0, 1, 2}), 1e-10);
    const auto u = RealFunction::polynomial({0, -1, 1}); // lambda (lambda - 1)
    EXPECT_TRUE(pushforward_check(e, u, 1e-10));
    const auto grouped = pushforward_branches(e, u);
    ASSERT_EQ(grouped.size(), 2u);
    EXPECT_DOUBLE_EQ(grouped[0].eigenvalue, 0.0);
    EXPECT_EQ(grouped[0].projector, diag({1, 1, 0}));
    EXPECT_EQ(grouped[1].projector, diag({0, 0, 1}));
}

TEST(CommonGenerator, SingleOperatorIsItsOwnGenerator)
{
    const CommonGenerator g = common_generator({pauli_z()}, 1e-10);
    EXPECT_LE(max_distance(g.generator, pauli_z()), 1e-15);
    ASSERT_EQ(g.functions.size(), 1u);
    EXPECT_TRUE(g.functions[0].is_table());
    EXPECT_DOUBLE_EQ(g.functions[0](1.0), 1.0);
    EXPECT_DOUBLE_EQ(g.functions[0](-1.0), -1.0);
}

TEST(CommonGenerator, TwoCommutingZs)
{
    const ComplexMatrix z1 = tensor(pauli_z(), kI2);
    const ComplexMatrix z2 = tensor(kI2, pauli_z());
    const CommonGenerator g = common_generator({z1, z2}, 1e-10);
    const SpectralMeasure e = eigendecompose(g.generator, 1e-10);
    ASSERT_EQ(e.branches().size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(e.branches()[k].eigenvalue, static_cast<double>(k), 1e-12);
    }
    EXPECT_LE(max_distance(apply_function(e, g.functions[0]), z1), 1e-10);
    EXPECT_LE(max_distance(apply_function(e, g.functions[1]), z2), 1e-10);
}

TEST(CommonGenerator, QOneFactorsGiveEightJointEigenspaces)
{
    const ComplexMatrix f1 = tensor(tensor(pauli_x(), kI2), kI2);
    const ComplexMatrix f2 = tensor(tensor(kI2, pauli_y()), kI2);
    const ComplexMatrix f3 = tensor(tensor(kI2, kI2), pauli_y());
    const CommonGenerator g = common_generator({f1, f2, f3}, 1e-10);
    EXPECT_EQ(g.joint_projectors.size(), 8u);
    const SpectralMeasure e = eigendecompose(g.generator, 1e-10);
    EXPECT_EQ(e.branches().size(), 8u);
    const std::vector<ComplexMatrix> ops{f1, f2, f3};
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_LE(max_distance(apply_function(e, g.functions[j]), ops[j]), 1e-10);
    }
}

TEST(CommonGenerator, NonCommutingThrows)
{
    EXPECT_THROW(common_generator({pauli_x(), pauli_z()}, 1e-10), NotCommuting);
}

TEST(CommonGenerator, RandomCommutingFamilies)
{
    ks::testing::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(2, 8));
        const auto u = ks::testing::random_unitary_columns(rng, d);
        std::vector<ComplexMatrix> ops;
        for (int j = 0; j < 3; ++j) {
            const auto spectrum = ks::testing::random_integer_spectrum(rng, d);
            ComplexMatrix m(d);
            for (std::size_t k = 0; k < d; ++k) {
                m += spectrum[k] * ComplexMatrix::outer(u[k], u[k]);
            }
            ops.push_back(0.5 * (m + m.adjoint()));
        }
        const CommonGenerator g = common_generator(ops, 1e-10);
        const SpectralMeasure e = eigendecompose(g.generator, 1e-10);
        EXPECT_EQ(e.branches().size(), g.joint_projectors.size());
        for (std::size_t j = 0; j < ops.size(); ++j) {
            EXPECT_LE(max_distance(apply_function(e, g.functions[j]), ops[j]), 1e-8);
        }
    }
}

// Property-style checks over random inputs.

TEST(SpectralProperties, ReconstructionAndAxioms)
{
    ks::testing::Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(2, 8));
        const ComplexMatrix a = trial % 2 ? ks::testing::random_hermitian(rng, d)
                                          : ks::testing::hermitian_with_spectrum(
                                                rng, ks::testing::random_integer_spectrum(rng, d));
        const SpectralMeasure e = eigendecompose(a, 1e-10);
        EXPECT_LE(max_distance(e.reconstruct(), a), 1e-10);
        EXPECT_LE(e.residuals().worst(), 1e-10);
    }
}

TEST(SpectralProperties, SpectralMappingAndHomomorphism)
{
    ks::testing::Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(2, 8));
        const ComplexMatrix a = ks::testing::random_hermitian(rng, d);
        const SpectralMeasure e = eigendecompose(a, 1e-10);
        const auto u1 = RealFunction::polynomial({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        const auto u2 = RealFunction::polynomial({rng.uniform(-1, 1), rng.uniform(-1, 1)});

        const ComplexMatrix ua = apply_function(e, u1);
        EXPECT_TRUE(is_hermitian(ua, 1e-12));
        const auto image = eigendecompose(ua, 1e-10).eigenvalues();
        const auto expected = pushforward_branches(e, u1);
        ASSERT_EQ(image.size(), expected.size());
        for (std::size_t i = 0; i < image.size(); ++i) {
            EXPECT_NEAR(image[i], expected[i].eigenvalue, 1e-10);
        }

        EXPECT_LE(max_distance(ua * apply_function(e, u2), apply_function(e, RealFunction::product(u1, u2))),
                  1e-10);
        EXPECT_TRUE(pushforward_check(e, u1, 1e-9));
    }
}
