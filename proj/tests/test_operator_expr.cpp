#include "ks/error.hpp"
#include "ks/operator_expr.hpp"

#include "random_ops.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

using namespace ks;
using ks::testing::pauli_x;
using ks::testing::pauli_y;
using ks::testing::pauli_z;

namespace {

ComplexMatrix kron3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c)
{
    return tensor(tensor(a, b), c);
}

const ComplexMatrix kOne = ComplexMatrix::identity(2);

const std::vector<std::string> kCorpus = {
    "I",
    "sx(1)",
    "sy(2)",
    "sz(3)",
    "2",
    "0.5",
    "1e-3",
    "2.5e+10",
    "-sx(1)",
    "-I",
    "sx(1)*sy(2)*sy(3)",
    "sy(1)*sx(2)*sy(3)",
    "sy(1)*sy(2)*sx(3)",
    "sx(1)*sx(2)*sx(3)",
    "sx(1) + sz(2)",
    "sx(1) - sz(2)",
    "sx(1) - sz(2) + sy(3)",
    "-sx(1) - sx(2) - sx(3)",
    "2*sx(1)",
    "3*sx(1) + 5",
    "3*sx(1) + 5*I",
    "(sx(1) + sy(1))*sz(1)",
    "sz(1)*(sx(2) - sy(2))",
    "(sx(1))",
    "((sz(2)))",
    "(sx(1) + sx(2)) + sx(3)",
    "sx(1) + (sx(2) + sx(3))",
    "sx(1) - (sx(2) + sx(3))",
    "sx(1) - (-sx(2))",
    "-(sx(1) + sy(2))",
    "-(-sz(3))",
    "sx(1)*(-sy(2))",
    "(sx(1)*sy(2))*sz(3)",
    "sx(1)*(sy(2)*sz(3))",
    "-sx(1)*sy(2)",
    "-(sx(1)*sy(2))",
    "I + I + I",
    "0",
    "0.125*sz(1)*sz(2)",
    "sx(1)*sx(1)",
    "sx(1)*sy(1)",
    "(sx(1)*sy(2)*sy(3))*(sy(1)*sx(2)*sy(3))*(sy(1)*sy(2)*sx(3))",
    "sz(1)*sz(2) + sz(2)*sz(3) + sz(1)*sz(3)",
    "(I + sz(1))*(I - sz(2))*0.25",
    "((sx(1) - sy(1))*(sx(1) + sy(1)))",
    "1.5 - 2.5*sz(3)",
    "-(I)",
    "(-sx(1)) + sx(2)",
    "sx(3)*sy(3)*sz(3)",
    "-((sx(1) + sx(2))*(sy(1) - sy(2)))",
};

} // namespace

TEST(OperatorExpr, CorpusHasFiftyEntries) { EXPECT_EQ(kCorpus.size(), 50u); }

TEST(OperatorExpr, RoundTripPreservesTree)
{
    for (const auto& src : kCorpus) {
        const OperatorExpr tree = parse(src, 3);
        const std::string printed = to_string(tree);
        EXPECT_EQ(parse(printed, 3), tree) << src << " printed as " << printed;
        EXPECT_EQ(to_string(parse(printed, 3)), printed) << src;
    }
}

TEST(OperatorExpr, RoundTripPreservesMatrix)
{
    for (const auto& src : kCorpus) {
        const OperatorExpr tree = parse(src, 3);
        EXPECT_EQ(max_distance(evaluate(parse(to_string(tree), 3), 3), evaluate(tree, 3)), 0.0) << src;
    }
}

TEST(OperatorExpr, TreeShapes)
{
    const auto q1 = parse("sx(1)*sy(2)*sy(3)", 3);
    ASSERT_EQ(q1.kind, ExprKind::product);
    ASSERT_EQ(q1.children.size(), 3u);
    EXPECT_EQ(q1.children[0], OperatorExpr::pauli(PauliAxis::x, 1));
    EXPECT_EQ(q1.children[1], OperatorExpr::pauli(PauliAxis::y, 2));
    EXPECT_EQ(q1.children[2], OperatorExpr::pauli(PauliAxis::y, 3));

    EXPECT_EQ(parse("I", 2), OperatorExpr::identity());
    EXPECT_EQ(parse("2.5", 1), OperatorExpr::scalar(2.5, OperatorExpr::identity()));
    EXPECT_EQ(parse(" sx ( 1 )\n - sz(1)", 1),
              OperatorExpr::sum({OperatorExpr::pauli(PauliAxis::x, 1),
                                 OperatorExpr::scalar(-1.0, OperatorExpr::pauli(PauliAxis::z, 1))}));
}

TEST(OperatorExpr, SingleSiteOperatorsMatchHandBuiltTensors)
{
    EXPECT_EQ(max_distance(evaluate(parse("sx(1)", 3), 3), kron3(pauli_x(), kOne, kOne)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sx(2)", 3), 3), kron3(kOne, pauli_x(), kOne)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sx(3)", 3), 3), kron3(kOne, kOne, pauli_x())), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sy(1)", 3), 3), kron3(pauli_y(), kOne, kOne)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sy(2)", 3), 3), kron3(kOne, pauli_y(), kOne)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sy(3)", 3), 3), kron3(kOne, kOne, pauli_y())), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("I", 2), 2), ComplexMatrix::identity(4)), 0.0);
}

TEST(OperatorExpr, GhzProductsMatchHandBuiltTensors)
{
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix y = pauli_y();
    EXPECT_EQ(max_distance(evaluate(parse("sx(1)*sy(2)*sy(3)", 3), 3), kron3(x, y, y)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sy(1)*sx(2)*sy(3)", 3), 3), kron3(y, x, y)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sy(1)*sy(2)*sx(3)", 3), 3), kron3(y, y, x)), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sx(1)*sx(2)*sx(3)", 3), 3), kron3(x, x, x)), 0.0);
}

TEST(OperatorExpr, SingleQubitAlgebra)
{
    EXPECT_EQ(max_distance(evaluate(parse("sx(1)*sx(1)", 1), 1), kOne), 0.0);
    const ComplexMatrix isz = Complex(0, 1) * pauli_z();
    EXPECT_EQ(max_distance(evaluate(parse("sx(1)*sy(1)", 1), 1), isz), 0.0);
    const ComplexMatrix affine = 3.0 * pauli_x() + 5.0 * kOne;
    EXPECT_EQ(max_distance(evaluate(parse("3*sx(1) + 5", 1), 1), affine), 0.0);
    EXPECT_EQ(max_distance(evaluate(parse("sx(1) - sx(1)", 1), 1), ComplexMatrix(2)), 0.0);
}

TEST(OperatorExpr, SiteOutOfRange)
{
    EXPECT_THROW(parse("sx(4)", 3), SiteOutOfRange);
    EXPECT_THROW(parse("sz(0)", 3), SiteOutOfRange);
    EXPECT_THROW(evaluate(OperatorExpr::pauli(PauliAxis::x, 5), 3), SiteOutOfRange);
    EXPECT_THROW(parse("I", 0), InvalidArgument);
}

TEST(OperatorExpr, SyntaxErrorsArePositioned)
{
    struct Case {
        const char* src;
        std::size_t line;
        std::size_t column;
    };
    const std::vector<Case> cases = {
        {"sx(1) +", 1, 8},
        {"sx(1) ** sy(2)", 1, 8},
        {"sq(1)", 1, 1},
        {"sx(1.5)", 1, 4},
        {"sx 1", 1, 4},
        {"(sx(1)", 1, 7},
        {"sx(1))", 1, 6},
        {"sx(1)\n  + $", 2, 5},
        {"sx(1) sy(2)", 1, 7},
        {"", 1, 1},
    };
    for (const auto& c : cases) {
        try {
            parse(c.src, 3);
            ADD_FAILURE() << "no error for " << c.src;
        } catch (const SyntaxError& e) {
            EXPECT_EQ(e.line(), c.line) << c.src;
            EXPECT_EQ(e.column(), c.column) << c.src << ": " << e.what();
        }
    }
}
