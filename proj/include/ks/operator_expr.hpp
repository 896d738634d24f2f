#pragma once

#include "ks/matrix.hpp"
#include "ks/quantum_state.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ks {

enum class ExprKind { pauli, identity, scalar, product, sum };

/// Operator-expression AST. `scalar` nodes hold one child; products and sums
/// hold two or more, evaluated left to right.
struct OperatorExpr {
    ExprKind kind = ExprKind::identity;
    PauliAxis axis = PauliAxis::x;
    std::size_t site = 0;
    double coefficient = 1.0;
    std::vector<OperatorExpr> children;

    static OperatorExpr pauli(PauliAxis axis, std::size_t site);
    static OperatorExpr identity();
    static OperatorExpr scalar(double c, OperatorExpr operand);
    static OperatorExpr product(std::vector<OperatorExpr> factors);
    static OperatorExpr sum(std::vector<OperatorExpr> terms);

    bool operator==(const OperatorExpr&) const = default;
};

/// expr   := ['-'] term { ('+' | '-') term }
/// term   := factor { '*' factor }
/// factor := NUMBER | 'I' | ('sx' | 'sy' | 'sz') '(' INT ')' | '(' expr ')'
///
/// NUMBER parses to scalar(c, I); `a - b` to sum(a, scalar(-1, b)); a leading
/// minus to scalar(-1, term). Throws SyntaxError (1-based line/column) and
/// SiteOutOfRange (site outside [1, sites]). InvalidArgument if sites == 0.
OperatorExpr parse(std::string_view source, std::size_t sites);

/// 2^sites square matrix. Throws SiteOutOfRange.
ComplexMatrix evaluate(const OperatorExpr& expr, std::size_t sites);

/// Source text that parses back to the same tree for any tree produced by parse().
std::string to_string(const OperatorExpr& expr);

} // namespace ks
