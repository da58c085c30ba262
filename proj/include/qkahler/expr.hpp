#pragma once

#include <string>
#include <vector>

#include "qkahler/common.hpp"

namespace qk {

/// One letter of a word: a_i, a*_i (written A_i), or Q.
struct Token {
    enum class Kind { Ann, Cre, Q } kind = Kind::Ann;
    int index = 1;  // 1-based generator index; unused for Q
    friend bool operator==(const Token&, const Token&) = default;
};

struct ExprTerm {
    cplx coeff = 1.0;
    std::vector<Token> word;  // empty word = identity
    friend bool operator==(const ExprTerm&, const ExprTerm&) = default;
};

/// Word-polynomial in the generators, fully expanded to a sum of scalar
/// multiples of words.
struct AlgExpr {
    std::vector<ExprTerm> terms;

    int max_index() const;
    bool uses_q() const;
    AlgExpr operator*(const AlgExpr&) const;
    AlgExpr operator+(const AlgExpr&) const;
    AlgExpr scaled(cplx c) const;
    /// Merge equal words, drop zero coefficients, sort words canonically.
    AlgExpr simplified() const;
};

/// Grammar: identifiers a1..aN (annihilation), A1..AN (creation), Q, I;
/// operators + - * ^ with nonnegative integer powers; complex literals
/// "a+bi"; parentheses; whitespace insensitive. "*" and the printer's
/// middle dot both multiply.
AlgExpr parse_expr(const std::string& text);

std::string to_string(const AlgExpr& e);
std::string to_string(const Token& t);

} // namespace qk
