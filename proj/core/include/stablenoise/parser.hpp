#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "stablenoise/kernel.hpp"

namespace stablenoise {

class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& what, std::size_t pos)
        : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | primary
//   primary := number | 'pi' | coord | call | '(' expr ')'
//   call    := name '(' expr (',' expr)* ')'
//   coord   := x | y | z | x1 .. x8
// Functions: pow abs exp max min sin cos sqrt log, and
// indicator(box(a1,b1), ..., box(ad,bd)) for [a1,b1) x ... x [ad,bd).
//
// Linear structure at the top (sums, constant multiples, products with an
// indicator) becomes kernel combinators so grid operators stay exact on it.
// Leaves get support/decay metadata inferred from the expression.
kernel parse_kernel(const std::string& expr, int dim);

}  // namespace stablenoise
