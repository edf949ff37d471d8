#pragma once

#include <memory>
#include <string>

namespace normkam {

// Scalar expressions in one variable (x or t):
//   numbers, pi, + - * / ^, unary minus, parentheses and
//   sin cos tan atan tanh exp log sqrt abs.
class Expression {
public:
    Expression();
    // Throws ParseError with the offending position.
    static Expression parse(const std::string& text);
    static Expression constant(double c);

    double operator()(double x) const;
    const std::string& text() const { return text_; }
    bool is_zero_constant() const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace normkam
