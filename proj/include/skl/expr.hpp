#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace skl {

/// Compiled arithmetic expression over named scalar variables.
/// Supported: + - * / ^ (right-assoc pow), unary minus, parentheses,
/// numeric literals, and the functions exp, log, sqrt, abs, pow, min, max.
class Expr {
public:
    /// Compile `text` against the given variable names (e.g. {"t","x1","x2"}).
    /// Throws std::invalid_argument with a position-annotated message on
    /// syntax errors or unknown identifiers.
    static Expr compile(const std::string& text, const std::vector<std::string>& variables);

    /// Evaluate with one value per variable, in the order given to compile().
    double eval(std::span<const double> values) const;

    const std::string& text() const { return text_; }

    Expr(Expr&&) noexcept;
    Expr& operator=(Expr&&) noexcept;
    Expr(const Expr&);
    Expr& operator=(const Expr&);
    ~Expr();

    struct Node;  // exposed for the evaluator translation unit

private:
    Expr();
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace skl
