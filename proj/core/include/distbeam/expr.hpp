#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "distbeam/types.hpp"

namespace distbeam::expr {

enum class NodeKind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Sinh, Cosh, Exp, Sqrt, Abs };

struct Node {
    NodeKind kind;
    double number = 0.0;
    Fn fn = Fn::Sin;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

/// Arithmetic expression in one variable x.
///
/// Grammar (no implicit multiplication, ^ right-associative, unary minus
/// binds before ^):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-' unary | atom
///   atom   := number | 'x' | call '(' expr ')' | '(' expr ')'
class Ast {
public:
    /// Parses `src`; throws ParseError with the offending position.
    static Ast parse(std::string_view src);

    double eval(double x) const;
    /// Fully parenthesized form that re-parses to an equivalent tree.
    std::string pretty() const;
    /// True when the tree contains '/' or sqrt, i.e. may hide singularities.
    bool needs_singularity_scan() const;

    std::shared_ptr<const Node> root() const { return root_; }

private:
    explicit Ast(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

/// Wraps AST evaluation into a ForcingTerm, attaching user-declared
/// singularities (locations in [0,1], exponents in (-1,0)). Evaluation
/// errors at undeclared points surface lazily at quadrature time.
ForcingTerm to_forcing(const Ast& ast, std::vector<Singularity> singular_hints,
                       std::string label = "");

} // namespace distbeam::expr
