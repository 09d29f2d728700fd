#include "distbeam/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace distbeam::expr {
namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    return std::make_shared<Node>(Node{NodeKind::Number, v, Fn::Sin, nullptr, nullptr});
}
NodePtr make_var() {
    return std::make_shared<Node>(Node{NodeKind::Var, 0.0, Fn::Sin, nullptr, nullptr});
}
NodePtr make_unary(NodeKind k, NodePtr a) {
    return std::make_shared<Node>(Node{k, 0.0, Fn::Sin, std::move(a), nullptr});
}
NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
    return std::make_shared<Node>(Node{k, 0.0, Fn::Sin, std::move(a), std::move(b)});
}
NodePtr make_call(Fn fn, NodePtr a) {
    return std::make_shared<Node>(Node{NodeKind::Call, 0.0, fn, std::move(a), nullptr});
}

const std::map<std::string, Fn, std::less<>> kFunctions = {
    {"sin", Fn::Sin},   {"cos", Fn::Cos}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
    {"exp", Fn::Exp},   {"sqrt", Fn::Sqrt}, {"abs", Fn::Abs}};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_space();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip_space();
        if (pos_ < src_.size())
            throw ParseError("unexpected trailing input '" + std::string(1, src_[pos_]) + "'",
                             pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos_);
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(NodeKind::Add, lhs, term());
            else if (accept('-'))
                lhs = make_binary(NodeKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(NodeKind::Mul, lhs, factor());
            else if (accept('/'))
                lhs = make_binary(NodeKind::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        NodePtr base = unary();
        if (accept('^')) return make_binary(NodeKind::Pow, base, factor());
        return base;
    }

    NodePtr unary() {
        if (accept('-')) return make_unary(NodeKind::Neg, unary());
        return atom();
    }

    NodePtr atom() {
        skip_space();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')', "to close parenthesis");
            return e;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double value = 0.0;
        auto [next, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc())
            throw ParseError("malformed number", pos_);
        pos_ = static_cast<std::size_t>(next - src_.data());
        return make_number(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make_var();
        auto it = kFunctions.find(name);
        if (it == kFunctions.end())
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        expect('(', "after function name");
        NodePtr arg = expr();
        expect(')', "to close call");
        return make_call(it->second, arg);
    }
};

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case NodeKind::Number: return n.number;
        case NodeKind::Var: return x;
        case NodeKind::Neg: return -eval_node(*n.a, x);
        case NodeKind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case NodeKind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case NodeKind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case NodeKind::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
        case NodeKind::Pow: return std::pow(eval_node(*n.a, x), eval_node(*n.b, x));
        case NodeKind::Call: {
            const double v = eval_node(*n.a, x);
            switch (n.fn) {
                case Fn::Sin: return std::sin(v);
                case Fn::Cos: return std::cos(v);
                case Fn::Sinh: return std::sinh(v);
                case Fn::Cosh: return std::cosh(v);
                case Fn::Exp: return std::exp(v);
                case Fn::Sqrt: return std::sqrt(v);
                case Fn::Abs: return std::abs(v);
            }
        }
    }
    return 0.0;
}

const char* fn_name(Fn fn) {
    switch (fn) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Sinh: return "sinh";
        case Fn::Cosh: return "cosh";
        case Fn::Exp: return "exp";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
    }
    return "?";
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Number: {
            char buf[32];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n.number);
            out.append(buf, end);
            return;
        }
        case NodeKind::Var: out += 'x'; return;
        case NodeKind::Neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            return;
        case NodeKind::Call:
            out += fn_name(n.fn);
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        default: {
            const char op = n.kind == NodeKind::Add   ? '+'
                            : n.kind == NodeKind::Sub ? '-'
                            : n.kind == NodeKind::Mul ? '*'
                            : n.kind == NodeKind::Div ? '/'
                                                      : '^';
            out += '(';
            print_node(*n.a, out);
            out += op;
            print_node(*n.b, out);
            out += ')';
            return;
        }
    }
}

bool scan_singular(const Node& n) {
    if (n.kind == NodeKind::Div) return true;
    if (n.kind == NodeKind::Call && n.fn == Fn::Sqrt) return true;
    if (n.a && scan_singular(*n.a)) return true;
    if (n.b && scan_singular(*n.b)) return true;
    return false;
}

} // namespace

Ast Ast::parse(std::string_view src) {
    if (src.empty()) throw ParseError("empty expression", 0);
    return Ast(Parser(src).run());
}

double Ast::eval(double x) const { return eval_node(*root_, x); }

std::string Ast::pretty() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Ast::needs_singularity_scan() const { return scan_singular(*root_); }

ForcingTerm to_forcing(const Ast& ast, std::vector<Singularity> singular_hints,
                       std::string label) {
    if (label.empty()) label = ast.pretty();
    NodePtr root = ast.root();
    return ForcingTerm([root](double x) { return eval_node(*root, x); },
                       std::move(singular_hints), std::move(label));
}

} // namespace distbeam::expr
