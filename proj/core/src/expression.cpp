#include "normkam/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "normkam/errors.hpp"

namespace normkam {

struct Expression::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> a, b;

    double eval(double x) const
    {
        switch (kind) {
        case Kind::Number:
            return value;
        case Kind::Var:
            return x;
        case Kind::Neg:
            return -a->eval(x);
        case Kind::Add:
            return a->eval(x) + b->eval(x);
        case Kind::Sub:
            return a->eval(x) - b->eval(x);
        case Kind::Mul:
            return a->eval(x) * b->eval(x);
        case Kind::Div:
            return a->eval(x) / b->eval(x);
        case Kind::Pow: {
            // Small integer exponents stay exact for negative bases.
            const double e = b->eval(x);
            const double base = a->eval(x);
            if (e == std::floor(e) && std::abs(e) <= 64) {
                double r = 1.0;
                for (int i = 0; i < static_cast<int>(std::abs(e)); ++i) {
                    r *= base;
                }
                return e < 0 ? 1.0 / r : r;
            }
            return std::pow(base, e);
        }
        case Kind::Call:
            return fn(a->eval(x));
        }
        return 0.0;
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr)
{
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr number(double v)
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
}

struct Function {
    const char* name;
    double (*fn)(double);
};

const Function functions[] = {
    {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
    {"tan", [](double x) { return std::tan(x); }},   {"atan", [](double x) { return std::atan(x); }},
    {"arctan", [](double x) { return std::atan(x); }}, {"tanh", [](double x) { return std::tanh(x); }},
    {"exp", [](double x) { return std::exp(x); }},   {"log", [](double x) { return std::log(x); }},
    {"sqrt", [](double x) { return std::sqrt(x); }}, {"abs", [](double x) { return std::abs(x); }},
};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr n = sum();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected character");
        }
        return n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    char var_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("expression \"" + s_ + "\": " + what + " at position " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum()
    {
        NodePtr n = product();
        while (true) {
            if (accept('+')) {
                n = make(Node::Kind::Add, n, product());
            } else if (accept('-')) {
                n = make(Node::Kind::Sub, n, product());
            } else {
                return n;
            }
        }
    }

    NodePtr product()
    {
        NodePtr n = unary();
        while (true) {
            if (accept('*')) {
                n = make(Node::Kind::Mul, n, unary());
            } else if (accept('/')) {
                n = make(Node::Kind::Div, n, unary());
            } else {
                return n;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            return make(Node::Kind::Neg, unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    // Right associative; binds tighter than unary minus on its left.
    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) {
            return make(Node::Kind::Pow, base, unary());
        }
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size()) {
            fail("unexpected end");
        }
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr n = sum();
            if (!accept(')')) {
                fail("missing ')'");
            }
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) {
                fail("bad number");
            }
            pos_ += static_cast<std::size_t>(end - begin);
            return number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "pi") {
                return number(std::numbers::pi);
            }
            if (name == "x" || name == "t") {
                if (var_ != 0 && var_ != name[0]) {
                    fail("expression mixes variables x and t");
                }
                var_ = name[0];
                return make(Node::Kind::Var);
            }
            for (const auto& f : functions) {
                if (name == f.name) {
                    if (!accept('(')) {
                        fail("expected '(' after " + name);
                    }
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::Call;
                    n->fn = f.fn;
                    n->a = sum();
                    if (!accept(')')) {
                        fail("missing ')'");
                    }
                    return n;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character");
    }
};

}  // namespace

Expression::Expression() : root_(number(0.0)), text_("0") {}

Expression Expression::parse(const std::string& text)
{
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = text;
    return e;
}

Expression Expression::constant(double c)
{
    Expression e;
    e.root_ = number(c);
    e.text_ = std::to_string(c);
    return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

bool Expression::is_zero_constant() const
{
    return root_->kind == Node::Kind::Number && root_->value == 0.0;
}

}  // namespace normkam
