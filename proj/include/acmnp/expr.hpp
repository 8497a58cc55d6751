#pragma once

// Closed-form scalar expressions over a three-dimensional chart.
//
// Expressions are immutable, hash-consed DAG nodes: structurally identical
// subtrees share one node, so pointer identity is structural identity.
// Construction folds constants and drops trivial identities (x*0, x*1,
// x+0, x^1); nothing else is simplified.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace acmnp {

using Point = std::array<double, 3>;
using ParamTable = std::map<std::string, double, std::less<>>;
using CoordNames = std::array<std::string, 3>;

enum class NodeKind : std::uint8_t { Constant, Coordinate, Parameter, Unary, Binary };

enum class UnaryOp : std::uint8_t { Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

class Expr;

namespace detail {
struct Node;
Expr wrap(std::shared_ptr<const Node> node);
const std::shared_ptr<const Node>& unwrap(const Expr& e);
}  // namespace detail

class Expr {
public:
    Expr();
    Expr(double value);  // NOLINT(google-explicit-constructor): numeric literals mix freely

    static Expr constant(double value);
    static Expr coordinate(int index);
    static Expr parameter(std::string name);
    static Expr unary(UnaryOp op, const Expr& arg);
    static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

    [[nodiscard]] NodeKind kind() const;
    [[nodiscard]] bool is_constant() const { return kind() == NodeKind::Constant; }
    [[nodiscard]] bool is_constant(double v) const;
    [[nodiscard]] bool is_zero() const { return is_constant(0.0); }
    [[nodiscard]] bool is_one() const { return is_constant(1.0); }
    [[nodiscard]] double constant_value() const;
    [[nodiscard]] int coordinate_index() const;
    [[nodiscard]] const std::string& parameter_name() const;
    [[nodiscard]] UnaryOp unary_op() const;
    [[nodiscard]] BinaryOp binary_op() const;
    [[nodiscard]] int arity() const;
    [[nodiscard]] Expr child(int i) const;

    // Unique per live node; stable for the lifetime of the node.
    [[nodiscard]] std::uint64_t id() const;
    [[nodiscard]] bool same(const Expr& other) const { return node_ == other.node_; }

    // Number of distinct nodes reachable from this expression.
    [[nodiscard]] std::size_t dag_size() const;

    [[nodiscard]] const detail::Node* raw() const { return node_.get(); }

private:
    explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    friend Expr detail::wrap(std::shared_ptr<const detail::Node> node);
    friend const std::shared_ptr<const detail::Node>& detail::unwrap(const Expr& e);

    std::shared_ptr<const detail::Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr& operator+=(Expr& a, const Expr& b);
Expr& operator-=(Expr& a, const Expr& b);
Expr& operator*=(Expr& a, const Expr& b);

Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);
Expr square(const Expr& e);

/// Exact partial derivative with respect to chart coordinate `coord` (0..2).
/// Results are memoized per node while the derivative is alive.
Expr differentiate(const Expr& e, int coord);

inline const CoordNames& default_coord_names()
{
    static const CoordNames names{"x", "y", "z"};
    return names;
}

/// Canonical printer. Output re-parses to the same DAG. Printing is tree
/// expansion, so `max_chars` (0 = unlimited) truncates large derived
/// expressions with a trailing "...".
std::string to_string(const Expr& e, const CoordNames& coords = default_coord_names(),
                      std::size_t max_chars = 0);

class ParseError : public std::runtime_error {
public:
    enum class Kind { Lexical, Syntax, UnknownIdentifier };

    ParseError(Kind kind, std::size_t offset, const std::string& message);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// Grammar (whitespace-insensitive):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right-associative)
///   primary := number | name | func '(' sum ')' | '(' sum ')'
/// `pi` is a built-in constant; coordinate names take precedence over
/// parameter names.
Expr parse_expression(std::string_view src, std::span<const std::string> coords,
                      std::span<const std::string> params = {});

class EvaluationError : public std::runtime_error {
public:
    enum class Kind { Domain, UnboundParameter };

    EvaluationError(Kind kind, const std::string& message, std::string subexpression);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const std::string& subexpression() const { return subexpression_; }

private:
    Kind kind_;
    std::string subexpression_;
};

/// A set of expressions compiled to a flat instruction tape. Shared
/// subexpressions are evaluated once per point. Immutable after
/// construction, so `run` may be called concurrently.
class Program {
public:
    Program() = default;
    explicit Program(std::span<const Expr> outputs, const ParamTable& params = {});

    [[nodiscard]] std::size_t num_outputs() const { return outputs_.size(); }
    [[nodiscard]] std::size_t num_instructions() const { return code_.size(); }

    void run(const Point& p, std::span<double> out, std::vector<double>& scratch) const;
    [[nodiscard]] std::vector<double> run(const Point& p) const;

private:
    struct Instr {
        std::uint8_t op;
        std::int32_t a;
        std::int32_t b;
        double value;
        std::int32_t ipow;
    };

    [[noreturn]] void fail(std::size_t instr, const std::string& what) const;

    std::vector<Instr> code_;
    std::vector<std::int32_t> outputs_;
    std::vector<Expr> sources_;  // node for each instruction, for diagnostics
};

/// Single-expression convenience wrapper around Program.
double evaluate(const Expr& e, const Point& p, const ParamTable& params = {});

}  // namespace acmnp
