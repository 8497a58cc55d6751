#include "acmnp/expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace acmnp {

namespace detail {

struct Node {
    NodeKind kind = NodeKind::Constant;
    std::uint8_t op = 0;
    int index = 0;
    double value = 0.0;
    std::string name;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
    std::uint64_t id = 0;
    std::size_t hash = 0;
    mutable std::array<std::weak_ptr<const Node>, 3> dcache;
};

Expr wrap(std::shared_ptr<const Node> node) { return Expr(std::move(node)); }
const std::shared_ptr<const Node>& unwrap(const Expr& e) { return e.node_; }

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t structural_hash(const Node& n)
{
    std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
    h = hash_combine(h, n.op);
    h = hash_combine(h, static_cast<std::size_t>(n.index));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(n.value));
    h = hash_combine(h, std::hash<std::string>{}(n.name));
    h = hash_combine(h, n.a ? n.a->id : 0);
    h = hash_combine(h, n.b ? n.b->id : 0);
    return h;
}

bool structurally_equal(const Node& p, const Node& q)
{
    return p.kind == q.kind && p.op == q.op && p.index == q.index &&
           std::bit_cast<std::uint64_t>(p.value) == std::bit_cast<std::uint64_t>(q.value) &&
           p.name == q.name && p.a == q.a && p.b == q.b;
}

class InternTable {
public:
    std::shared_ptr<const Node> intern(Node&& proto)
    {
        proto.hash = structural_hash(proto);
        std::lock_guard lock(mutex_);
        auto [lo, hi] = table_.equal_range(proto.hash);
        for (auto it = lo; it != hi; ++it) {
            if (auto live = it->second.lock(); live && structurally_equal(*live, proto)) {
                return live;
            }
        }
        proto.id = next_id_++;
        const std::size_t h = proto.hash;
        auto node = std::make_shared<const Node>(std::move(proto));
        table_.emplace(h, node);
        if (table_.size() > sweep_at_) {
            std::erase_if(table_, [](const auto& kv) { return kv.second.expired(); });
            sweep_at_ = std::max<std::size_t>(1U << 16, 2 * table_.size());
        }
        return node;
    }

private:
    std::mutex mutex_;
    std::unordered_multimap<std::size_t, std::weak_ptr<const Node>> table_;
    std::size_t sweep_at_ = 1U << 16;
    std::uint64_t next_id_ = 1;
};

InternTable& intern_table()
{
    static InternTable table;
    return table;
}

std::mutex& cache_mutex(std::uint64_t id)
{
    static std::array<std::mutex, 64> stripes;
    return stripes[id % stripes.size()];
}

}  // namespace
}  // namespace detail

using detail::Node;

namespace {

Expr make(Node&& proto) { return detail::wrap(detail::intern_table().intern(std::move(proto))); }

const std::shared_ptr<const Node>& node_of(const Expr& e) { return detail::unwrap(e); }

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 1e9; }

// Value of f(v) if f is well defined at v, otherwise nullopt-like NaN.
double apply_unary(UnaryOp op, double v)
{
    switch (op) {
    case UnaryOp::Neg: return -v;
    case UnaryOp::Sin: return std::sin(v);
    case UnaryOp::Cos: return std::cos(v);
    case UnaryOp::Tan: return std::tan(v);
    case UnaryOp::Exp: return std::exp(v);
    case UnaryOp::Log: return v > 0.0 ? std::log(v) : std::nan("");
    case UnaryOp::Sqrt: return v >= 0.0 ? std::sqrt(v) : std::nan("");
    case UnaryOp::Sinh: return std::sinh(v);
    case UnaryOp::Cosh: return std::cosh(v);
    case UnaryOp::Tanh: return std::tanh(v);
    }
    return std::nan("");
}

double int_pow(double base, long n)
{
    const bool invert = n < 0;
    unsigned long k = static_cast<unsigned long>(invert ? -n : n);
    double result = 1.0;
    while (k != 0) {
        if (k & 1U) result *= base;
        base *= base;
        k >>= 1U;
    }
    return invert ? 1.0 / result : result;
}

double apply_binary(BinaryOp op, double a, double b)
{
    switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return b != 0.0 ? a / b : std::nan("");
    case BinaryOp::Pow:
        if (is_integer(b)) {
            if (a == 0.0 && b < 0.0) return std::nan("");
            return int_pow(a, static_cast<long>(b));
        }
        return a > 0.0 ? std::pow(a, b) : std::nan("");
    }
    return std::nan("");
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(double value) : Expr(constant(value)) {}

Expr Expr::constant(double value)
{
    Node n;
    n.kind = NodeKind::Constant;
    n.value = value == 0.0 ? 0.0 : value;  // fold -0
    return make(std::move(n));
}

Expr Expr::coordinate(int index)
{
    if (index < 0 || index > 2) throw std::invalid_argument("coordinate index must be 0, 1 or 2");
    Node n;
    n.kind = NodeKind::Coordinate;
    n.index = index;
    return make(std::move(n));
}

Expr Expr::parameter(std::string name)
{
    Node n;
    n.kind = NodeKind::Parameter;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr Expr::unary(UnaryOp op, const Expr& arg)
{
    if (arg.is_constant()) {
        const double v = apply_unary(op, arg.constant_value());
        if (std::isfinite(v)) return constant(v);
    }
    if (op == UnaryOp::Neg) {
        if (arg.kind() == NodeKind::Unary && arg.unary_op() == UnaryOp::Neg) return arg.child(0);
        if (arg.kind() == NodeKind::Binary && arg.binary_op() == BinaryOp::Sub) {
            return binary(BinaryOp::Sub, arg.child(1), arg.child(0));
        }
    }
    Node n;
    n.kind = NodeKind::Unary;
    n.op = static_cast<std::uint8_t>(op);
    n.a = node_of(arg);
    return make(std::move(n));
}

namespace {

bool is_neg(const Expr& e) { return e.kind() == NodeKind::Unary && e.unary_op() == UnaryOp::Neg; }

}  // namespace

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs)
{
    if (lhs.is_constant() && rhs.is_constant()) {
        const double v = apply_binary(op, lhs.constant_value(), rhs.constant_value());
        if (std::isfinite(v)) return constant(v);
    }
    switch (op) {
    case BinaryOp::Add:
        if (lhs.is_zero()) return rhs;
        if (rhs.is_zero()) return lhs;
        if (is_neg(rhs)) return binary(BinaryOp::Sub, lhs, rhs.child(0));
        if (is_neg(lhs)) return binary(BinaryOp::Sub, rhs, lhs.child(0));
        break;
    case BinaryOp::Sub:
        if (rhs.is_zero()) return lhs;
        if (lhs.is_zero()) return unary(UnaryOp::Neg, rhs);
        if (lhs.same(rhs)) return constant(0.0);
        if (is_neg(rhs)) return binary(BinaryOp::Add, lhs, rhs.child(0));
        break;
    case BinaryOp::Mul:
        if (lhs.is_zero() || rhs.is_zero()) return constant(0.0);
        if (lhs.is_one()) return rhs;
        if (rhs.is_one()) return lhs;
        if (rhs.is_constant()) return binary(BinaryOp::Mul, rhs, lhs);
        if (lhs.is_constant(-1.0)) return unary(UnaryOp::Neg, rhs);
        if (lhs.is_constant() && rhs.kind() == NodeKind::Binary && rhs.binary_op() == BinaryOp::Mul &&
            rhs.child(0).is_constant()) {
            return binary(BinaryOp::Mul, constant(lhs.constant_value() * rhs.child(0).constant_value()),
                          rhs.child(1));
        }
        if (is_neg(lhs)) return unary(UnaryOp::Neg, binary(BinaryOp::Mul, lhs.child(0), rhs));
        if (is_neg(rhs)) return unary(UnaryOp::Neg, binary(BinaryOp::Mul, lhs, rhs.child(0)));
        break;
    case BinaryOp::Div:
        if (rhs.is_one()) return lhs;
        if (lhs.is_zero()) return constant(0.0);
        if (rhs.is_constant(-1.0)) return unary(UnaryOp::Neg, lhs);
        if (is_neg(lhs)) return unary(UnaryOp::Neg, binary(BinaryOp::Div, lhs.child(0), rhs));
        break;
    case BinaryOp::Pow:
        if (rhs.is_zero()) return constant(1.0);
        if (rhs.is_one()) return lhs;
        if (lhs.is_one()) return constant(1.0);
        break;
    }
    Node n;
    n.kind = NodeKind::Binary;
    n.op = static_cast<std::uint8_t>(op);
    n.a = node_of(lhs);
    n.b = node_of(rhs);
    return make(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }

bool Expr::is_constant(double v) const { return node_->kind == NodeKind::Constant && node_->value == v; }

double Expr::constant_value() const
{
    if (node_->kind != NodeKind::Constant) throw std::logic_error("not a constant expression");
    return node_->value;
}

int Expr::coordinate_index() const
{
    if (node_->kind != NodeKind::Coordinate) throw std::logic_error("not a coordinate expression");
    return node_->index;
}

const std::string& Expr::parameter_name() const
{
    if (node_->kind != NodeKind::Parameter) throw std::logic_error("not a parameter expression");
    return node_->name;
}

UnaryOp Expr::unary_op() const
{
    if (node_->kind != NodeKind::Unary) throw std::logic_error("not a unary expression");
    return static_cast<UnaryOp>(node_->op);
}

BinaryOp Expr::binary_op() const
{
    if (node_->kind != NodeKind::Binary) throw std::logic_error("not a binary expression");
    return static_cast<BinaryOp>(node_->op);
}

int Expr::arity() const
{
    switch (node_->kind) {
    case NodeKind::Unary: return 1;
    case NodeKind::Binary: return 2;
    default: return 0;
    }
}

Expr Expr::child(int i) const
{
    if (i < 0 || i >= arity()) throw std::out_of_range("expression child index");
    return detail::wrap(i == 0 ? node_->a : node_->b);
}

std::uint64_t Expr::id() const { return node_->id; }

std::size_t Expr::dag_size() const
{
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->a) stack.push_back(n->a.get());
        if (n->b) stack.push_back(n->b.get());
    }
    return seen.size();
}


Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(UnaryOp::Neg, a); }
Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

Expr pow(const Expr& base, const Expr& exponent) { return Expr::binary(BinaryOp::Pow, base, exponent); }
Expr sin(const Expr& e) { return Expr::unary(UnaryOp::Sin, e); }
Expr cos(const Expr& e) { return Expr::unary(UnaryOp::Cos, e); }
Expr tan(const Expr& e) { return Expr::unary(UnaryOp::Tan, e); }
Expr exp(const Expr& e) { return Expr::unary(UnaryOp::Exp, e); }
Expr log(const Expr& e) { return Expr::unary(UnaryOp::Log, e); }
Expr sqrt(const Expr& e) { return Expr::unary(UnaryOp::Sqrt, e); }
Expr sinh(const Expr& e) { return Expr::unary(UnaryOp::Sinh, e); }
Expr cosh(const Expr& e) { return Expr::unary(UnaryOp::Cosh, e); }
Expr tanh(const Expr& e) { return Expr::unary(UnaryOp::Tanh, e); }
Expr square(const Expr& e) { return pow(e, Expr(2.0)); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr derive(const Expr& e, int coord);

Expr derive_uncached(const Expr& e, int coord)
{
    if (e.kind() == NodeKind::Unary) {
        const Expr u = e.child(0);
        const Expr du = derive(u, coord);
        if (du.is_zero()) return Expr(0.0);
        switch (e.unary_op()) {
        case UnaryOp::Neg: return -du;
        case UnaryOp::Sin: return cos(u) * du;
        case UnaryOp::Cos: return -(sin(u) * du);
        case UnaryOp::Tan: return du / square(cos(u));
        case UnaryOp::Exp: return e * du;
        case UnaryOp::Log: return du / u;
        case UnaryOp::Sqrt: return du / (Expr(2.0) * e);
        case UnaryOp::Sinh: return cosh(u) * du;
        case UnaryOp::Cosh: return sinh(u) * du;
        case UnaryOp::Tanh: return (Expr(1.0) - square(e)) * du;
        }
    }
    const Expr a = e.child(0);
    const Expr b = e.child(1);
    const Expr da = derive(a, coord);
    const Expr db = derive(b, coord);
    switch (e.binary_op()) {
    case BinaryOp::Add: return da + db;
    case BinaryOp::Sub: return da - db;
    case BinaryOp::Mul: return da * b + a * db;
    case BinaryOp::Div: return (da - e * db) / b;
    case BinaryOp::Pow:
        if (b.is_constant()) {
            const double n = b.constant_value();
            return Expr(n) * pow(a, Expr(n - 1.0)) * da;
        }
        return e * (db * log(a) + b * da / a);
    }
    throw std::logic_error("unreachable expression kind");
}

Expr derive(const Expr& e, int coord)
{
    switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Parameter: return Expr(0.0);
    case NodeKind::Coordinate: return Expr(e.coordinate_index() == coord ? 1.0 : 0.0);
    default: break;
    }
    const Node* n = e.raw();
    {
        std::lock_guard lock(detail::cache_mutex(n->id));
        if (auto hit = n->dcache[static_cast<std::size_t>(coord)].lock()) return detail::wrap(std::move(hit));
    }
    Expr result = derive_uncached(e, coord);
    {
        std::lock_guard lock(detail::cache_mutex(n->id));
        n->dcache[static_cast<std::size_t>(coord)] = node_of(result);
    }
    return result;
}

}  // namespace

Expr differentiate(const Expr& e, int coord)
{
    if (coord < 0 || coord > 2) throw std::invalid_argument("differentiation coordinate must be 0, 1 or 2");
    return derive(e, coord);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

const char* unary_name(UnaryOp op)
{
    switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
    }
    return "?";
}

const char* binary_symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return " + ";
    case BinaryOp::Sub: return " - ";
    case BinaryOp::Mul: return " * ";
    case BinaryOp::Div: return " / ";
    case BinaryOp::Pow: return "^";
    }
    return "?";
}

class Printer {
public:
    Printer(const CoordNames& coords, std::size_t budget) : coords_(coords), budget_(budget) {}

    void print(const Expr& e)
    {
        if (full()) return;
        switch (e.kind()) {
        case NodeKind::Constant: {
            const double v = e.constant_value();
            if (v < 0.0) {
                emit("(-");
                emit(format_number(-v));
                emit(")");
            } else {
                emit(format_number(v));
            }
            return;
        }
        case NodeKind::Coordinate: emit(coords_[static_cast<std::size_t>(e.coordinate_index())]); return;
        case NodeKind::Parameter: emit(e.parameter_name()); return;
        case NodeKind::Unary:
            if (e.unary_op() == UnaryOp::Neg) {
                emit("(-");
                print(e.child(0));
                emit(")");
            } else {
                emit(unary_name(e.unary_op()));
                emit("(");
                print(e.child(0));
                emit(")");
            }
            return;
        case NodeKind::Binary:
            emit("(");
            print(e.child(0));
            emit(binary_symbol(e.binary_op()));
            print(e.child(1));
            emit(")");
            return;
        }
    }

    std::string take()
    {
        if (full()) out_ += "...";
        return std::move(out_);
    }

private:
    [[nodiscard]] bool full() const { return budget_ != 0 && out_.size() >= budget_; }

    void emit(std::string_view s)
    {
        if (full()) return;
        out_.append(s);
        if (full()) out_.resize(budget_);
    }

    const CoordNames& coords_;
    std::size_t budget_;
    std::string out_;
};

}  // namespace

std::string to_string(const Expr& e, const CoordNames& coords, std::size_t max_chars)
{
    Printer p(coords, max_chars);
    p.print(e);
    return p.take();
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset)
{
}

namespace {

const std::unordered_map<std::string_view, UnaryOp>& function_table()
{
    static const std::unordered_map<std::string_view, UnaryOp> table{
        {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan},
        {"exp", UnaryOp::Exp},   {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
        {"sinh", UnaryOp::Sinh}, {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh},
    };
    return table;
}

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> coords, std::span<const std::string> params)
        : src_(src), coords_(coords), params_(params)
    {
    }

    Expr parse()
    {
        Expr e = sum();
        skip_ws();
        if (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ')') throw ParseError(ParseError::Kind::Syntax, pos_, "unbalanced ')'");
            if (!is_token_char(c)) {
                throw ParseError(ParseError::Kind::Lexical, pos_, std::string("unknown symbol '") + c + "'");
            }
            throw ParseError(ParseError::Kind::Syntax, pos_, "unexpected token");
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr sum()
    {
        Expr lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + product();
            } else if (accept('-')) {
                lhs = lhs - product();
            } else {
                return lhs;
            }
        }
    }

    Expr product()
    {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * unary();
            } else if (accept('/')) {
                lhs = lhs / unary();
            } else {
                return lhs;
            }
        }
    }

    Expr unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        if (accept('^')) return pow(base, unary());
        return base;
    }

    static bool is_token_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) ||
               std::string_view("_.()+-*/^,").find(c) != std::string_view::npos;
    }

    Expr primary()
    {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(ParseError::Kind::Syntax, pos_, "unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = sum();
            if (!accept(')')) throw ParseError(ParseError::Kind::Syntax, pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (c == ')' || c == '*' || c == '/' || c == '^' || c == '+' || c == '-' || c == ',') {
            throw ParseError(ParseError::Kind::Syntax, pos_, std::string("unexpected '") + c + "'");
        }
        throw ParseError(ParseError::Kind::Lexical, pos_, std::string("unknown symbol '") + c + "'");
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size()) {
            throw ParseError(ParseError::Kind::Lexical, start, "malformed number '" + text + "'");
        }
        return Expr(v);
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        for (std::size_t i = 0; i < coords_.size() && i < 3; ++i) {
            if (coords_[i] == name) return Expr::coordinate(static_cast<int>(i));
        }
        for (const auto& p : params_) {
            if (p == name) return Expr::parameter(std::string(name));
        }
        if (const auto it = function_table().find(name); it != function_table().end()) {
            if (!accept('(')) {
                throw ParseError(ParseError::Kind::Syntax, pos_, "expected '(' after " + std::string(name));
            }
            Expr arg = sum();
            if (!accept(')')) throw ParseError(ParseError::Kind::Syntax, pos_, "expected ')'");
            return Expr::unary(it->second, arg);
        }
        if (name == "pi") return Expr(std::numbers::pi);
        throw ParseError(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::span<const std::string> coords_;
    std::span<const std::string> params_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view src, std::span<const std::string> coords, std::span<const std::string> params)
{
    return Parser(src, coords, params).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

EvaluationError::EvaluationError(Kind kind, const std::string& message, std::string subexpression)
    : std::runtime_error(message + (subexpression.empty() ? "" : " in " + subexpression)),
      kind_(kind),
      subexpression_(std::move(subexpression))
{
}

namespace {

enum Op : std::uint8_t {
    kConst,
    kCoord,
    kNeg,
    kSin,
    kCos,
    kTan,
    kExp,
    kLog,
    kSqrt,
    kSinh,
    kCosh,
    kTanh,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPowInt,
    kPowReal,
};

Op unary_opcode(UnaryOp op)
{
    switch (op) {
    case UnaryOp::Neg: return kNeg;
    case UnaryOp::Sin: return kSin;
    case UnaryOp::Cos: return kCos;
    case UnaryOp::Tan: return kTan;
    case UnaryOp::Exp: return kExp;
    case UnaryOp::Log: return kLog;
    case UnaryOp::Sqrt: return kSqrt;
    case UnaryOp::Sinh: return kSinh;
    case UnaryOp::Cosh: return kCosh;
    case UnaryOp::Tanh: return kTanh;
    }
    return kNeg;
}

}  // namespace

Program::Program(std::span<const Expr> outputs, const ParamTable& params)
{
    std::unordered_map<const Node*, std::int32_t> slot;
    slot.reserve(1024);
    // Iterative post-order so deep DAGs do not exhaust the stack.
    struct Frame {
        Expr e;
        bool expanded;
    };
    std::vector<Frame> stack;
    for (const Expr& out : outputs) {
        stack.push_back({out, false});
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            const Node* n = f.e.raw();
            if (slot.contains(n)) continue;
            if (!f.expanded && f.e.arity() > 0) {
                stack.push_back({f.e, true});
                for (int i = f.e.arity() - 1; i >= 0; --i) {
                    Expr c = f.e.child(i);
                    if (!slot.contains(c.raw())) stack.push_back({c, false});
                }
                continue;
            }
            Instr ins{kConst, -1, -1, 0.0, 0};
            switch (f.e.kind()) {
            case NodeKind::Constant: ins.value = f.e.constant_value(); break;
            case NodeKind::Coordinate:
                ins.op = kCoord;
                ins.a = f.e.coordinate_index();
                break;
            case NodeKind::Parameter: {
                const auto it = params.find(f.e.parameter_name());
                if (it == params.end()) {
                    throw EvaluationError(EvaluationError::Kind::UnboundParameter,
                                          "unbound parameter '" + f.e.parameter_name() + "'", f.e.parameter_name());
                }
                ins.value = it->second;
                break;
            }
            case NodeKind::Unary:
                ins.op = unary_opcode(f.e.unary_op());
                ins.a = slot.at(f.e.child(0).raw());
                break;
            case NodeKind::Binary: {
                ins.a = slot.at(f.e.child(0).raw());
                ins.b = slot.at(f.e.child(1).raw());
                switch (f.e.binary_op()) {
                case BinaryOp::Add: ins.op = kAdd; break;
                case BinaryOp::Sub: ins.op = kSub; break;
                case BinaryOp::Mul: ins.op = kMul; break;
                case BinaryOp::Div: ins.op = kDiv; break;
                case BinaryOp::Pow: {
                    const Expr ex = f.e.child(1);
                    if (ex.is_constant() && is_integer(ex.constant_value())) {
                        ins.op = kPowInt;
                        ins.ipow = static_cast<std::int32_t>(ex.constant_value());
                    } else {
                        ins.op = kPowReal;
                    }
                    break;
                }
                }
                break;
            }
            }
            slot.emplace(n, static_cast<std::int32_t>(code_.size()));
            code_.push_back(ins);
            sources_.push_back(f.e);
        }
        outputs_.push_back(slot.at(out.raw()));
    }
}

void Program::fail(std::size_t instr, const std::string& what) const
{
    throw EvaluationError(EvaluationError::Kind::Domain, what, to_string(sources_[instr], default_coord_names(), 400));
}

void Program::run(const Point& p, std::span<double> out, std::vector<double>& scratch) const
{
    scratch.resize(code_.size());
    double* v = scratch.data();
    const std::size_t n = code_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Instr& ins = code_[i];
        double r = 0.0;
        switch (ins.op) {
        case kConst: r = ins.value; break;
        case kCoord: r = p[static_cast<std::size_t>(ins.a)]; break;
        case kNeg: r = -v[ins.a]; break;
        case kSin: r = std::sin(v[ins.a]); break;
        case kCos: r = std::cos(v[ins.a]); break;
        case kTan: r = std::tan(v[ins.a]); break;
        case kExp: r = std::exp(v[ins.a]); break;
        case kLog:
            if (!(v[ins.a] > 0.0)) fail(i, "domain error: log of non-positive value");
            r = std::log(v[ins.a]);
            break;
        case kSqrt:
            if (!(v[ins.a] >= 0.0)) fail(i, "domain error: sqrt of negative value");
            r = std::sqrt(v[ins.a]);
            break;
        case kSinh: r = std::sinh(v[ins.a]); break;
        case kCosh: r = std::cosh(v[ins.a]); break;
        case kTanh: r = std::tanh(v[ins.a]); break;
        case kAdd: r = v[ins.a] + v[ins.b]; break;
        case kSub: r = v[ins.a] - v[ins.b]; break;
        case kMul: r = v[ins.a] * v[ins.b]; break;
        case kDiv:
            if (v[ins.b] == 0.0) fail(i, "domain error: division by zero");
            r = v[ins.a] / v[ins.b];
            break;
        case kPowInt:
            if (ins.ipow < 0 && v[ins.a] == 0.0) fail(i, "domain error: zero to a negative power");
            r = int_pow(v[ins.a], ins.ipow);
            break;
        case kPowReal:
            if (!(v[ins.a] > 0.0)) fail(i, "domain error: non-positive base with non-integer exponent");
            r = std::pow(v[ins.a], v[ins.b]);
            break;
        default: break;
        }
        if (!std::isfinite(r)) fail(i, "domain error: non-finite value");
        v[i] = r;
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = v[outputs_[k]];
}

std::vector<double> Program::run(const Point& p) const
{
    std::vector<double> out(outputs_.size());
    std::vector<double> scratch;
    run(p, out, scratch);
    return out;
}

double evaluate(const Expr& e, const Point& p, const ParamTable& params)
{
    const Program prog(std::span<const Expr>(&e, 1), params);
    return prog.run(p)[0];
}

}  // namespace acmnp
