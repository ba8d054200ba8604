#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "core/value.hpp"

namespace aoi {

struct VarDecl {
    std::string name;
    Type type;
    bool operator==(const VarDecl&) const = default;
};

// Ordered list of the variables an assertion may reference. Names must be
// unique and conform to the identifier grammar ([A-Za-z_][A-Za-z0-9_.]*).
class VarSignature {
public:
    VarSignature() = default;
    explicit VarSignature(std::vector<VarDecl> vars);

    const std::vector<VarDecl>& vars() const { return vars_; }
    int size() const { return static_cast<int>(vars_.size()); }
    const VarDecl& at(int i) const { return vars_.at(static_cast<std::size_t>(i)); }
    std::optional<int> index_of(std::string_view name) const;
    bool has_var_of(Type t) const;
    std::vector<int> indexes_of(Type t) const;
    bool operator==(const VarSignature& other) const { return vars_ == other.vars_; }

    static bool valid_identifier(std::string_view name);

private:
    std::vector<VarDecl> vars_;
    std::unordered_map<std::string, int> index_;
};

enum class ExprKind { BoolVar, NumVar, Const, Not, NumBin, Cmp, BoolBin };
enum class NumBinOp { Add, Sub, Mul, Div, Mod };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolBinOp { And, Or, Xor, Implies, Equiv };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable, well-typed expression tree. Nodes are shared freely between
// trees, so crossover and mutation only copy the spine they rebuild.
class Expr {
public:
    static ExprPtr var(const VarSignature& sig, int index);
    static ExprPtr var(std::string name, int index, Type type);
    static ExprPtr constant(double v); // finite only
    static ExprPtr negation(ExprPtr child);
    static ExprPtr num_bin(NumBinOp op, ExprPtr l, ExprPtr r);
    static ExprPtr cmp(CmpOp op, ExprPtr l, ExprPtr r);
    static ExprPtr bool_bin(BoolBinOp op, ExprPtr l, ExprPtr r);

    ExprKind kind() const { return kind_; }
    Type type() const {
        return (kind_ == ExprKind::NumVar || kind_ == ExprKind::Const || kind_ == ExprKind::NumBin)
                   ? Type::Number
                   : Type::Boolean;
    }
    int size() const { return size_; }
    int depth() const { return depth_; }
    const ExprPtr& left() const { return left_; }
    const ExprPtr& right() const { return right_; }

    const std::string& var_name() const { return name_; }
    int var_index() const { return index_; }
    double const_value() const { return value_; }
    NumBinOp num_op() const { return static_cast<NumBinOp>(op_); }
    CmpOp cmp_op() const { return static_cast<CmpOp>(op_); }
    BoolBinOp bool_op() const { return static_cast<BoolBinOp>(op_); }

private:
    Expr() = default;
    static void fill_binary(Expr& n, ExprPtr l, ExprPtr r);

    ExprKind kind_ = ExprKind::Const;
    std::uint8_t op_ = 0;
    double value_ = 0.0;
    std::string name_;
    int index_ = -1;
    ExprPtr left_, right_;
    int size_ = 1;
    int depth_ = 1;
};

// Fully parenthesized canonical text; round-trips through parse().
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

// Structural identity (same shape, operators, variable indexes; constants
// compared bit-for-bit).
bool structurally_equal(const Expr& a, const Expr& b);

// Parses assertion text over a signature. The result is well-typed and
// boolean-rooted. Throws ParseError / TypeError.
ExprPtr parse(std::string_view text, const VarSignature& sig);

// Evaluates over values aligned to the signature the expression was built
// against. Both operands of every operator are always evaluated, so an
// evaluation error surfaces regardless of operand order. Returns nullopt on
// division or modulo by zero. Numeric ==/!= compare after rounding to
// `precision` decimal digits.
std::optional<bool> evaluate(const Expr& e, std::span<const Value> vars, int precision = 9);

std::string op_symbol(NumBinOp op);
std::string op_symbol(CmpOp op);
std::string op_symbol(BoolBinOp op);

// --- tree utilities (preorder indexing) ---

// Preorder list of all nodes; out[0] is the root.
void collect_nodes(const ExprPtr& root, std::vector<ExprPtr>& out);

// New tree with the node at preorder index `target` replaced. Untouched
// branches are shared with the original.
ExprPtr replace_at(const ExprPtr& root, int target, ExprPtr replacement);

// Sorted unique indexes of the variables referenced by e.
std::vector<int> referenced_vars(const Expr& e);

// All boolean-typed subexpressions in preorder (includes the root when it is
// boolean), deduplicated by printed form.
std::vector<ExprPtr> bool_subexpressions(const ExprPtr& root);

} // namespace aoi
