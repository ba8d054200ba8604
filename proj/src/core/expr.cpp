#include "core/expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "core/errors.hpp"

namespace aoi {

// --- VarSignature ---

VarSignature::VarSignature(std::vector<VarDecl> vars) : vars_(std::move(vars)) {
    for (int i = 0; i < static_cast<int>(vars_.size()); ++i) {
        const auto& v = vars_[static_cast<std::size_t>(i)];
        if (!valid_identifier(v.name))
            throw std::invalid_argument("invalid variable identifier: '" + v.name + "'");
        if (!index_.emplace(v.name, i).second)
            throw std::invalid_argument("duplicate variable identifier: '" + v.name + "'");
    }
}

std::optional<int> VarSignature::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool VarSignature::has_var_of(Type t) const {
    for (const auto& v : vars_)
        if (v.type == t) return true;
    return false;
}

std::vector<int> VarSignature::indexes_of(Type t) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (vars_[static_cast<std::size_t>(i)].type == t) out.push_back(i);
    return out;
}

bool VarSignature::valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto head = static_cast<unsigned char>(name[0]);
    if (!std::isalpha(head) && name[0] != '_') return false;
    for (std::size_t i = 1; i < name.size(); ++i) {
        auto c = static_cast<unsigned char>(name[i]);
        if (!std::isalnum(c) && name[i] != '_' && name[i] != '.') return false;
    }
    return true;
}

// --- Expr factories ---

namespace {

ExprPtr finish(Expr&& node) { return std::make_shared<const Expr>(std::move(node)); }

void require_type(const ExprPtr& e, Type t, const char* what) {
    if (!e) throw std::invalid_argument(std::string(what) + ": null child");
    if (e->type() != t)
        throw std::invalid_argument(std::string(what) + ": expected " + type_name(t) + " operand");
}

} // namespace

ExprPtr Expr::var(const VarSignature& sig, int index) {
    const auto& decl = sig.at(index);
    return var(decl.name, index, decl.type);
}

ExprPtr Expr::var(std::string name, int index, Type type) {
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = type == Type::Boolean ? ExprKind::BoolVar : ExprKind::NumVar;
    n->name_ = std::move(name);
    n->index_ = index;
    return n;
}

ExprPtr Expr::constant(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("constant: non-finite value");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Const;
    n->value_ = v;
    return n;
}

ExprPtr Expr::negation(ExprPtr child) {
    require_type(child, Type::Boolean, "negation");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Not;
    n->size_ = child->size() + 1;
    n->depth_ = child->depth() + 1;
    n->left_ = std::move(child);
    return n;
}

void Expr::fill_binary(Expr& n, ExprPtr l, ExprPtr r) {
    n.size_ = l->size() + r->size() + 1;
    n.depth_ = std::max(l->depth(), r->depth()) + 1;
    n.left_ = std::move(l);
    n.right_ = std::move(r);
}

ExprPtr Expr::num_bin(NumBinOp op, ExprPtr l, ExprPtr r) {
    require_type(l, Type::Number, "arithmetic operator");
    require_type(r, Type::Number, "arithmetic operator");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::NumBin;
    n->op_ = static_cast<std::uint8_t>(op);
    fill_binary(*n, std::move(l), std::move(r));
    return n;
}

ExprPtr Expr::cmp(CmpOp op, ExprPtr l, ExprPtr r) {
    require_type(l, Type::Number, "comparison");
    require_type(r, Type::Number, "comparison");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::Cmp;
    n->op_ = static_cast<std::uint8_t>(op);
    fill_binary(*n, std::move(l), std::move(r));
    return n;
}

ExprPtr Expr::bool_bin(BoolBinOp op, ExprPtr l, ExprPtr r) {
    require_type(l, Type::Boolean, "boolean connective");
    require_type(r, Type::Boolean, "boolean connective");
    std::shared_ptr<Expr> n(new Expr());
    n->kind_ = ExprKind::BoolBin;
    n->op_ = static_cast<std::uint8_t>(op);
    fill_binary(*n, std::move(l), std::move(r));
    return n;
}

// --- printing ---

std::string op_symbol(NumBinOp op) {
    switch (op) {
    case NumBinOp::Add: return "+";
    case NumBinOp::Sub: return "-";
    case NumBinOp::Mul: return "*";
    case NumBinOp::Div: return "/";
    case NumBinOp::Mod: return "%";
    }
    return "?";
}

std::string op_symbol(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

std::string op_symbol(BoolBinOp op) {
    switch (op) {
    case BoolBinOp::And: return "&&";
    case BoolBinOp::Or: return "||";
    case BoolBinOp::Xor: return "^";
    case BoolBinOp::Implies: return "->";
    case BoolBinOp::Equiv: return "<=>";
    }
    return "?";
}

static void print_into(const Expr& e, std::string& out) {
    switch (e.kind()) {
    case ExprKind::BoolVar:
    case ExprKind::NumVar:
        out += e.var_name();
        return;
    case ExprKind::Const:
        out += number_text(e.const_value());
        return;
    case ExprKind::Not:
        out += "(!";
        print_into(*e.left(), out);
        out += ")";
        return;
    case ExprKind::NumBin:
    case ExprKind::Cmp:
    case ExprKind::BoolBin: {
        out += "(";
        print_into(*e.left(), out);
        out += " ";
        if (e.kind() == ExprKind::NumBin) out += op_symbol(e.num_op());
        else if (e.kind() == ExprKind::Cmp) out += op_symbol(e.cmp_op());
        else out += op_symbol(e.bool_op());
        out += " ";
        print_into(*e.right(), out);
        out += ")";
        return;
    }
    }
}

std::string print(const Expr& e) {
    std::string out;
    out.reserve(static_cast<std::size_t>(e.size()) * 6);
    print_into(e, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ExprKind::BoolVar:
    case ExprKind::NumVar:
        return a.var_index() == b.var_index() && a.var_name() == b.var_name();
    case ExprKind::Const:
        return std::bit_cast<std::uint64_t>(a.const_value()) ==
               std::bit_cast<std::uint64_t>(b.const_value());
    case ExprKind::Not:
        return structurally_equal(*a.left(), *b.left());
    case ExprKind::NumBin:
    case ExprKind::Cmp:
    case ExprKind::BoolBin:
        if (a.kind() == ExprKind::NumBin && a.num_op() != b.num_op()) return false;
        if (a.kind() == ExprKind::Cmp && a.cmp_op() != b.cmp_op()) return false;
        if (a.kind() == ExprKind::BoolBin && a.bool_op() != b.bool_op()) return false;
        return structurally_equal(*a.left(), *b.left()) &&
               structurally_equal(*a.right(), *b.right());
    }
    return false;
}

// --- evaluation ---

namespace {

struct EvalCtx {
    std::span<const Value> vars;
    int precision;
};

std::optional<bool> eval_bool(const Expr& e, const EvalCtx& ctx);

std::optional<double> eval_num(const Expr& e, const EvalCtx& ctx) {
    switch (e.kind()) {
    case ExprKind::Const:
        return e.const_value();
    case ExprKind::NumVar: {
        const int i = e.var_index();
        if (i < 0 || i >= static_cast<int>(ctx.vars.size()) ||
            value_type(ctx.vars[static_cast<std::size_t>(i)]) != Type::Number)
            throw std::invalid_argument("evaluate: unbound numeric variable '" + e.var_name() + "'");
        return std::get<double>(ctx.vars[static_cast<std::size_t>(i)]);
    }
    case ExprKind::NumBin: {
        auto l = eval_num(*e.left(), ctx);
        auto r = eval_num(*e.right(), ctx);
        if (!l || !r) return std::nullopt;
        switch (e.num_op()) {
        case NumBinOp::Add: return *l + *r;
        case NumBinOp::Sub: return *l - *r;
        case NumBinOp::Mul: return *l * *r;
        case NumBinOp::Div:
            if (*r == 0.0) return std::nullopt;
            return *l / *r;
        case NumBinOp::Mod:
            if (*r == 0.0) return std::nullopt;
            return std::fmod(*l, *r); // truncated, sign of the dividend
        }
        return std::nullopt;
    }
    default:
        throw std::invalid_argument("evaluate: boolean node in numeric position");
    }
}

// Rounding applies only where it is meaningful; non-finite intermediates
// flow through and compare by IEEE rules.
double cmp_key(double v, int precision) {
    return std::isfinite(v) ? round_value(v, precision) : v;
}

std::optional<bool> eval_bool(const Expr& e, const EvalCtx& ctx) {
    switch (e.kind()) {
    case ExprKind::BoolVar: {
        const int i = e.var_index();
        if (i < 0 || i >= static_cast<int>(ctx.vars.size()) ||
            value_type(ctx.vars[static_cast<std::size_t>(i)]) != Type::Boolean)
            throw std::invalid_argument("evaluate: unbound boolean variable '" + e.var_name() + "'");
        return std::get<bool>(ctx.vars[static_cast<std::size_t>(i)]);
    }
    case ExprKind::Not: {
        auto v = eval_bool(*e.left(), ctx);
        if (!v) return std::nullopt;
        return !*v;
    }
    case ExprKind::Cmp: {
        auto l = eval_num(*e.left(), ctx);
        auto r = eval_num(*e.right(), ctx);
        if (!l || !r) return std::nullopt;
        switch (e.cmp_op()) {
        case CmpOp::Eq: return cmp_key(*l, ctx.precision) == cmp_key(*r, ctx.precision);
        case CmpOp::Ne: return cmp_key(*l, ctx.precision) != cmp_key(*r, ctx.precision);
        case CmpOp::Lt: return *l < *r;
        case CmpOp::Le: return *l <= *r;
        case CmpOp::Gt: return *l > *r;
        case CmpOp::Ge: return *l >= *r;
        }
        return std::nullopt;
    }
    case ExprKind::BoolBin: {
        // no short-circuit: both sides always evaluated
        auto l = eval_bool(*e.left(), ctx);
        auto r = eval_bool(*e.right(), ctx);
        if (!l || !r) return std::nullopt;
        switch (e.bool_op()) {
        case BoolBinOp::And: return *l && *r;
        case BoolBinOp::Or: return *l || *r;
        case BoolBinOp::Xor: return *l != *r;
        case BoolBinOp::Implies: return !*l || *r;
        case BoolBinOp::Equiv: return *l == *r;
        }
        return std::nullopt;
    }
    default:
        throw std::invalid_argument("evaluate: numeric node in boolean position");
    }
}

} // namespace

std::optional<bool> evaluate(const Expr& e, std::span<const Value> vars, int precision) {
    if (e.type() != Type::Boolean)
        throw std::invalid_argument("evaluate: expression is not boolean-typed");
    return eval_bool(e, EvalCtx{vars, precision});
}

// --- tree utilities ---

void collect_nodes(const ExprPtr& root, std::vector<ExprPtr>& out) {
    out.push_back(root);
    if (root->left()) collect_nodes(root->left(), out);
    if (root->right()) collect_nodes(root->right(), out);
}

namespace {

ExprPtr rebuild(const ExprPtr& node, int& remaining, const ExprPtr& replacement) {
    if (remaining == 0) {
        remaining = -1;
        return replacement;
    }
    --remaining;
    if (!node->left()) return node; // leaf, untouched

    ExprPtr l = rebuild(node->left(), remaining, replacement);
    ExprPtr r = node->right();
    if (remaining >= 0 && r) r = rebuild(r, remaining, replacement);

    if (l == node->left() && r == node->right()) return node;
    switch (node->kind()) {
    case ExprKind::Not: return Expr::negation(std::move(l));
    case ExprKind::NumBin: return Expr::num_bin(node->num_op(), std::move(l), std::move(r));
    case ExprKind::Cmp: return Expr::cmp(node->cmp_op(), std::move(l), std::move(r));
    case ExprKind::BoolBin: return Expr::bool_bin(node->bool_op(), std::move(l), std::move(r));
    default: return node;
    }
}

} // namespace

ExprPtr replace_at(const ExprPtr& root, int target, ExprPtr replacement) {
    if (target < 0 || target >= root->size())
        throw std::invalid_argument("replace_at: node index out of range");
    int remaining = target;
    return rebuild(root, remaining, replacement);
}

static void collect_vars(const Expr& e, std::vector<int>& out) {
    if (e.kind() == ExprKind::BoolVar || e.kind() == ExprKind::NumVar) {
        out.push_back(e.var_index());
        return;
    }
    if (e.left()) collect_vars(*e.left(), out);
    if (e.right()) collect_vars(*e.right(), out);
}

std::vector<int> referenced_vars(const Expr& e) {
    std::vector<int> out;
    collect_vars(e, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ExprPtr> bool_subexpressions(const ExprPtr& root) {
    std::vector<ExprPtr> nodes;
    collect_nodes(root, nodes);
    std::vector<ExprPtr> out;
    std::unordered_set<std::string> seen;
    for (const auto& n : nodes) {
        if (n->type() != Type::Boolean) continue;
        if (seen.insert(print(*n)).second) out.push_back(n);
    }
    return out;
}

} // namespace aoi
