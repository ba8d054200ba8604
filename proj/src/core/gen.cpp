#include "core/gen.hpp"

#include <stdexcept>

namespace aoi {

namespace {

ExprPtr num_terminal(const VarSignature& sig, Rng& rng) {
    auto nums = sig.indexes_of(Type::Number);
    if (!nums.empty() && rng.chance(0.7))
        return Expr::var(sig, nums[static_cast<std::size_t>(rng.uniform_int(
                                  static_cast<int>(nums.size())))]);
    return Expr::constant(kConstantPool[rng.uniform_int(4)]);
}

ExprPtr bool_terminal(const VarSignature& sig, Rng& rng) {
    auto bools = sig.indexes_of(Type::Boolean);
    return Expr::var(sig, bools[static_cast<std::size_t>(rng.uniform_int(
                              static_cast<int>(bools.size())))]);
}

ExprPtr gen(const VarSignature& sig, Type want, int depth, bool full, Rng& rng) {
    if (want == Type::Number) {
        if (depth <= 1 || (!full && rng.chance(0.35))) return num_terminal(sig, rng);
        auto op = static_cast<NumBinOp>(rng.uniform_int(5));
        return Expr::num_bin(op, gen(sig, Type::Number, depth - 1, full, rng),
                             gen(sig, Type::Number, depth - 1, full, rng));
    }

    const bool has_bool_var = sig.has_var_of(Type::Boolean);
    if (depth <= 1) {
        if (!has_bool_var)
            throw std::invalid_argument("random_tree: boolean tree needs depth >= 2 here");
        return bool_terminal(sig, rng);
    }
    if (!full && has_bool_var && rng.chance(0.2)) return bool_terminal(sig, rng);

    // Comparisons are the workhorse over numeric states; keep connectives and
    // negation available without letting NOT chains dominate.
    double r = rng.uniform();
    if (r < 0.55 || (depth == 2 && !has_bool_var)) {
        auto op = static_cast<CmpOp>(rng.uniform_int(6));
        return Expr::cmp(op, gen(sig, Type::Number, depth - 1, full, rng),
                         gen(sig, Type::Number, depth - 1, full, rng));
    }
    if (r < 0.85) {
        auto op = static_cast<BoolBinOp>(rng.uniform_int(5));
        return Expr::bool_bin(op, gen(sig, Type::Boolean, depth - 1, full, rng),
                              gen(sig, Type::Boolean, depth - 1, full, rng));
    }
    return Expr::negation(gen(sig, Type::Boolean, depth - 1, full, rng));
}

} // namespace

int min_bool_depth(const VarSignature& sig) {
    return sig.has_var_of(Type::Boolean) ? 1 : 2;
}

ExprPtr random_tree(const VarSignature& sig, Type want, int depth_budget, bool full, Rng& rng) {
    if (want == Type::Boolean && depth_budget < min_bool_depth(sig))
        throw std::invalid_argument("random_tree: depth budget too small for a boolean tree");
    if (depth_budget < 1) throw std::invalid_argument("random_tree: depth budget must be >= 1");
    return gen(sig, want, depth_budget, full, rng);
}

} // namespace aoi
