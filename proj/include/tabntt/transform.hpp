#pragma once
// transform.hpp - the recursive multidimensional NTT over Z/P with
// twiddle factors, dispatching leaves to either direct evaluation or the
// CRT lookup path.

#include <vector>

#include "tabntt/tables.hpp"

namespace tabntt::transform {

using planner::TransformPlan;
using tables::TableSet;

using FieldVector = std::vector<u64>;

enum class LeafMode { direct_leaves, lookup_leaves };

class Engine {
public:
    Engine(const TransformPlan& plan, const TableSet& tables)
        : plan_(plan), tables_(tables) {}

    // x_hat[k] = sum_j x[j] * omega^(jk) mod P, exactly; both leaf modes
    // produce identical output. Throws std::length_error on a size
    // mismatch.
    FieldVector forward(const FieldVector& x, LeafMode mode, OpCounts& counters) const;

    // Inverse transform: forward with the inverse root (realized as an
    // output index reversal) followed by scaling with n^{-1} mod P.
    FieldVector inverse(const FieldVector& y, LeafMode mode, OpCounts& counters) const;

    // Element-wise tabular multiply mod P.
    FieldVector pointwise_multiply(const FieldVector& a, const FieldVector& b,
                                   OpCounts& counters) const;

    const TransformPlan& plan() const { return plan_; }
    const TableSet& tables() const { return tables_; }

private:
    struct Impl;

    const TransformPlan& plan_;
    const TableSet& tables_;
};

// Exact m-point DFT of x via m^2 tabular multiplies against powers of
// root (order m mod P). Standalone form of the engine's direct leaf.
FieldVector base_case_direct(const FieldVector& x, u64 root,
                             const tables::DigitProductTables& digit,
                             OpCounts& counters);

} // namespace tabntt::transform
