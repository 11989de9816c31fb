#pragma once
// planner.hpp - selects every parameter of a preprocessed transform from a
// target size: base-case size m, the recursion tree, the field prime and
// root, digit bases, and the leaf-prime set, under an exact table-bit budget.

#include <vector>

#include "tabntt/common.hpp"

namespace tabntt::planner {

struct TreeNode {
    u64 size = 0;   // product of the factors below this node
    int left = -1;  // -1 on leaves
    int right = -1;
};

struct BudgetReport {
    u64 m_candidate = 0;
    u64 Z_count = 0;
    u64 total_table_bits = 0;
    bool fits = false;
    std::vector<u64> leaf_primes;
    u64 prime_product = 0;
};

struct TransformPlan {
    u64 target_n = 0;
    u64 length_n = 0; // realized transform length
    u64 field_prime_P = 0;
    u64 root_omega = 0;
    u64 inv_root = 0;
    u64 inv_n = 0;

    u32 digit_base_bits = 1; // r
    u64 digit_base_R = 2;    // R = 2^r, base of the digit-product tables
    u32 linnik_L = 5;
    bool linnik_ok = true;

    u64 base_size_m = 2;
    u64 tree_k = 0;  // the tree has 2^k leaf factors
    u64 z_split = 0; // count of m-sized factors; the rest are m+1

    std::vector<TreeNode> tree;   // tree[0] is the root
    std::vector<u64> tree_levels; // node sizes in level order, leaves last
    std::vector<u64> leaf_sizes;  // distinct leaf factor sizes, ascending

    std::vector<u64> leaf_primes; // q_j, ascending from 2
    u64 prime_product_M = 0;

    u64 budget_bits = 0;
    u64 total_table_bits = 0;
    bool fits = false;

    u32 leaf_digit_bits = 1;   // digit size used by the CRT forward tables
    u32 reduce_digit_bits = 1; // digit size of the combine reduce-to-P tables

    u64 mult_base = 1; // largest power of two B with B^2 * n < P
    u64 seed = 0;

    u64 max_leaf_size() const { return leaf_sizes.back(); }
};

struct PlannerConfig {
    u64 budget_bits = 0;     // 0 -> max(2^20, realized_n)
    u32 linnik_L = 5;
    u64 seed = 0;
    u64 forced_m = 0;        // 0 -> budget search picks the largest fitting m
    u32 mult_base_bits = 0;  // require P > 2^(2*mult_base_bits) * n when > 0
    u64 memory_cap_entries = u64{1} << 27; // hard cap on total table entries
};

struct TreeChoice {
    u64 realized_n = 0;
    u64 k = 0;
    u64 z = 0;
    std::vector<TreeNode> tree;
    std::vector<u64> tree_levels;
    std::vector<u64> leaf_sizes;
};

// Exact geometry of every table family for one parameter choice. All
// sizes are exact sums over entries, no asymptotics.
struct TableGeometry {
    u64 P = 0;
    u32 p_bits = 0;
    u32 r = 1;       // digit-product base bits
    u32 d = 1;       // ceil(p_bits / r)
    std::vector<u64> leaf_primes;
    u64 M = 0;
    u32 m_bits = 0;  // bitlen(M - 1)
    std::vector<u64> leaf_sizes;
    u32 r_F = 1;     // forward-table digit bits
    u32 d_F = 1;
    u32 r_redP = 1;  // combine reduce-to-P digit bits
    u32 d_redP = 1;

    u64 R() const { return u64{1} << r; }

    u64 digit_table_bits() const;
    u64 forward_table_bits() const;
    u64 dft_table_bits() const;
    u64 combine_table_bits() const;
    u64 total_bits() const;
    u64 total_entries() const;

    // Modeled operation count of one lookup-mode leaf of size mu
    // (decompose + dft read + combine), used to pick digit sizes.
    u64 modeled_leaf_ops(u64 mu, u64 Z) const;
};

// r = max(1, round(p/4)): the P^(1/4) digit-base reading.
u32 default_digit_bits(u32 p_bits);

// Smallest prefix of 2,3,5,... whose product strictly exceeds bound.
// Throws capacity_error if the product would have to exceed 2^62.
std::vector<u64> select_leaf_primes(u128 bound, u64* product_out = nullptr);

// Largest m >= 2 whose exact table total fits budget_bits; falls back
// to 2 when nothing fits. pre: target_n >= 4, budget_bits >= 2^10.
u64 choose_base_size(u64 target_n, u64 budget_bits);

// Leaf-prime selection plus exact table-bit totals for one (m, P).
BudgetReport budget_check(u64 m, u64 P, u64 budget_bits = u64{1} << 20);

// Realized length: smallest (m+1)^(2^k - z) * m^z >= target_n, with k
// minimal and z found by binary search; factor multiset arranged into a
// balanced-product split tree. Throws std::invalid_argument if
// target_n < m^2.
TreeChoice choose_tree(u64 target_n, u64 m);

// Deterministic tree reconstruction from stored (m, k, z); used by the
// table-file loader.
TreeChoice rebuild_tree_choice(u64 m, u64 k, u64 z);

TransformPlan make_plan(u64 target_n, u64 budget_bits = 0, u64 seed = 0);
TransformPlan make_plan_cfg(u64 target_n, const PlannerConfig& cfg);

// Plan able to multiply two operands of the given bit lengths: picks the
// multiplication digit base and a field prime with enough headroom.
TransformPlan plan_for_multiply(u64 a_bits, u64 b_bits, u64 budget_bits = 0,
                                u64 seed = 0);

// Geometry actually used by a plan (shared with the table builder so the
// reported total matches the built tables bit for bit).
TableGeometry plan_geometry(const TransformPlan& plan);

// The paper-formula diagnostic m = log n / (log log n)^2; reported only.
double paper_m_diagnostic(u64 n);

} // namespace tabntt::planner
