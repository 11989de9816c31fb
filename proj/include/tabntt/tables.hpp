#pragma once
// tables.hpp - preprocessed lookup tables: digit-product tables for
// constant-operation multiplication mod P, CRT forward/combine tables,
// and full base-case DFT tables per leaf prime.

#include <vector>

#include "tabntt/opcounts.hpp"
#include "tabntt/planner.hpp"

namespace tabntt::tables {

using planner::TransformPlan;

// tables[l][a][b] = (a * b * R^l) mod P for l in 0..2d-1, a,b in 0..R-1.
struct DigitProductTables {
    u64 P = 0;
    u64 R = 2;
    u32 r = 1;
    u32 d = 1;          // digits per operand, ceil(bitlen(P)/r)
    u32 num_tables = 2; // 2d
    u64 reduce_terms = 2; // next_pow2(d*d), ladder width of the final reduce
    std::vector<u64> entries; // [l][a][b] flattened

    u64 at(u32 l, u64 a, u64 b) const {
        return entries[(static_cast<u64>(l) * R + a) * R + b];
    }
};

// Per (digit position, prime) maps digit value -> (digit * R_F^k) mod q_j;
// drives the division-free CRT decomposition.
struct ForwardTables {
    u32 r_F = 1;
    u64 R_F = 2;
    u32 d_F = 1;
    u64 reduce_terms = 1; // next_pow2(d_F), per-channel ladder width
    std::vector<u64> position_entries;    // entries stored per position
    std::vector<std::vector<u64>> values; // [k][j * position_entries[k] + x]

    u64 at(u32 k, u32 j, u64 x) const {
        return values[k][j * position_entries[k] + x];
    }
};

// Per leaf size mu and prime q_j: q_j^mu packed input tuples, each entry
// holding the mu output residues of the leaf DFT on that tuple.
struct DftTables {
    std::vector<u64> sizes; // leaf sizes with a table set, ascending
    // tables[si][j] is a flat vector of q_j^mu * mu residues
    std::vector<std::vector<std::vector<u32>>> tables;

    int size_index(u64 mu) const {
        for (size_t i = 0; i < sizes.size(); ++i)
            if (sizes[i] == mu) return static_cast<int>(i);
        return -1;
    }
};

// CRT recombination: basis[j][res] = res * M_j * (M_j^{-1} mod q_j) mod M,
// plus reduce-to-P tables mapping base-R_redP digits of a value < M to
// (digit * R_redP^k) mod P.
struct CombineTables {
    u64 M = 0;
    std::vector<std::vector<u64>> basis; // [j][res], res < q_j
    u32 r_redP = 1;
    u64 R_redP = 2;
    u32 d_redP = 1;
    std::vector<u64> red_position_entries;
    std::vector<std::vector<u64>> red_values; // [k][x]
    u64 combine_terms = 2; // next_pow2(Z), ladder width of the mod-M reduce
    u64 reduce_terms = 2;  // next_pow2(d_redP), ladder width of the mod-P reduce
};

struct LeafTables {
    std::vector<u64> leaf_primes;
    ForwardTables forward;
    DftTables dft;
    CombineTables combine;
};

// One coefficient as residues across the leaf primes.
struct ResidueTuple {
    std::vector<u64> residues; // aligned with leaf_primes
};

// Everything the transform engine reads at run time. Immutable after
// build; concurrent reads are safe.
struct TableSet {
    DigitProductTables digit;
    LeafTables leaf;
    std::vector<u64> twiddle_powers; // omega^t mod P for t in 0..n-1
};

// v mod P via the halving ladder: log2(terms) compare-and-conditional-
// subtract steps from P*terms/2 down to P, then one final conditional
// subtract. pre: v < P*terms, terms a power of two.
inline u128 reduce_chain_wide(u128 v, u128 P, u64 terms, OpCounts& counters) {
    if (terms == 0 || (terms & (terms - 1)) != 0)
        throw std::invalid_argument("reduce_chain: terms must be a power of two");
    if (v >= P * terms)
        throw std::invalid_argument("reduce_chain: v >= P * terms");
    u64 steps = static_cast<u64>(log2_exact(terms)) + 1;
    counters.compares += steps;
    counters.addmod += steps; // branchless conditional subtracts
    for (u64 t = terms / 2; t >= 1; t /= 2) {
        u128 threshold = P * t;
        u128 take = v >= threshold ? threshold : 0;
        v -= take;
    }
    u128 final_take = v >= P ? P : 0;
    v -= final_take;
    return v;
}

inline u64 reduce_chain(u64 v, u64 P, u64 terms, OpCounts& counters) {
    if (terms == 0 || (terms & (terms - 1)) != 0)
        throw std::invalid_argument("reduce_chain: terms must be a power of two");
    u128 full = static_cast<u128>(P) * terms;
    if (static_cast<u128>(v) >= full)
        throw std::invalid_argument("reduce_chain: v >= P * terms");
    if (full > static_cast<u128>(UINT64_MAX))
        return static_cast<u64>(reduce_chain_wide(v, P, terms, counters));
    u64 steps = static_cast<u64>(log2_exact(terms)) + 1;
    counters.compares += steps;
    counters.addmod += steps;
    for (u64 t = terms / 2; t >= 1; t /= 2) {
        u64 threshold = P * t;
        u64 take = v >= threshold ? threshold : 0;
        v -= take;
    }
    u64 final_take = v >= P ? P : 0;
    v -= final_take;
    return v;
}

DigitProductTables build_digit_product_tables(u64 P, u64 R,
                                              u64 memory_cap_bits = u64{1} << 33);

// (a*b) mod P using only digit-table reads, additions and the reduce
// chain; the counter increments are independent of the operand values.
inline u64 tabular_mulmod(u64 a, u64 b, const DigitProductTables& t,
                          OpCounts& counters) {
    if (a >= t.P || b >= t.P)
        throw std::invalid_argument("tabular_mulmod: operands must be < P");
    counters.mulmod += 1;

    const u64 mask = t.R - 1;
    const u64 R = t.R;
    const u64* entries = t.entries.data();
    u64 sum = 0;
    for (u32 j = 0; j < t.d; ++j) {
        u64 aj = (a >> (j * t.r)) & mask;
        for (u32 k = 0; k < t.d; ++k) {
            u64 bk = (b >> (k * t.r)) & mask;
            sum += entries[((static_cast<u64>(j + k)) * R + aj) * R + bk];
        }
    }
    counters.table_reads += static_cast<u64>(t.d) * t.d;
    counters.addmod += static_cast<u64>(t.d) * t.d - 1;
    return reduce_chain(sum, t.P, t.reduce_terms, counters);
}

LeafTables build_leaf_tables(const TransformPlan& plan,
                             u64 memory_cap_bits = u64{1} << 33);

TableSet build_tables(const TransformPlan& plan,
                      u64 memory_cap_bits = u64{1} << 33);

// Pointer forms of the CRT channel operations; the transform's leaf
// path runs on flat buffers to stay allocation-free.
inline void crt_decompose_into(u64 c, const LeafTables& t, u64* out,
                               OpCounts& counters) {
    const ForwardTables& fwd = t.forward;
    const u64 mask = fwd.R_F - 1;
    for (size_t j = 0; j < t.leaf_primes.size(); ++j) {
        u64 sum = 0;
        for (u32 k = 0; k < fwd.d_F; ++k) {
            u64 digit = (c >> (k * fwd.r_F)) & mask;
            sum += fwd.values[k][j * fwd.position_entries[k] + digit];
        }
        counters.table_reads += fwd.d_F;
        counters.addmod += fwd.d_F - 1;
        out[j] = reduce_chain(sum, t.leaf_primes[j], fwd.reduce_terms, counters);
    }
}

inline u64 crt_combine_ptr(const u64* residues, const LeafTables& t,
                           OpCounts& counters) {
    const CombineTables& comb = t.combine;
    u128 acc = 0;
    for (size_t j = 0; j < t.leaf_primes.size(); ++j)
        acc += comb.basis[j][residues[j]];
    counters.table_reads += t.leaf_primes.size();
    counters.addmod += t.leaf_primes.size() - 1;
    return static_cast<u64>(
        reduce_chain_wide(acc, comb.M, comb.combine_terms, counters));
}

// v in [0, M) -> v mod P via the reduce-to-P digit tables.
inline u64 combine_reduce_to_P(u64 v, u64 P, const CombineTables& t,
                               OpCounts& counters) {
    const u64 mask = t.R_redP - 1;
    u64 sum = 0;
    for (u32 k = 0; k < t.d_redP; ++k) {
        u64 digit = (v >> (k * t.r_redP)) & mask;
        sum += t.red_values[k][digit];
    }
    counters.table_reads += t.d_redP;
    counters.addmod += t.d_redP - 1;
    return reduce_chain(sum, P, t.reduce_terms, counters);
}

// residues[j] = c mod q_j by forward-table reads, small additions and a
// reduce chain per channel. pre: 0 <= c < P.
ResidueTuple crt_decompose(u64 c, const LeafTables& t, OpCounts& counters);

// The unique v in [0, M) with v = residues[j] (mod q_j); basis-table
// reads and additions followed by one reduce chain mod M. The caller
// reduces mod P afterwards (see combine_reduce_to_P).
u64 crt_combine(const ResidueTuple& r, const LeafTables& t, OpCounts& counters);

// Size-mu leaf DFT over all channels: one dft-table read per leaf prime.
// inputs.size() == mu; returns mu output tuples.
std::vector<ResidueTuple> leaf_dft_lookup(const std::vector<ResidueTuple>& inputs,
                                          u64 mu, const LeafTables& t,
                                          OpCounts& counters);

// Exact bit count of the built tables; must match the plan's
// total_table_bits.
u64 total_table_bits(const TableSet& tables, const TransformPlan& plan);

} // namespace tabntt::tables
