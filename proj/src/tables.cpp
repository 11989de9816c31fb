// tables.cpp - builders and runtime paths for the digit-product,
// forward, dft and combine lookup tables.

#include "tabntt/tables.hpp"

#include <algorithm>

namespace tabntt::tables {

// ============================================================================
// Digit-product tables
// ============================================================================

DigitProductTables build_digit_product_tables(u64 P, u64 R, u64 memory_cap_bits) {
    if (P < 2) throw std::invalid_argument("digit tables: P must be prime");
    if (R < 2 || (R & (R - 1)) != 0)
        throw std::invalid_argument("digit tables: R must be a power of two >= 2");

    DigitProductTables t;
    t.P = P;
    t.R = R;
    t.r = static_cast<u32>(log2_exact(R));
    t.d = static_cast<u32>(ceil_div(bit_width_u64(P), t.r));
    t.num_tables = 2 * t.d;
    t.reduce_terms = next_pow2(static_cast<u64>(t.d) * t.d);

    u64 entry_count = sat_mul(sat_mul(t.num_tables, R), R);
    if (entry_count >= memory_cap_bits / 64)
        throw budget_error("digit tables exceed the memory cap");

    t.entries.resize(entry_count);
    u64 weight = 1 % P; // R^l mod P
    for (u32 l = 0; l < t.num_tables; ++l) {
        for (u64 a = 0; a < R; ++a) {
            u64 aw = mul_mod(a % P, weight, P);
            u64* row = &t.entries[(static_cast<u64>(l) * R + a) * R];
            for (u64 b = 0; b < R; ++b) row[b] = mul_mod(aw, b % P, P);
        }
        weight = mul_mod(weight, R % P, P);
    }
    return t;
}

// ============================================================================
// Leaf tables
// ============================================================================

namespace {

u64 position_entry_count(u64 max_value, u64 radix, u32 position) {
    u64 scale = 1;
    for (u32 i = 0; i < position; ++i) scale = sat_mul(scale, radix);
    return std::min(radix, max_value / scale + 1);
}

} // namespace

LeafTables build_leaf_tables(const TransformPlan& plan, u64 memory_cap_bits) {
    LeafTables t;
    t.leaf_primes = plan.leaf_primes;
    const u64 P = plan.field_prime_P;
    const u64 Z = plan.leaf_primes.size();
    const u64 cap_entries = memory_cap_bits / 64;

    // forward tables: digit value -> digit * R_F^k mod q_j
    ForwardTables& fwd = t.forward;
    fwd.r_F = plan.leaf_digit_bits;
    fwd.R_F = u64{1} << fwd.r_F;
    fwd.d_F = static_cast<u32>(ceil_div(bit_width_u64(P), fwd.r_F));
    fwd.reduce_terms = next_pow2(fwd.d_F);
    fwd.position_entries.resize(fwd.d_F);
    fwd.values.resize(fwd.d_F);
    for (u32 k = 0; k < fwd.d_F; ++k) {
        u64 entries = position_entry_count(P - 1, fwd.R_F, k);
        fwd.position_entries[k] = entries;
        fwd.values[k].resize(entries * Z);
        for (u64 j = 0; j < Z; ++j) {
            u64 q = plan.leaf_primes[j];
            u64 weight = 1 % q; // R_F^k mod q
            for (u32 i = 0; i < k; ++i) weight = mul_mod(weight, fwd.R_F % q, q);
            for (u64 x = 0; x < entries; ++x)
                fwd.values[k][j * entries + x] = mul_mod(x % q, weight, q);
        }
    }

    // dft tables: one table set per leaf size present in the tree
    DftTables& dft = t.dft;
    dft.sizes = plan.leaf_sizes;
    dft.tables.resize(dft.sizes.size());
    for (size_t si = 0; si < dft.sizes.size(); ++si) {
        const u64 mu = dft.sizes[si];
        const u64 leaf_root = pow_mod(plan.root_omega, plan.length_n / mu, P);
        // mod-P twiddle matrix of the leaf DFT
        std::vector<u64> W(mu * mu);
        for (u64 i = 0; i < mu; ++i)
            for (u64 k = 0; k < mu; ++k)
                W[i * mu + k] = pow_mod(leaf_root, (i * k) % mu, P);

        dft.tables[si].resize(Z);
        for (u64 j = 0; j < Z; ++j) {
            u64 q = plan.leaf_primes[j];
            u64 tuples = sat_pow(q, mu);
            if (sat_mul(tuples, mu) >= cap_entries)
                throw budget_error("dft tables exceed the memory cap");
            std::vector<u64> Wq(mu * mu);
            for (u64 e = 0; e < mu * mu; ++e) Wq[e] = W[e] % q;

            std::vector<u32>& table = dft.tables[si][j];
            table.resize(tuples * mu);
            std::vector<u64> digits(mu);
            for (u64 idx = 0; idx < tuples; ++idx) {
                // mixed-radix unpack, most-significant digit = position 0
                u64 rest = idx;
                for (u64 i = mu; i-- > 0;) {
                    digits[i] = rest % q;
                    rest /= q;
                }
                for (u64 k = 0; k < mu; ++k) {
                    u64 acc = 0;
                    for (u64 i = 0; i < mu; ++i)
                        acc += digits[i] * Wq[i * mu + k];
                    table[idx * mu + k] = static_cast<u32>(acc % q);
                }
            }
        }
    }

    // combine tables: CRT basis contributions mod M plus reduce-to-P
    CombineTables& comb = t.combine;
    comb.M = plan.prime_product_M;
    comb.combine_terms = next_pow2(Z);
    comb.basis.resize(Z);
    for (u64 j = 0; j < Z; ++j) {
        u64 q = plan.leaf_primes[j];
        u64 Mj = comb.M / q;
        u64 inv = inv_mod_prime(Mj % q, q);
        u128 Bj = static_cast<u128>(Mj) * inv % comb.M;
        comb.basis[j].resize(q);
        for (u64 res = 0; res < q; ++res)
            comb.basis[j][res] = static_cast<u64>(res * Bj % comb.M);
    }
    comb.r_redP = plan.reduce_digit_bits;
    comb.R_redP = u64{1} << comb.r_redP;
    comb.d_redP = static_cast<u32>(ceil_div(bit_width_u64(comb.M - 1), comb.r_redP));
    comb.reduce_terms = next_pow2(comb.d_redP);
    comb.red_position_entries.resize(comb.d_redP);
    comb.red_values.resize(comb.d_redP);
    for (u32 k = 0; k < comb.d_redP; ++k) {
        u64 entries = position_entry_count(comb.M - 1, comb.R_redP, k);
        comb.red_position_entries[k] = entries;
        comb.red_values[k].resize(entries);
        u64 weight = 1 % P; // R_redP^k mod P
        for (u32 i = 0; i < k; ++i) weight = mul_mod(weight, comb.R_redP % P, P);
        for (u64 x = 0; x < entries; ++x)
            comb.red_values[k][x] = mul_mod(x % P, weight, P);
    }
    return t;
}

TableSet build_tables(const TransformPlan& plan, u64 memory_cap_bits) {
    TableSet set;
    set.digit = build_digit_product_tables(plan.field_prime_P, plan.digit_base_R,
                                           memory_cap_bits);
    set.leaf = build_leaf_tables(plan, memory_cap_bits);
    set.twiddle_powers.resize(plan.length_n);
    u64 w = 1 % plan.field_prime_P;
    for (u64 i = 0; i < plan.length_n; ++i) {
        set.twiddle_powers[i] = w;
        w = mul_mod(w, plan.root_omega, plan.field_prime_P);
    }
    return set;
}

// ============================================================================
// Runtime leaf paths
// ============================================================================

ResidueTuple crt_decompose(u64 c, const LeafTables& t, OpCounts& counters) {
    ResidueTuple out;
    out.residues.resize(t.leaf_primes.size());
    crt_decompose_into(c, t, out.residues.data(), counters);
    return out;
}

u64 crt_combine(const ResidueTuple& r, const LeafTables& t, OpCounts& counters) {
    if (r.residues.size() != t.leaf_primes.size())
        throw std::invalid_argument("crt_combine: residue count mismatch");
    return crt_combine_ptr(r.residues.data(), t, counters);
}

std::vector<ResidueTuple> leaf_dft_lookup(const std::vector<ResidueTuple>& inputs,
                                          u64 mu, const LeafTables& t,
                                          OpCounts& counters) {
    if (inputs.size() != mu)
        throw std::invalid_argument("leaf_dft_lookup: input length != mu");
    int si = t.dft.size_index(mu);
    if (si < 0)
        throw std::invalid_argument("leaf_dft_lookup: no table set for this size");

    const u64 Z = t.leaf_primes.size();
    std::vector<ResidueTuple> out(mu);
    for (u64 k = 0; k < mu; ++k) out[k].residues.resize(Z);

    for (u64 j = 0; j < Z; ++j) {
        u64 q = t.leaf_primes[j];
        u64 idx = 0;
        for (u64 i = 0; i < mu; ++i) idx = idx * q + inputs[i].residues[j];
        const std::vector<u32>& table = t.dft.tables[si][j];
        counters.table_reads += 1; // one entry holding all mu outputs
        for (u64 k = 0; k < mu; ++k)
            out[k].residues[j] = table[idx * mu + k];
    }
    return out;
}

// ============================================================================
// Size accounting
// ============================================================================

u64 total_table_bits(const TableSet& tables, const TransformPlan& plan) {
    const u64 P = plan.field_prime_P;
    u64 p_bits = bit_width_u64(P - 1);
    u64 bits = tables.digit.entries.size() * p_bits;

    u64 sum_q_bits = 0;
    for (u64 q : plan.leaf_primes) sum_q_bits += bit_width_u64(q - 1);
    for (u32 k = 0; k < tables.leaf.forward.d_F; ++k)
        bits += tables.leaf.forward.position_entries[k] * sum_q_bits;

    for (size_t si = 0; si < tables.leaf.dft.sizes.size(); ++si)
        for (size_t j = 0; j < plan.leaf_primes.size(); ++j)
            bits += tables.leaf.dft.tables[si][j].size() *
                    bit_width_u64(plan.leaf_primes[j] - 1);

    u64 m_bits = bit_width_u64(tables.leaf.combine.M - 1);
    for (size_t j = 0; j < plan.leaf_primes.size(); ++j)
        bits += tables.leaf.combine.basis[j].size() * m_bits;
    for (u32 k = 0; k < tables.leaf.combine.d_redP; ++k)
        bits += tables.leaf.combine.red_position_entries[k] * p_bits;
    return bits;
}

} // namespace tabntt::tables
