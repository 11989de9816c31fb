// serialize.cpp - NTTB v1 reader/writer.

#include "tabntt/serialize.hpp"

#include <cstdio>

#include "tabntt/numtheory.hpp"

namespace tabntt::serialize {

namespace {

constexpr u32 kVersion = 1;

void push_u64(std::vector<u8>& out, u64 v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>(v >> (8 * i)));
}

void push_u32(std::vector<u8>& out, u32 v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<u8>(v >> (8 * i)));
}

struct Reader {
    const std::vector<u8>& bytes;
    size_t pos = 0;

    u64 u64_at() {
        if (pos + 8 > bytes.size()) throw format_error("truncated file");
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<u64>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    u32 u32_at() {
        if (pos + 4 > bytes.size()) throw format_error("truncated file");
        u32 v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<u32>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
};

// section payloads are written word-counted so readers can skip unknown
// sections
struct SectionWriter {
    std::vector<u64> words;
    void put(u64 v) { words.push_back(v); }
    void flush(std::vector<u8>& out) {
        push_u64(out, words.size());
        for (u64 w : words) push_u64(out, w);
        words.clear();
    }
};

struct SectionReader {
    std::vector<u64> words;
    size_t pos = 0;
    explicit SectionReader(Reader& r) {
        u64 count = r.u64_at();
        words.resize(count);
        for (u64 i = 0; i < count; ++i) words[i] = r.u64_at();
    }
    u64 get() {
        if (pos >= words.size()) throw format_error("section underrun");
        return words[pos++];
    }
    bool done() const { return pos == words.size(); }
};

} // namespace

std::vector<u8> to_bytes(const planner::TransformPlan& plan,
                         const tables::TableSet& tables) {
    std::vector<u8> out;
    out.push_back('N');
    out.push_back('T');
    out.push_back('T');
    out.push_back('B');
    push_u32(out, kVersion);

    // header: n, P, omega, R, L, m, Z, q list
    push_u64(out, plan.length_n);
    push_u64(out, plan.field_prime_P);
    push_u64(out, plan.root_omega);
    push_u64(out, plan.digit_base_R);
    push_u64(out, plan.linnik_L);
    push_u64(out, plan.base_size_m);
    push_u64(out, plan.leaf_primes.size());
    for (u64 q : plan.leaf_primes) push_u64(out, q);

    SectionWriter s;

    // section 0: plan extras
    s.put(plan.target_n);
    s.put(plan.budget_bits);
    s.put(plan.seed);
    s.put(plan.leaf_digit_bits);
    s.put(plan.reduce_digit_bits);
    s.put(plan.tree_k);
    s.put(plan.z_split);
    s.put(plan.linnik_ok ? 1 : 0);
    s.put(plan.fits ? 1 : 0);
    s.put(plan.total_table_bits);
    s.put(plan.mult_base);
    s.put(plan.prime_product_M);
    s.flush(out);

    // section 1: digit-product tables
    s.put(tables.digit.num_tables);
    s.put(tables.digit.R);
    for (u64 e : tables.digit.entries) s.put(e);
    s.flush(out);

    // section 2: forward tables
    s.put(tables.leaf.forward.d_F);
    for (u32 k = 0; k < tables.leaf.forward.d_F; ++k) {
        s.put(tables.leaf.forward.position_entries[k]);
        for (u64 v : tables.leaf.forward.values[k]) s.put(v);
    }
    s.flush(out);

    // section 3: dft tables
    s.put(tables.leaf.dft.sizes.size());
    for (size_t si = 0; si < tables.leaf.dft.sizes.size(); ++si) {
        s.put(tables.leaf.dft.sizes[si]);
        for (const auto& per_prime : tables.leaf.dft.tables[si])
            for (u32 v : per_prime) s.put(v);
    }
    s.flush(out);

    // section 4: combine tables
    s.put(tables.leaf.combine.M);
    for (const auto& basis : tables.leaf.combine.basis)
        for (u64 v : basis) s.put(v);
    s.put(tables.leaf.combine.d_redP);
    for (u32 k = 0; k < tables.leaf.combine.d_redP; ++k) {
        s.put(tables.leaf.combine.red_position_entries[k]);
        for (u64 v : tables.leaf.combine.red_values[k]) s.put(v);
    }
    s.flush(out);

    return out;
}

LoadedTables from_bytes(const std::vector<u8>& bytes) {
    Reader r{bytes};
    if (bytes.size() < 8 || bytes[0] != 'N' || bytes[1] != 'T' ||
        bytes[2] != 'T' || bytes[3] != 'B')
        throw format_error("bad magic");
    r.pos = 4;
    u32 version = r.u32_at();
    if (version != kVersion) throw format_error("unsupported version");

    LoadedTables out;
    planner::TransformPlan& plan = out.plan;
    plan.length_n = r.u64_at();
    plan.field_prime_P = r.u64_at();
    plan.root_omega = r.u64_at();
    plan.digit_base_R = r.u64_at();
    plan.linnik_L = static_cast<u32>(r.u64_at());
    plan.base_size_m = r.u64_at();
    u64 Z = r.u64_at();
    plan.leaf_primes.resize(Z);
    for (u64 j = 0; j < Z; ++j) plan.leaf_primes[j] = r.u64_at();

    if (plan.field_prime_P < 2 || plan.length_n < 2 ||
        plan.digit_base_R < 2 ||
        (plan.digit_base_R & (plan.digit_base_R - 1)) != 0 || Z == 0)
        throw format_error("implausible header");

    // section 0: plan extras
    {
        SectionReader sec(r);
        plan.target_n = sec.get();
        plan.budget_bits = sec.get();
        plan.seed = sec.get();
        plan.leaf_digit_bits = static_cast<u32>(sec.get());
        plan.reduce_digit_bits = static_cast<u32>(sec.get());
        plan.tree_k = sec.get();
        plan.z_split = sec.get();
        plan.linnik_ok = sec.get() != 0;
        plan.fits = sec.get() != 0;
        plan.total_table_bits = sec.get();
        plan.mult_base = sec.get();
        plan.prime_product_M = sec.get();
        if (!sec.done()) throw format_error("plan section overrun");
    }

    plan.digit_base_bits = static_cast<u32>(log2_exact(plan.digit_base_R));
    planner::TreeChoice tree =
        planner::rebuild_tree_choice(plan.base_size_m, plan.tree_k, plan.z_split);
    if (tree.realized_n != plan.length_n)
        throw format_error("tree does not multiply to n");
    plan.tree = tree.tree;
    plan.tree_levels = tree.tree_levels;
    plan.leaf_sizes = tree.leaf_sizes;
    plan.inv_root = inv_mod_prime(plan.root_omega, plan.field_prime_P);
    plan.inv_n = inv_mod_prime(plan.length_n % plan.field_prime_P,
                               plan.field_prime_P);

    tables::TableSet& set = out.tables;

    // section 1: digit-product tables
    {
        SectionReader sec(r);
        tables::DigitProductTables& t = set.digit;
        t.P = plan.field_prime_P;
        t.num_tables = static_cast<u32>(sec.get());
        t.R = sec.get();
        if (t.R != plan.digit_base_R) throw format_error("digit base mismatch");
        t.r = static_cast<u32>(log2_exact(t.R));
        t.d = t.num_tables / 2;
        if (t.num_tables != 2 * t.d || t.d == 0)
            throw format_error("digit table count must be even");
        t.reduce_terms = next_pow2(static_cast<u64>(t.d) * t.d);
        u64 count = static_cast<u64>(t.num_tables) * t.R * t.R;
        t.entries.resize(count);
        for (u64 i = 0; i < count; ++i) {
            t.entries[i] = sec.get();
            if (t.entries[i] >= t.P) throw format_error("digit entry >= P");
        }
        if (!sec.done()) throw format_error("digit section overrun");
    }

    set.leaf.leaf_primes = plan.leaf_primes;

    // section 2: forward tables
    {
        SectionReader sec(r);
        tables::ForwardTables& t = set.leaf.forward;
        t.r_F = plan.leaf_digit_bits;
        t.R_F = u64{1} << t.r_F;
        t.d_F = static_cast<u32>(sec.get());
        t.reduce_terms = next_pow2(t.d_F);
        t.position_entries.resize(t.d_F);
        t.values.resize(t.d_F);
        for (u32 k = 0; k < t.d_F; ++k) {
            t.position_entries[k] = sec.get();
            t.values[k].resize(t.position_entries[k] * Z);
            for (u64& v : t.values[k]) v = sec.get();
        }
        if (!sec.done()) throw format_error("forward section overrun");
    }

    // section 3: dft tables
    {
        SectionReader sec(r);
        tables::DftTables& t = set.leaf.dft;
        u64 num_sizes = sec.get();
        t.sizes.resize(num_sizes);
        t.tables.resize(num_sizes);
        for (u64 si = 0; si < num_sizes; ++si) {
            t.sizes[si] = sec.get();
            u64 mu = t.sizes[si];
            t.tables[si].resize(Z);
            for (u64 j = 0; j < Z; ++j) {
                u64 q = plan.leaf_primes[j];
                u64 count = sat_mul(sat_pow(q, mu), mu);
                t.tables[si][j].resize(count);
                for (u64 i = 0; i < count; ++i) {
                    u64 v = sec.get();
                    if (v >= q) throw format_error("dft entry >= q");
                    t.tables[si][j][i] = static_cast<u32>(v);
                }
            }
        }
        if (!sec.done()) throw format_error("dft section overrun");
    }

    // section 4: combine tables
    {
        SectionReader sec(r);
        tables::CombineTables& t = set.leaf.combine;
        t.M = sec.get();
        if (t.M != plan.prime_product_M) throw format_error("prime product mismatch");
        t.combine_terms = next_pow2(Z);
        t.basis.resize(Z);
        for (u64 j = 0; j < Z; ++j) {
            t.basis[j].resize(plan.leaf_primes[j]);
            for (u64& v : t.basis[j]) {
                v = sec.get();
                if (v >= t.M) throw format_error("basis entry >= M");
            }
        }
        t.r_redP = plan.reduce_digit_bits;
        t.R_redP = u64{1} << t.r_redP;
        t.d_redP = static_cast<u32>(sec.get());
        t.reduce_terms = next_pow2(t.d_redP);
        t.red_position_entries.resize(t.d_redP);
        t.red_values.resize(t.d_redP);
        for (u32 k = 0; k < t.d_redP; ++k) {
            t.red_position_entries[k] = sec.get();
            t.red_values[k].resize(t.red_position_entries[k]);
            for (u64& v : t.red_values[k]) {
                v = sec.get();
                if (v >= plan.field_prime_P) throw format_error("reduce entry >= P");
            }
        }
        if (!sec.done()) throw format_error("combine section overrun");
    }

    // twiddle power table is derived, not stored
    set.twiddle_powers.resize(plan.length_n);
    u64 w = 1 % plan.field_prime_P;
    for (u64 i = 0; i < plan.length_n; ++i) {
        set.twiddle_powers[i] = w;
        w = mul_mod(w, plan.root_omega, plan.field_prime_P);
    }
    return out;
}

void save_file(const std::string& path, const planner::TransformPlan& plan,
               const tables::TableSet& tables) {
    std::vector<u8> bytes = to_bytes(plan, tables);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    size_t written = std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (written != bytes.size())
        throw std::runtime_error("short write to " + path);
}

LoadedTables load_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<u8> bytes(static_cast<size_t>(size));
    size_t got = std::fread(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (got != bytes.size()) throw std::runtime_error("short read from " + path);
    return from_bytes(bytes);
}

} // namespace tabntt::serialize
