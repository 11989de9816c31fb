// transform.cpp - recursive Cooley-Tukey NTT over Z/P with table-driven
// arithmetic and two leaf strategies. The recursion runs on a bump
// arena; leaves use fixed stack buffers.

#include "tabntt/transform.hpp"

namespace tabntt::transform {

namespace {

constexpr u64 kMaxLeafChannels = 64 * 64; // f * Z bound for leaf scratch

// modular add with wrap check; counted as one add and one compare
inline u64 add_mod_counted(u64 a, u64 b, u64 P, OpCounts& c) {
    u64 s = a + b;
    u64 take = s >= P ? P : 0;
    s -= take;
    c.addmod += 1;
    c.compares += 1;
    return s;
}

// bump allocator for the recursion's gather/scatter buffers; sized once
// per transform call so pointers stay stable
struct Workspace {
    std::vector<u64> arena;
    size_t top = 0;

    explicit Workspace(u64 n) { arena.resize(2 * n + 4096); }

    u64* alloc(size_t count) {
        if (top + count > arena.size())
            throw std::logic_error("transform workspace exhausted");
        u64* p = arena.data() + top;
        top += count;
        return p;
    }
    size_t mark() const { return top; }
    void release(size_t m) { top = m; }
};

} // namespace

struct Engine::Impl {
    static void leaf_direct(const Engine& e, u64* data, u64 f, OpCounts& counters) {
        const u64 P = e.plan_.field_prime_P;
        const u64 stride = e.plan_.length_n / f;
        const std::vector<u64>& tw = e.tables_.twiddle_powers;

        u64 out[64];
        for (u64 k = 0; k < f; ++k) {
            u64 acc = 0;
            for (u64 i = 0; i < f; ++i) {
                u64 w = tw[stride * ((i * k) % f)];
                counters.table_reads += 1;
                u64 term = tables::tabular_mulmod(data[i], w, e.tables_.digit,
                                                  counters);
                acc = i == 0 ? term : add_mod_counted(acc, term, P, counters);
            }
            out[k] = acc;
        }
        for (u64 k = 0; k < f; ++k) data[k] = out[k];
    }

    static void leaf_lookup(const Engine& e, u64* data, u64 f, OpCounts& counters) {
        const u64 P = e.plan_.field_prime_P;
        const tables::LeafTables& leaf = e.tables_.leaf;
        const u64 Z = leaf.leaf_primes.size();

        u64 res[kMaxLeafChannels];
        for (u64 i = 0; i < f; ++i)
            tables::crt_decompose_into(data[i], leaf, res + i * Z, counters);

        // one dft-table read per channel; the entry carries all f outputs
        int si = leaf.dft.size_index(f);
        u64 outres[kMaxLeafChannels];
        for (u64 j = 0; j < Z; ++j) {
            u64 q = leaf.leaf_primes[j];
            u64 idx = 0;
            for (u64 i = 0; i < f; ++i) idx = idx * q + res[i * Z + j];
            const u32* entry = leaf.dft.tables[si][j].data() + idx * f;
            counters.table_reads += 1;
            for (u64 k = 0; k < f; ++k) outres[k * Z + j] = entry[k];
        }

        for (u64 k = 0; k < f; ++k) {
            u64 v = tables::crt_combine_ptr(outres + k * Z, leaf, counters);
            data[k] = tables::combine_reduce_to_P(v, P, leaf.combine, counters);
        }
    }

    static void transform_node(const Engine& e, int node_index, u64* data,
                               OpCounts& counters, LeafMode mode, Workspace& ws) {
        const planner::TreeNode& node = e.plan_.tree[node_index];
        if (node.left < 0) {
            if (mode == LeafMode::direct_leaves)
                leaf_direct(e, data, node.size, counters);
            else
                leaf_lookup(e, data, node.size, counters);
            return;
        }

        const u64 n1 = e.plan_.tree[node.left].size;
        const u64 n2 = e.plan_.tree[node.right].size;
        const u64 s = n1 * n2;
        const u64 tw_stride = e.plan_.length_n / s;
        const tables::DigitProductTables& digit = e.tables_.digit;

        size_t frame = ws.mark();
        u64* mat = ws.alloc(s);

        // inner DFTs: one length-n2 transform per column j0
        {
            size_t inner = ws.mark();
            u64* col = ws.alloc(n2);
            for (u64 j0 = 0; j0 < n1; ++j0) {
                for (u64 j1 = 0; j1 < n2; ++j1) col[j1] = data[j1 * n1 + j0];
                transform_node(e, node.right, col, counters, mode, ws);
                for (u64 k0 = 0; k0 < n2; ++k0) mat[j0 * n2 + k0] = col[k0];
            }
            ws.release(inner);
        }

        // twiddles omega_s^(j0*k0); the j0=0 and k0=0 lines are identity
        for (u64 j0 = 1; j0 < n1; ++j0) {
            for (u64 k0 = 1; k0 < n2; ++k0) {
                u64 w = e.tables_.twiddle_powers[tw_stride * j0 * k0];
                counters.table_reads += 1;
                mat[j0 * n2 + k0] =
                    tables::tabular_mulmod(mat[j0 * n2 + k0], w, digit, counters);
            }
        }

        // outer DFTs: one length-n1 transform per output line k0
        {
            size_t inner = ws.mark();
            u64* row = ws.alloc(n1);
            for (u64 k0 = 0; k0 < n2; ++k0) {
                for (u64 j0 = 0; j0 < n1; ++j0) row[j0] = mat[j0 * n2 + k0];
                transform_node(e, node.left, row, counters, mode, ws);
                for (u64 k2 = 0; k2 < n1; ++k2) data[k2 * n2 + k0] = row[k2];
            }
            ws.release(inner);
        }
        ws.release(frame);
    }
};

FieldVector Engine::forward(const FieldVector& x, LeafMode mode,
                            OpCounts& counters) const {
    if (x.size() != plan_.length_n)
        throw std::length_error("forward: input length != realized n");
    for (u64 v : x)
        if (v >= plan_.field_prime_P)
            throw std::invalid_argument("forward: coefficient >= P");
    if (plan_.max_leaf_size() * plan_.leaf_primes.size() > kMaxLeafChannels)
        throw std::logic_error("forward: leaf scratch bound exceeded");

    FieldVector data = x;
    Workspace ws(plan_.length_n);
    Impl::transform_node(*this, 0, data.data(), counters, mode, ws);
    return data;
}

FieldVector Engine::inverse(const FieldVector& y, LeafMode mode,
                            OpCounts& counters) const {
    if (y.size() != plan_.length_n)
        throw std::length_error("inverse: input length != realized n");
    const u64 n = plan_.length_n;

    // forward transform with the inverse root, realized as the forward
    // transform followed by an output index reversal (zero arithmetic)
    FieldVector fwd = forward(y, mode, counters);
    FieldVector out(n);
    out[0] = fwd[0];
    for (u64 k = 1; k < n; ++k) out[k] = fwd[n - k];

    for (u64 k = 0; k < n; ++k)
        out[k] = tables::tabular_mulmod(out[k], plan_.inv_n, tables_.digit, counters);
    return out;
}

FieldVector Engine::pointwise_multiply(const FieldVector& a, const FieldVector& b,
                                       OpCounts& counters) const {
    if (a.size() != b.size())
        throw std::length_error("pointwise_multiply: length mismatch");
    FieldVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = tables::tabular_mulmod(a[i], b[i], tables_.digit, counters);
    return out;
}

FieldVector base_case_direct(const FieldVector& x, u64 root,
                             const tables::DigitProductTables& digit,
                             OpCounts& counters) {
    const u64 f = x.size();
    const u64 P = digit.P;

    std::vector<u64> powers(f);
    powers[0] = 1 % P;
    for (u64 e = 1; e < f; ++e)
        powers[e] = tables::tabular_mulmod(powers[e - 1], root, digit, counters);

    FieldVector out(f);
    for (u64 k = 0; k < f; ++k) {
        u64 acc = 0;
        for (u64 i = 0; i < f; ++i) {
            u64 term = tables::tabular_mulmod(x[i], powers[(i * k) % f], digit,
                                              counters);
            acc = i == 0 ? term : add_mod_counted(acc, term, P, counters);
        }
        out[k] = acc;
    }
    return out;
}

} // namespace tabntt::transform
