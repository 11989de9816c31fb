// planner.cpp - base-case size search, recursion-tree construction,
// leaf-prime selection and exact table budgeting.

#include "tabntt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "tabntt/numtheory.hpp"

namespace tabntt::planner {

u32 default_digit_bits(u32 p_bits) {
    u32 r = (p_bits + 2) / 4; // round(p/4)
    return r < 1 ? 1 : r;
}

double paper_m_diagnostic(u64 n) {
    double ln = std::log(static_cast<double>(n));
    double lln = std::log(ln);
    if (lln <= 0) return 0.0;
    return ln / (lln * lln);
}

// ============================================================================
// Leaf primes
// ============================================================================

std::vector<u64> select_leaf_primes(u128 bound, u64* product_out) {
    const u128 cap = u128{1} << 62;
    std::vector<u64> primes;
    u128 product = 1;
    u64 q = 2;
    while (product <= bound) {
        while (!numtheory::is_prime(q)) ++q;
        product *= q;
        if (product > cap)
            throw capacity_error("leaf prime product would exceed 2^62");
        primes.push_back(q);
        ++q;
    }
    if (product_out) *product_out = static_cast<u64>(product);
    return primes;
}

// ============================================================================
// Table geometry (exact bit sums)
// ============================================================================

namespace {

// ladder cost of reduce_chain: (log2(terms)+1) compares plus the same
// number of branchless conditional subtracts
u64 chain_ops(u64 terms) {
    return 2 * (static_cast<u64>(log2_exact(next_pow2(terms))) + 1);
}

u64 forward_entries_at(u64 P, u64 R_F, u32 position) {
    // digit values that can occur at this position for inputs < P
    u64 scale = 1;
    for (u32 i = 0; i < position; ++i) scale = sat_mul(scale, R_F);
    u64 max_digit = (P - 1) / scale;
    return std::min(R_F, max_digit + 1);
}

} // namespace

u64 TableGeometry::digit_table_bits() const {
    u64 entry_bits = bit_width_u64(P - 1);
    return static_cast<u64>(2 * d) * R() * R() * entry_bits;
}

u64 TableGeometry::forward_table_bits() const {
    u64 sum_q_bits = 0;
    for (u64 q : leaf_primes) sum_q_bits += bit_width_u64(q - 1);
    u64 R_F = u64{1} << r_F;
    u64 bits = 0;
    for (u32 k = 0; k < d_F; ++k)
        bits += forward_entries_at(P, R_F, k) * sum_q_bits;
    return bits;
}

u64 TableGeometry::dft_table_bits() const {
    u64 bits = 0;
    for (u64 mu : leaf_sizes) {
        for (u64 q : leaf_primes) {
            u64 tuples = sat_pow(q, mu);
            bits += sat_mul(sat_mul(tuples, mu), bit_width_u64(q - 1));
        }
    }
    return bits;
}

u64 TableGeometry::combine_table_bits() const {
    u64 bits = 0;
    for (u64 q : leaf_primes) bits += q * m_bits;
    u64 R_red = u64{1} << r_redP;
    u64 entry_bits = bit_width_u64(P - 1);
    for (u32 k = 0; k < d_redP; ++k) {
        u64 scale = 1;
        for (u32 i = 0; i < k; ++i) scale = sat_mul(scale, R_red);
        u64 max_digit = (M - 1) / scale;
        bits += std::min(R_red, max_digit + 1) * entry_bits;
    }
    return bits;
}

u64 TableGeometry::total_bits() const {
    return digit_table_bits() + forward_table_bits() + dft_table_bits() +
           combine_table_bits();
}

u64 TableGeometry::total_entries() const {
    u64 n = static_cast<u64>(2 * d) * R() * R();
    u64 R_F = u64{1} << r_F;
    for (u32 k = 0; k < d_F; ++k)
        n += forward_entries_at(P, R_F, k) * leaf_primes.size();
    for (u64 mu : leaf_sizes)
        for (u64 q : leaf_primes) n += sat_mul(sat_pow(q, mu), mu);
    for (u64 q : leaf_primes) n += q;
    u64 R_red = u64{1} << r_redP;
    for (u32 k = 0; k < d_redP; ++k) {
        u64 scale = 1;
        for (u32 i = 0; i < k; ++i) scale = sat_mul(scale, R_red);
        n += std::min(R_red, (M - 1) / scale + 1);
    }
    return n;
}

u64 TableGeometry::modeled_leaf_ops(u64 mu, u64 Z) const {
    u64 decompose = mu * Z * (d_F + (d_F - 1) + chain_ops(d_F));
    u64 dft_reads = Z;
    u64 combine = mu * (Z + (Z - 1) + chain_ops(Z) +
                        d_redP + (d_redP - 1) + chain_ops(d_redP));
    return decompose + dft_reads + combine;
}

namespace {

TableGeometry base_geometry(u64 P, const std::vector<u64>& leaf_primes, u64 M,
                            const std::vector<u64>& leaf_sizes) {
    TableGeometry g;
    g.P = P;
    g.p_bits = bit_width_u64(P);
    g.r = default_digit_bits(g.p_bits);
    g.d = static_cast<u32>(ceil_div(g.p_bits, g.r));
    g.leaf_primes = leaf_primes;
    g.M = M;
    g.m_bits = bit_width_u64(M - 1);
    g.leaf_sizes = leaf_sizes;
    return g;
}

// Pick (r_F, r_redP) minimizing the modeled lookup leaf cost subject to
// the exact bit total fitting the budget. Preprocessing trades table
// bits for runtime operations; the budget is the only brake.
bool optimize_geometry(TableGeometry& g, u64 budget_bits) {
    const u64 Z = g.leaf_primes.size();
    u32 max_r_F = std::min<u32>(g.p_bits, 22);
    u32 max_r_red = std::min<u32>(g.m_bits, 22);

    bool found = false;
    u64 best_ops = UINT64_MAX;
    u32 best_r_F = 1, best_r_red = 1;

    for (u32 r_F = 1; r_F <= max_r_F; ++r_F) {
        for (u32 r_red = 1; r_red <= max_r_red; ++r_red) {
            g.r_F = r_F;
            g.d_F = static_cast<u32>(ceil_div(g.p_bits, r_F));
            g.r_redP = r_red;
            g.d_redP = static_cast<u32>(ceil_div(g.m_bits, r_red));
            if (g.total_bits() > budget_bits) continue;
            u64 ops = 0;
            for (u64 mu : g.leaf_sizes) ops += g.modeled_leaf_ops(mu, Z);
            if (ops < best_ops ||
                (ops == best_ops &&
                 (r_F > best_r_F || (r_F == best_r_F && r_red > best_r_red)))) {
                best_ops = ops;
                best_r_F = r_F;
                best_r_red = r_red;
                found = true;
            }
        }
    }
    g.r_F = found ? best_r_F : 1;
    g.d_F = static_cast<u32>(ceil_div(g.p_bits, g.r_F));
    g.r_redP = found ? best_r_red : 1;
    g.d_redP = static_cast<u32>(ceil_div(g.m_bits, g.r_redP));
    return found;
}

} // namespace

// ============================================================================
// Recursion tree
// ============================================================================

namespace {

u64 mixed_power(u64 m, u64 big_count, u64 small_count) {
    u64 v = 1;
    for (u64 i = 0; i < big_count; ++i) v = sat_mul(v, m + 1);
    for (u64 i = 0; i < small_count; ++i) v = sat_mul(v, m);
    return v;
}

// Balanced-product bipartition: the left half takes ceil(a/2) of the
// (m+1) factors; halves have equal cardinality, products within a
// factor (m+1)/m of each other.
int build_tree_rec(std::vector<TreeNode>& nodes, u64 m, u64 big, u64 small) {
    int index = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{mixed_power(m, big, small), -1, -1});
    u64 count = big + small;
    if (count == 1) return index;
    u64 half = count / 2;
    u64 left_big = (big + 1) / 2;
    u64 left_small = half - left_big;
    int left = build_tree_rec(nodes, m, left_big, left_small);
    int right = build_tree_rec(nodes, m, big - left_big, small - left_small);
    nodes[index].left = left;
    nodes[index].right = right;
    return index;
}

std::vector<u64> levels_of(const std::vector<TreeNode>& nodes) {
    std::vector<u64> out;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        out.push_back(nodes[i].size);
        if (nodes[i].left >= 0) {
            queue.push_back(nodes[i].left);
            queue.push_back(nodes[i].right);
        }
    }
    return out;
}

} // namespace

TreeChoice rebuild_tree_choice(u64 m, u64 k, u64 z) {
    u64 factor_count = u64{1} << k;
    if (z > factor_count)
        throw std::invalid_argument("rebuild_tree_choice: z > 2^k");
    TreeChoice choice;
    choice.k = k;
    choice.z = z;
    choice.realized_n = mixed_power(m, factor_count - z, z);
    build_tree_rec(choice.tree, m, factor_count - z, z);
    choice.tree_levels = levels_of(choice.tree);
    if (z == factor_count)
        choice.leaf_sizes = {m};
    else if (z == 0)
        choice.leaf_sizes = {m + 1};
    else
        choice.leaf_sizes = {m, m + 1};
    return choice;
}

TreeChoice choose_tree(u64 target_n, u64 m) {
    if (m < 2) throw std::invalid_argument("choose_tree: m must be >= 2");
    if (target_n < m * m)
        throw std::invalid_argument("choose_tree: target_n must be >= m^2");

    // smallest k with (m+1)^(2^k) >= target_n
    u64 k = 0;
    while (sat_pow(m + 1, u64{1} << k) < target_n) ++k;
    u64 factor_count = u64{1} << k;

    // products (m+1)^(2^k - z) * m^z decrease in z; binary-search the
    // largest z still >= target_n
    u64 lo = 0, hi = factor_count;
    while (lo < hi) {
        u64 mid = lo + (hi - lo + 1) / 2;
        if (mixed_power(m, factor_count - mid, mid) >= target_n)
            lo = mid;
        else
            hi = mid - 1;
    }
    u64 z = lo;

    TreeChoice choice;
    choice.k = k;
    choice.z = z;
    choice.realized_n = mixed_power(m, factor_count - z, z);
    if (choice.realized_n == UINT64_MAX)
        throw std::invalid_argument("choose_tree: realized length overflows");
    build_tree_rec(choice.tree, m, factor_count - z, z);
    choice.tree_levels = levels_of(choice.tree);
    if (z == factor_count)
        choice.leaf_sizes = {m};
    else if (z == 0)
        choice.leaf_sizes = {m + 1};
    else
        choice.leaf_sizes = {m, m + 1};
    return choice;
}

// ============================================================================
// Budget search
// ============================================================================

BudgetReport budget_check(u64 m, u64 P, u64 budget_bits) {
    if (m < 2) throw std::invalid_argument("budget_check: m must be >= 2");
    BudgetReport report;
    report.m_candidate = m;

    u128 bound = static_cast<u128>(P) * P * m;
    report.leaf_primes = select_leaf_primes(bound, &report.prime_product);
    report.Z_count = report.leaf_primes.size();

    u64 q_max = report.leaf_primes.back();
    if (sat_pow(q_max, m) >= (u64{1} << 40))
        throw budget_error("budget_check: q^m exceeds the addressable table range");

    TableGeometry g = base_geometry(P, report.leaf_primes, report.prime_product,
                                    std::vector<u64>{m});
    bool fits = optimize_geometry(g, budget_bits);
    report.total_table_bits = g.total_bits();
    report.fits = fits && report.total_table_bits <= budget_bits;
    return report;
}

namespace {

struct Candidate {
    u64 m = 0;
    TreeChoice tree;
    numtheory::FieldPrime prime;
    std::vector<u64> leaf_primes;
    u64 M = 0;
    TableGeometry geometry;
    bool fits = false;
};

// Full pipeline for one m: tree -> prime -> leaf primes -> geometry.
// Returns false when the candidate cannot be realized (capacity or
// addressability).
bool evaluate_candidate(u64 target_n, u64 m, const PlannerConfig& cfg,
                        Candidate& out) {
    out.m = m;
    try {
        out.tree = choose_tree(target_n, m);
    } catch (const std::invalid_argument&) {
        return false;
    }
    u64 realized = out.tree.realized_n;

    u64 min_prime = 1;
    if (cfg.mult_base_bits > 0) {
        u64 B = u64{1} << cfg.mult_base_bits;
        u128 need = static_cast<u128>(B) * B * realized;
        if (need >= (u128{1} << 62)) return false;
        min_prime = static_cast<u64>(need) + 1;
    }
    try {
        out.prime = numtheory::find_field_prime(realized, cfg.linnik_L, min_prime);
    } catch (const std::runtime_error&) {
        return false;
    }

    u64 max_leaf = out.tree.leaf_sizes.back();
    u128 bound = static_cast<u128>(out.prime.value) * out.prime.value * max_leaf;
    try {
        out.leaf_primes = select_leaf_primes(bound, &out.M);
    } catch (const capacity_error&) {
        return false;
    }
    u64 q_max = out.leaf_primes.back();
    if (sat_mul(sat_pow(q_max, max_leaf), max_leaf) >= cfg.memory_cap_entries)
        return false;

    u64 budget = cfg.budget_bits != 0 ? cfg.budget_bits
                                      : std::max(u64{1} << 20, realized);
    out.geometry = base_geometry(out.prime.value, out.leaf_primes, out.M,
                                 out.tree.leaf_sizes);
    out.fits = optimize_geometry(out.geometry, budget);
    if (out.geometry.total_entries() >= cfg.memory_cap_entries) return false;
    return true;
}

} // namespace

u64 choose_base_size(u64 target_n, u64 budget_bits) {
    if (target_n < 4)
        throw std::invalid_argument("choose_base_size: target_n must be >= 4");
    PlannerConfig cfg;
    cfg.budget_bits = budget_bits;
    u64 best = 2;
    for (u64 m = 2; m * m <= target_n; ++m) {
        // The cheapest conceivable dft table for this m is the q=2
        // channel alone; once that exceeds the budget no larger m fits.
        if (sat_mul(sat_pow(2, m), m) > budget_bits) break;
        Candidate c;
        if (evaluate_candidate(target_n, m, cfg, c) && c.fits) best = m;
    }
    return best;
}

TransformPlan make_plan(u64 target_n, u64 budget_bits, u64 seed) {
    PlannerConfig cfg;
    cfg.budget_bits = budget_bits;
    cfg.seed = seed;
    return make_plan_cfg(target_n, cfg);
}

TransformPlan make_plan_cfg(u64 target_n, const PlannerConfig& cfg) {
    if (target_n < 4)
        throw std::invalid_argument("make_plan: n too small (need target_n >= 4)");

    Candidate chosen;
    if (cfg.forced_m != 0) {
        if (!evaluate_candidate(target_n, cfg.forced_m, cfg, chosen))
            throw std::invalid_argument("make_plan: forced m is not realizable");
    } else {
        // largest m whose exact table total fits the budget; fall back
        // to the smallest realizable m when nothing fits
        bool have_fit = false, have_fallback = false;
        Candidate best, fallback;
        u64 budget_probe = cfg.budget_bits != 0
                               ? cfg.budget_bits
                               : std::max(u64{1} << 20, sat_mul(target_n, 16));
        for (u64 m = 2; m * m <= target_n; ++m) {
            if (sat_mul(sat_pow(2, m), m) > budget_probe) break;
            Candidate c;
            if (!evaluate_candidate(target_n, m, cfg, c)) continue;
            if (!have_fallback) { fallback = c; have_fallback = true; }
            if (c.fits) { best = c; have_fit = true; }
        }
        if (!have_fit && !have_fallback)
            throw std::invalid_argument("make_plan: no realizable candidate");
        chosen = have_fit ? best : fallback;
    }

    const u64 realized = chosen.tree.realized_n;
    TransformPlan plan;
    plan.target_n = target_n;
    plan.length_n = realized;
    plan.base_size_m = chosen.m;
    plan.tree_k = chosen.tree.k;
    plan.z_split = chosen.tree.z;
    plan.tree = chosen.tree.tree;
    plan.tree_levels = chosen.tree.tree_levels;
    plan.leaf_sizes = chosen.tree.leaf_sizes;
    plan.linnik_L = cfg.linnik_L;
    plan.field_prime_P = chosen.prime.value;
    plan.linnik_ok = chosen.prime.within_linnik_bound;
    plan.leaf_primes = chosen.leaf_primes;
    plan.prime_product_M = chosen.M;
    plan.seed = cfg.seed;

    plan.budget_bits = cfg.budget_bits != 0 ? cfg.budget_bits
                                            : std::max(u64{1} << 20, realized);
    plan.digit_base_bits = chosen.geometry.r;
    plan.digit_base_R = u64{1} << plan.digit_base_bits;
    plan.leaf_digit_bits = chosen.geometry.r_F;
    plan.reduce_digit_bits = chosen.geometry.r_redP;
    plan.total_table_bits = chosen.geometry.total_bits();
    plan.fits = chosen.fits && plan.total_table_bits <= plan.budget_bits;

    plan.root_omega = numtheory::find_root_of_unity(
        plan.field_prime_P, realized, numtheory::RootStrategy::randomized, cfg.seed);
    plan.inv_root = inv_mod_prime(plan.root_omega, plan.field_prime_P);
    plan.inv_n = inv_mod_prime(realized % plan.field_prime_P, plan.field_prime_P);

    u64 B = 1;
    while (true) {
        u64 next = B << 1;
        u128 need = static_cast<u128>(next) * next * realized;
        if (need < plan.field_prime_P)
            B = next;
        else
            break;
    }
    plan.mult_base = B;
    if (cfg.mult_base_bits > 0 && plan.mult_base < (u64{1} << cfg.mult_base_bits))
        throw capacity_error("make_plan: field prime lacks multiply headroom");

    // hard postconditions
    if ((plan.field_prime_P - 1) % realized != 0)
        throw std::logic_error("make_plan: P != 1 mod n");
    u128 recon = static_cast<u128>(plan.field_prime_P) * plan.field_prime_P *
                 plan.max_leaf_size();
    if (static_cast<u128>(plan.prime_product_M) <= recon)
        throw std::logic_error("make_plan: leaf prime product too small");
    return plan;
}

TransformPlan plan_for_multiply(u64 a_bits, u64 b_bits, u64 budget_bits, u64 seed) {
    if (a_bits == 0) a_bits = 1;
    if (b_bits == 0) b_bits = 1;
    for (u32 beta = 8; beta > 0; --beta) {
        u64 da = ceil_div(a_bits, beta);
        u64 db = ceil_div(b_bits, beta);
        u64 target = std::max<u64>(4, 2 * std::max(da, db));
        PlannerConfig cfg;
        cfg.budget_bits = budget_bits;
        cfg.seed = seed;
        cfg.mult_base_bits = beta;
        try {
            return make_plan_cfg(target, cfg);
        } catch (const capacity_error&) {
            continue; // field or leaf primes too large at this digit base
        } catch (const std::invalid_argument&) {
            continue; // no candidate realizable at this digit base
        }
    }
    throw capacity_error("plan_for_multiply: no digit base with enough headroom");
}

TableGeometry plan_geometry(const TransformPlan& plan) {
    TableGeometry g = base_geometry(plan.field_prime_P, plan.leaf_primes,
                                    plan.prime_product_M, plan.leaf_sizes);
    g.r = plan.digit_base_bits;
    g.d = static_cast<u32>(ceil_div(g.p_bits, g.r));
    g.r_F = plan.leaf_digit_bits;
    g.d_F = static_cast<u32>(ceil_div(g.p_bits, g.r_F));
    g.r_redP = plan.reduce_digit_bits;
    g.d_redP = static_cast<u32>(ceil_div(g.m_bits, g.r_redP));
    return g;
}

} // namespace tabntt::planner
