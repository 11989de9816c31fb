#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tabntt/oracle.hpp"
#include "tabntt/transform.hpp"

using namespace tabntt;
using namespace tabntt::transform;
using planner::TransformPlan;

namespace {

struct Fixture {
    TransformPlan plan;
    tables::TableSet tabs;

    explicit Fixture(u64 target, u64 forced_m = 0) {
        planner::PlannerConfig cfg;
        cfg.forced_m = forced_m;
        plan = planner::make_plan_cfg(target, cfg);
        tabs = tables::build_tables(plan);
    }
    Engine engine() const { return Engine(plan, tabs); }
};

FieldVector random_vector(u64 n, u64 P, std::mt19937_64& rng) {
    FieldVector x(n);
    for (u64& v : x) v = rng() % P;
    return x;
}

// closed-form op prediction walked off the plan tree: every leaf of
// size f costs f^2 multiplies; every internal split (n1-1)(n2-1)
// twiddle multiplies; instance counts multiply down the tree
u64 predicted_direct_mulmod(const TransformPlan& plan) {
    struct Walk {
        const TransformPlan& plan;
        u64 count = 0;
        void visit(int index, u64 instances) {
            const planner::TreeNode& node = plan.tree[index];
            if (node.left < 0) {
                count += instances * node.size * node.size;
                return;
            }
            u64 n1 = plan.tree[node.left].size;
            u64 n2 = plan.tree[node.right].size;
            count += instances * (n1 - 1) * (n2 - 1);
            visit(node.right, instances * n1);
            visit(node.left, instances * n2);
        }
    };
    Walk w{plan};
    w.visit(0, 1);
    return w.count;
}

} // namespace

TEST_CASE("forward transform frozen example n=4") {
    Fixture f(4);
    REQUIRE(f.plan.field_prime_P == 5);
    // the example is stated for omega = 2; conjugate expectations if the
    // seed found 3 (= 2^3), which permutes outputs 1 and 3
    FieldVector x{1, 2, 3, 4};
    FieldVector expected =
        f.plan.root_omega == 2 ? FieldVector{0, 4, 3, 2} : FieldVector{0, 2, 3, 4};

    for (LeafMode mode : {LeafMode::direct_leaves, LeafMode::lookup_leaves}) {
        OpCounts c;
        CHECK(f.engine().forward(x, mode, c) == expected);
    }

    OpCounts c;
    FieldVector zeros{0, 0, 0, 0};
    CHECK(f.engine().forward(zeros, LeafMode::lookup_leaves, c) == zeros);

    FieldVector delta{1, 0, 0, 0};
    CHECK(f.engine().forward(delta, LeafMode::lookup_leaves, c) ==
          FieldVector{1, 1, 1, 1});
}

TEST_CASE("inverse transform undoes forward, frozen example") {
    Fixture f(4);
    OpCounts c;
    FieldVector x{1, 2, 3, 4};
    FieldVector y = f.engine().forward(x, LeafMode::direct_leaves, c);
    CHECK(f.engine().inverse(y, LeafMode::direct_leaves, c) == x);

    FieldVector zeros{0, 0, 0, 0};
    CHECK(f.engine().inverse(zeros, LeafMode::lookup_leaves, c) == zeros);
}

TEST_CASE("roundtrip identity on random vectors across plan shapes") {
    std::mt19937_64 rng(17);
    for (auto [target, m] : std::vector<std::pair<u64, u64>>{
             {4, 0}, {16, 0}, {36, 2}, {81, 0}, {100, 3}}) {
        Fixture f(target, m);
        Engine e = f.engine();
        for (int trial = 0; trial < 25; ++trial) {
            FieldVector x = random_vector(f.plan.length_n, f.plan.field_prime_P, rng);
            LeafMode mode =
                trial % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
            OpCounts c;
            CHECK(e.inverse(e.forward(x, mode, c), mode, c) == x);
        }
    }
}

TEST_CASE("oracle equivalence: both modes equal the naive DFT") {
    std::mt19937_64 rng(23);
    for (auto [target, m] : std::vector<std::pair<u64, u64>>{
             {16, 0}, {36, 2}, {81, 0}, {256, 0}}) {
        Fixture f(target, m);
        Engine e = f.engine();
        for (int trial = 0; trial < 20; ++trial) {
            FieldVector x = random_vector(f.plan.length_n, f.plan.field_prime_P, rng);
            FieldVector expected =
                oracle::naive_dft(x, f.plan.root_omega, f.plan.field_prime_P);
            OpCounts c;
            FieldVector direct = e.forward(x, LeafMode::direct_leaves, c);
            FieldVector lookup = e.forward(x, LeafMode::lookup_leaves, c);
            REQUIRE(direct == expected);
            REQUIRE(lookup == expected);
        }
    }
}

TEST_CASE("linearity of the forward transform") {
    Fixture f(81);
    Engine e = f.engine();
    const u64 P = f.plan.field_prime_P;
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        FieldVector x = random_vector(f.plan.length_n, P, rng);
        FieldVector y = random_vector(f.plan.length_n, P, rng);
        u64 alpha = rng() % P, beta = rng() % P;

        FieldVector combo(f.plan.length_n);
        for (u64 i = 0; i < f.plan.length_n; ++i)
            combo[i] = (mul_mod(alpha, x[i], P) + mul_mod(beta, y[i], P)) % P;

        OpCounts c;
        FieldVector lhs = e.forward(combo, LeafMode::lookup_leaves, c);
        FieldVector fx = e.forward(x, LeafMode::lookup_leaves, c);
        FieldVector fy = e.forward(y, LeafMode::lookup_leaves, c);
        for (u64 i = 0; i < f.plan.length_n; ++i)
            REQUIRE(lhs[i] ==
                    (mul_mod(alpha, fx[i], P) + mul_mod(beta, fy[i], P)) % P);
    }
}

TEST_CASE("convolution theorem matches the direct cyclic convolution") {
    std::mt19937_64 rng(37);
    Fixture f(36, 2);
    Engine e = f.engine();
    const u64 P = f.plan.field_prime_P;
    for (int trial = 0; trial < 10; ++trial) {
        FieldVector a = random_vector(f.plan.length_n, P, rng);
        FieldVector b = random_vector(f.plan.length_n, P, rng);
        OpCounts c;
        LeafMode mode = trial % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
        FieldVector got = e.inverse(
            e.pointwise_multiply(e.forward(a, mode, c), e.forward(b, mode, c), c),
            mode, c);
        REQUIRE(got == oracle::cyclic_convolution(a, b, P));
    }
}

TEST_CASE("base_case_direct frozen examples") {
    tables::DigitProductTables digit = tables::build_digit_product_tables(5, 2);
    OpCounts c;
    CHECK(base_case_direct({1, 1}, 4, digit, c) == FieldVector{2, 0});
    CHECK(base_case_direct({0, 0}, 4, digit, c) == FieldVector{0, 0});
    CHECK(base_case_direct({3}, 1, digit, c) == FieldVector{3}); // 1-point DFT
}

TEST_CASE("pointwise multiply") {
    Fixture f(4);
    Engine e = f.engine();
    OpCounts c;
    CHECK(e.pointwise_multiply({1, 2, 0, 0}, {3, 4, 0, 0}, c) ==
          FieldVector{3, 3, 0, 0});
    CHECK(e.pointwise_multiply({2, 3, 4, 1}, {1, 1, 1, 1}, c) ==
          FieldVector{2, 3, 4, 1});
    CHECK(e.pointwise_multiply({2, 3, 4, 1}, {0, 0, 0, 0}, c) ==
          FieldVector{0, 0, 0, 0});
    CHECK_THROWS_AS((void)e.pointwise_multiply({1, 2}, {1, 2, 3}, c),
                    std::length_error);
}

TEST_CASE("direct-mode mulmod count matches the closed-form tree walk") {
    for (auto [target, m] : std::vector<std::pair<u64, u64>>{
             {4, 0}, {16, 0}, {81, 0}, {100, 3}, {256, 0}}) {
        Fixture f(target, m);
        Engine e = f.engine();
        std::mt19937_64 rng(41);
        FieldVector x = random_vector(f.plan.length_n, f.plan.field_prime_P, rng);
        OpCounts c;
        (void)e.forward(x, LeafMode::direct_leaves, c);
        CHECK(c.mulmod == predicted_direct_mulmod(f.plan));
    }
}

TEST_CASE("counters are exact and data independent") {
    Fixture f(81);
    Engine e = f.engine();
    std::mt19937_64 rng(43);
    for (LeafMode mode : {LeafMode::direct_leaves, LeafMode::lookup_leaves}) {
        OpCounts first;
        (void)e.forward(random_vector(81, f.plan.field_prime_P, rng), mode, first);
        for (int trial = 0; trial < 5; ++trial) {
            OpCounts c;
            (void)e.forward(random_vector(81, f.plan.field_prime_P, rng), mode, c);
            CHECK(c == first);
        }
    }
}

TEST_CASE("lookup leaves read Z dft entries per leaf") {
    // pure-m tree: every leaf is the same size, so the dft read count is
    // exactly (leaf calls) * Z
    Fixture f(16); // 16 = 4*4, m = 4: 8 leaf calls
    Engine e = f.engine();
    std::mt19937_64 rng(47);
    OpCounts direct_c, lookup_c;
    FieldVector x = random_vector(16, f.plan.field_prime_P, rng);
    (void)e.forward(x, LeafMode::direct_leaves, direct_c);
    (void)e.forward(x, LeafMode::lookup_leaves, lookup_c);

    const u64 Z = f.plan.leaf_primes.size();
    const u64 leaf_calls = 8;
    // direct mode reads twiddles only; lookup mode adds forward, dft and
    // combine reads; the dft family contributes exactly leaf_calls * Z
    u64 d_F = ceil_div(bit_width_u64(f.plan.field_prime_P), f.plan.leaf_digit_bits);
    u64 m_bits = bit_width_u64(f.plan.prime_product_M - 1);
    u64 d_red = ceil_div(m_bits, f.plan.reduce_digit_bits);
    u64 per_leaf = 4 * Z * d_F        // decompose reads
                   + Z                // dft reads
                   + 4 * (Z + d_red); // combine reads
    // each of the 9 twiddles reads the power table once and runs one
    // tabular multiply (d^2 digit-table reads)
    u64 d = f.tabs.digit.d;
    u64 twiddle_reads = 9 * (1 + d * d);
    CHECK(lookup_c.table_reads == leaf_calls * per_leaf + twiddle_reads);
    CHECK(lookup_c.mulmod == 9); // only twiddle multiplies remain
}

TEST_CASE("mode outputs are identical on every tested input") {
    Fixture f(100, 3); // mixed 4,3,3,3 tree
    Engine e = f.engine();
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        FieldVector x = random_vector(f.plan.length_n, f.plan.field_prime_P, rng);
        OpCounts c;
        REQUIRE(e.forward(x, LeafMode::direct_leaves, c) ==
                e.forward(x, LeafMode::lookup_leaves, c));
    }
}

TEST_CASE("input validation") {
    Fixture f(4);
    Engine e = f.engine();
    OpCounts c;
    CHECK_THROWS_AS((void)e.forward({1, 2, 3}, LeafMode::direct_leaves, c),
                    std::length_error);
    CHECK_THROWS_AS((void)e.forward({1, 2, 3, 5}, LeafMode::direct_leaves, c),
                    std::invalid_argument); // 5 >= P
    CHECK_THROWS_AS((void)e.inverse({1, 2, 3}, LeafMode::direct_leaves, c),
                    std::length_error);
}
