// acceptance_main.cpp - end-to-end acceptance suite. Runs every criterion
// at its stated tolerance (exact integer equality throughout) and prints
// one pass/fail line per criterion. Exit code = number of failures.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "tabntt/numtheory.hpp"
#include "tabntt/oracle.hpp"
#include "tabntt/serialize.hpp"

using namespace tabntt;
using transform::Engine;
using transform::FieldVector;
using transform::LeafMode;

namespace {

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << why;
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

int threads_available() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : static_cast<int>(hw);
}

// chunked parallel loop; body(index) returns false on mismatch
template <typename Body>
u64 parallel_count_failures(u64 begin, u64 end, const Body& body) {
    const int workers = threads_available();
    std::atomic<u64> next{begin};
    std::atomic<u64> failures{0};
    const u64 chunk = std::max<u64>(1, (end - begin) / 256);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                u64 lo = next.fetch_add(chunk);
                if (lo >= end) break;
                u64 hi = std::min(end, lo + chunk);
                for (u64 i = lo; i < hi; ++i)
                    if (!body(i)) failures.fetch_add(1);
            }
        });
    }
    for (auto& t : pool) t.join();
    return failures.load();
}

bool trial_is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FieldVector seeded_vector(u64 n, u64 P, u64 seed) {
    std::mt19937_64 rng(seed);
    FieldVector x(n);
    for (u64& v : x) v = rng() % P;
    return x;
}

bigmult::Natural random_natural_bits(u64 bits, std::mt19937_64& rng) {
    bigmult::Natural n;
    n.limbs.resize((bits + 63) / 64);
    for (u64& v : n.limbs) v = rng();
    if (bits % 64) n.limbs.back() &= (u64{1} << (bits % 64)) - 1;
    if (!n.limbs.empty()) n.limbs.back() |= u64{1} << ((bits - 1) % 64);
    n.trim();
    return n;
}

// ---------------------------------------------------------------------------
// the sweep: realized sizes 16 .. 2^16
// ---------------------------------------------------------------------------

struct SweepEntry {
    u64 target;
    u64 forced_m; // 0 = budget search
    planner::TransformPlan plan;
    tables::TableSet tables;
};

std::vector<SweepEntry> build_sweep() {
    std::vector<SweepEntry> sweep;
    const std::vector<std::pair<u64, u64>> specs = {
        {16, 0}, {36, 2}, {81, 0}, {256, 0},
        {1296, 2}, {4374, 2}, {6561, 0}, {65536, 0},
    };
    for (auto [target, m] : specs) {
        SweepEntry e;
        e.target = target;
        e.forced_m = m;
        planner::PlannerConfig cfg;
        cfg.forced_m = m;
        e.plan = planner::make_plan_cfg(target, cfg);
        e.tables = tables::build_tables(e.plan);
        sweep.push_back(std::move(e));
    }
    return sweep;
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

Outcome criterion_1_dft_oracle(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        if (e.plan.length_n > 4096) continue;
        Engine engine(e.plan, e.tables);
        for (int trial = 0; trial < 50; ++trial) {
            FieldVector x = seeded_vector(e.plan.length_n, e.plan.field_prime_P,
                                          1000 * e.plan.length_n + trial);
            FieldVector expected =
                oracle::naive_dft(x, e.plan.root_omega, e.plan.field_prime_P);
            OpCounts c;
            if (engine.forward(x, LeafMode::direct_leaves, c) != expected) {
                out.fail("direct mode mismatch at n=" + std::to_string(e.plan.length_n));
                break;
            }
            if (engine.forward(x, LeafMode::lookup_leaves, c) != expected) {
                out.fail("lookup mode mismatch at n=" + std::to_string(e.plan.length_n));
                break;
            }
        }
    }
    out.detail << "both leaf modes equal naive_dft, 50 vectors per size <= 4096";
    return out;
}

Outcome criterion_2_roundtrip(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        if (e.plan.length_n > 4096) continue;
        Engine engine(e.plan, e.tables);
        for (int trial = 0; trial < 100; ++trial) {
            FieldVector x = seeded_vector(e.plan.length_n, e.plan.field_prime_P,
                                          2000 * e.plan.length_n + trial);
            LeafMode mode =
                trial % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
            OpCounts c;
            if (engine.inverse(engine.forward(x, mode, c), mode, c) != x) {
                out.fail("roundtrip broke at n=" + std::to_string(e.plan.length_n));
                break;
            }
        }
    }
    out.detail << "inverse(forward(x)) == x, 100 vectors per size";
    return out;
}

Outcome criterion_3_convolution(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        if (e.plan.length_n > 4096) continue;
        Engine engine(e.plan, e.tables);
        const u64 P = e.plan.field_prime_P;
        for (int trial = 0; trial < 25; ++trial) {
            FieldVector a = seeded_vector(e.plan.length_n, P,
                                          3000 * e.plan.length_n + 2 * trial);
            FieldVector b = seeded_vector(e.plan.length_n, P,
                                          3000 * e.plan.length_n + 2 * trial + 1);
            LeafMode mode =
                trial % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
            OpCounts c;
            FieldVector got = engine.inverse(
                engine.pointwise_multiply(engine.forward(a, mode, c),
                                          engine.forward(b, mode, c), c),
                mode, c);
            if (got != oracle::cyclic_convolution(a, b, P)) {
                out.fail("convolution mismatch at n=" + std::to_string(e.plan.length_n));
                break;
            }
        }
    }
    out.detail << "NTT convolution equals direct cyclic convolution, 25 pairs per size";
    return out;
}

Outcome criterion_4_multiplication() {
    Outcome out;

    // exhaustive a, b < 2^12 on a small plan
    {
        planner::TransformPlan plan = planner::plan_for_multiply(12, 12);
        tables::TableSet tabs = tables::build_tables(plan);
        Engine engine(plan, tabs);
        u64 mism = parallel_count_failures(0, u64{1} << 12, [&](u64 a) {
            OpCounts c;
            LeafMode mode = a % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
            for (u64 b = 0; b < (u64{1} << 12); ++b) {
                bigmult::Natural got =
                    bigmult::multiply(bigmult::Natural::from_u64(a),
                                      bigmult::Natural::from_u64(b), engine, mode, c);
                if (!(got == bigmult::Natural::from_u64(a * b))) return false;
            }
            return true;
        });
        out.expect(mism == 0, "exhaustive 2^12 x 2^12 mismatches: " + std::to_string(mism));
    }

    // 10^3 random pairs at each operand size
    for (u64 bits : {u64{256}, u64{1024}, u64{16384}, u64{131072}}) {
        planner::TransformPlan plan = planner::plan_for_multiply(bits, bits);
        tables::TableSet tabs = tables::build_tables(plan);
        Engine engine(plan, tabs);
        u64 mism = parallel_count_failures(0, 1000, [&](u64 trial) {
            std::mt19937_64 rng(4000 + bits * 7 + trial);
            bigmult::Natural a = random_natural_bits(bits, rng);
            bigmult::Natural b = random_natural_bits(bits, rng);
            // the largest size leans on direct leaves for wall time; a
            // lookup-mode slice keeps both paths covered
            LeafMode mode;
            if (bits >= 131072)
                mode = trial < 16 ? LeafMode::lookup_leaves : LeafMode::direct_leaves;
            else
                mode = trial % 2 ? LeafMode::direct_leaves : LeafMode::lookup_leaves;
            OpCounts c;
            bigmult::Natural got = bigmult::multiply(a, b, engine, mode, c);
            return got == oracle::schoolbook_multiply(a, b);
        });
        out.expect(mism == 0, std::to_string(bits) + "-bit mismatches: " +
                                  std::to_string(mism));
    }
    out.detail << "exhaustive < 2^12 plus 10^3 random pairs at 2^8/2^10/2^14/2^17 bits";
    return out;
}

Outcome criterion_5_crt(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        const u64 P = e.plan.field_prime_P;
        if (P > (u64{1} << 12)) continue;
        OpCounts c;

        // exhaustive roundtrip below P
        for (u64 v = 0; v < P; ++v) {
            tables::ResidueTuple t = tables::crt_decompose(v, e.tables.leaf, c);
            for (size_t j = 0; j < e.plan.leaf_primes.size(); ++j)
                if (t.residues[j] != v % e.plan.leaf_primes[j]) {
                    out.fail("decompose wrong at P=" + std::to_string(P));
                    break;
                }
            u64 back = tables::crt_combine(t, e.tables.leaf, c);
            if (back != v ||
                tables::combine_reduce_to_P(back, P, e.tables.leaf.combine, c) != v) {
                out.fail("combine roundtrip broke at P=" + std::to_string(P));
                break;
            }
        }

        // per-channel table content vs direct DFT, exhaustive when q^m <= 2^16
        for (size_t si = 0; si < e.tables.leaf.dft.sizes.size(); ++si) {
            const u64 mu = e.tables.leaf.dft.sizes[si];
            const u64 leaf_root = pow_mod(e.plan.root_omega, e.plan.length_n / mu, P);
            for (size_t j = 0; j < e.plan.leaf_primes.size(); ++j) {
                const u64 q = e.plan.leaf_primes[j];
                const u64 tuples = sat_pow(q, mu);
                if (tuples > (u64{1} << 16)) continue;
                std::vector<u64> digits(mu);
                for (u64 idx = 0; idx < tuples; ++idx) {
                    u64 rest = idx;
                    for (u64 i = mu; i-- > 0;) {
                        digits[i] = rest % q;
                        rest /= q;
                    }
                    for (u64 k = 0; k < mu; ++k) {
                        u64 acc = 0;
                        for (u64 i = 0; i < mu; ++i)
                            acc += digits[i] * (pow_mod(leaf_root, (i * k) % mu, P) % q);
                        if (e.tables.leaf.dft.tables[si][j][idx * mu + k] != acc % q) {
                            out.fail("dft table mismatch q=" + std::to_string(q));
                            idx = tuples;
                            break;
                        }
                    }
                }
            }
        }
    }
    out.detail << "CRT roundtrip exhaustive below P; leaf DFT tables exhaustive for q^m <= 2^16";
    return out;
}

Outcome criterion_6_prime_root(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        const u64 n = e.plan.length_n;
        const u64 P = e.plan.field_prime_P;
        out.expect(trial_is_prime(P), "P not prime at n=" + std::to_string(n));
        out.expect((P - 1) % n == 0, "P != 1 mod n at n=" + std::to_string(n));
        for (u64 c = n + 1; c < P; c += n)
            if (trial_is_prime(c)) {
                out.fail("P not minimal at n=" + std::to_string(n));
                break;
            }
        out.expect(P <= sat_pow(n, 5), "Linnik bound exceeded at n=" + std::to_string(n));
        out.expect(e.plan.linnik_ok, "linnik flag wrong at n=" + std::to_string(n));

        out.expect(pow_mod(e.plan.root_omega, n, P) == 1,
                   "omega^n != 1 at n=" + std::to_string(n));
        for (auto [t, exp] : numtheory::factorize(n).factors) {
            (void)exp;
            out.expect(pow_mod(e.plan.root_omega, n / t, P) != 1,
                       "omega order below n at n=" + std::to_string(n));
        }
    }
    out.detail << "P prime, minimal in the progression, P <= n^5; omega has exact order n";
    return out;
}

Outcome criterion_7_constant_ops(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    const SweepEntry& e = sweep.back(); // largest plan
    std::mt19937_64 rng(7000);
    OpCounts first;
    (void)tables::tabular_mulmod(0, 0, e.tables.digit, first);
    for (int trial = 0; trial < 1000; ++trial) {
        u64 a = rng() % e.plan.field_prime_P;
        u64 b = rng() % e.plan.field_prime_P;
        OpCounts c;
        (void)tables::tabular_mulmod(a, b, e.tables.digit, c);
        if (!(c == first)) {
            out.fail("counter drift at trial " + std::to_string(trial));
            break;
        }
    }
    out.detail << "tabular_mulmod counters identical across 10^3 random operand pairs"
               << " (reads=" << first.table_reads << " adds=" << first.addmod
               << " compares=" << first.compares << ")";
    return out;
}

Outcome criterion_8_cost_shape(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    struct Row {
        u64 n;
        u64 direct_mulmod;
        u64 direct_total;
        u64 lookup_total;
    };
    std::vector<Row> rows;
    for (const SweepEntry& e : sweep) {
        Engine engine(e.plan, e.tables);
        FieldVector x = seeded_vector(e.plan.length_n, e.plan.field_prime_P,
                                      8000 + e.plan.length_n);
        OpCounts direct_c, lookup_c;
        (void)engine.forward(x, LeafMode::direct_leaves, direct_c);
        (void)engine.forward(x, LeafMode::lookup_leaves, lookup_c);
        rows.push_back(Row{e.plan.length_n, direct_c.mulmod, direct_c.total(),
                           lookup_c.total()});
    }

    // (a) direct-mode mulmod / (n log2 n) varies by at most a factor of 4
    double lo = 1e300, hi = 0;
    for (const Row& r : rows) {
        double ratio = static_cast<double>(r.direct_mulmod) /
                       (static_cast<double>(r.n) * std::log2(static_cast<double>(r.n)));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.expect(hi / lo <= 4.0,
               "mulmod/(n log n) band " + std::to_string(hi / lo) + " exceeds 4");

    // (b) lookup total strictly below direct total for every n >= 256
    for (const Row& r : rows)
        if (r.n >= 256)
            out.expect(r.lookup_total < r.direct_total,
                       "lookup not below direct at n=" + std::to_string(r.n));

    // (c) lookup/direct non-increasing across the three largest sizes
    std::ostringstream trend;
    size_t count = rows.size();
    for (size_t i = count - 3; i + 1 < count; ++i) {
        double a = static_cast<double>(rows[i].lookup_total) / rows[i].direct_total;
        double b = static_cast<double>(rows[i + 1].lookup_total) / rows[i + 1].direct_total;
        if (b > a)
            out.fail("ratio increases " + std::to_string(rows[i].n) + "->" +
                     std::to_string(rows[i + 1].n) + " (" + std::to_string(a) +
                     " -> " + std::to_string(b) + ")");
    }
    for (const Row& r : rows)
        trend << " " << r.n << ":"
              << static_cast<double>(r.lookup_total) / r.direct_total;
    out.detail << "band " << hi / lo << "x; lookup/direct ratios" << trend.str();
    return out;
}

Outcome criterion_9_serialization(const std::vector<SweepEntry>& sweep) {
    Outcome out;
    for (const SweepEntry& e : sweep) {
        if (e.plan.length_n != 256 && e.plan.length_n != 1296) continue;

        // byte-identical re-preprocessing
        planner::PlannerConfig cfg;
        cfg.forced_m = e.forced_m;
        planner::TransformPlan plan2 = planner::make_plan_cfg(e.target, cfg);
        tables::TableSet tabs2 = tables::build_tables(plan2);
        std::vector<u8> bytes1 = serialize::to_bytes(e.plan, e.tables);
        std::vector<u8> bytes2 = serialize::to_bytes(plan2, tabs2);
        out.expect(bytes1 == bytes2,
                   "rebuild not byte-identical at n=" + std::to_string(e.plan.length_n));

        // loaded tables behave identically to freshly built ones
        serialize::LoadedTables lt = serialize::from_bytes(bytes1);
        Engine built(e.plan, e.tables);
        Engine loaded(lt.plan, lt.tables);
        for (int trial = 0; trial < 10; ++trial) {
            FieldVector x = seeded_vector(e.plan.length_n, e.plan.field_prime_P,
                                          9000 + trial);
            for (LeafMode mode : {LeafMode::direct_leaves, LeafMode::lookup_leaves}) {
                OpCounts cb, cl;
                FieldVector yb = built.forward(x, mode, cb);
                FieldVector yl = loaded.forward(x, mode, cl);
                if (yb != yl || !(cb == cl)) {
                    out.fail("loaded tables diverge at n=" +
                             std::to_string(e.plan.length_n));
                    break;
                }
            }
        }
        OpCounts c;
        for (u64 v = 0; v < std::min<u64>(lt.plan.field_prime_P, 4096); ++v) {
            tables::ResidueTuple t = tables::crt_decompose(v, lt.tables.leaf, c);
            if (tables::crt_combine(t, lt.tables.leaf, c) != v) {
                out.fail("loaded CRT roundtrip broke");
                break;
            }
        }
    }
    out.detail << "byte-identical rebuilds; loaded tables pass the invariant suite";
    return out;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failures = 0;

    auto t0 = clock::now();
    std::vector<SweepEntry> sweep = build_sweep();
    {
        std::ostringstream sizes;
        for (const SweepEntry& e : sweep) sizes << " " << e.plan.length_n;
        std::printf("sweep realized sizes:%s\n", sizes.str().c_str());
    }

    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)(const std::vector<SweepEntry>&);
    };
    const Entry entries[] = {
        {1, "DFT oracle equivalence", criterion_1_dft_oracle},
        {2, "inverse roundtrip", criterion_2_roundtrip},
        {3, "convolution theorem", criterion_3_convolution},
        {5, "CRT machinery", criterion_5_crt},
        {6, "prime and root preprocessing", criterion_6_prime_root},
        {7, "constant-operation mulmod", criterion_7_constant_ops},
        {8, "cost-shape proxy", criterion_8_cost_shape},
        {9, "serialization determinism", criterion_9_serialization},
    };

    auto report = [&](int id, const char* name, const Outcome& out, double secs) {
        std::printf("[%s] criterion %d: %s — %s (%.1fs)\n",
                    out.pass ? "PASS" : "FAIL", id, name, out.detail.str().c_str(),
                    secs);
        if (!out.pass) ++failures;
    };

    for (const Entry& e : entries) {
        auto start = clock::now();
        Outcome out = e.fn(sweep);
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        report(e.id, e.name, out, secs);
        if (e.id == 3) { // criterion 4 runs between 3 and 5, no sweep needed
            auto s4 = clock::now();
            Outcome out4 = criterion_4_multiplication();
            double secs4 = std::chrono::duration<double>(clock::now() - s4).count();
            report(4, "multiplication exactness", out4, secs4);
        }
    }

    double total = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("acceptance total: %.1fs, %d failure(s)\n", total, failures);
    return failures;
}
