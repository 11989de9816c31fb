// tabntt_main.cpp - command-line driver: plan, preprocess, dft,
// multiply, bench, verify.
//
// Exit codes: 0 ok, 2 planning failure, 3 preprocessing/capacity
// failure, 4 bench verification mismatch, 5 file-format failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "tabntt/numtheory.hpp"
#include "tabntt/oracle.hpp"
#include "tabntt/serialize.hpp"

using namespace tabntt;
using transform::LeafMode;

namespace {

constexpr int kExitPlan = 2;
constexpr int kExitPreprocess = 3;
constexpr int kExitBenchVerify = 4;
constexpr int kExitFormat = 5;

struct PlanArgs {
    u64 n = 0;
    u64 m = 0;
    u64 budget_bits = 0;
    u64 seed = 0;
};

planner::TransformPlan plan_from_args(const PlanArgs& args) {
    planner::PlannerConfig cfg;
    cfg.budget_bits = args.budget_bits;
    cfg.seed = args.seed;
    cfg.forced_m = args.m;
    return planner::make_plan_cfg(args.n, cfg);
}

std::string join_u64(const std::vector<u64>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

void print_plan(const planner::TransformPlan& plan, std::ostream& os) {
    os << "target_n=" << plan.target_n << "\n";
    os << "realized_n=" << plan.length_n << "\n";
    os << "P=" << plan.field_prime_P << "\n";
    os << "omega=" << plan.root_omega << "\n";
    os << "R=" << plan.digit_base_R << "\n";
    os << "r_bits=" << plan.digit_base_bits << "\n";
    os << "linnik_L=" << plan.linnik_L << "\n";
    os << "linnik_ok=" << (plan.linnik_ok ? 1 : 0) << "\n";
    os << "m=" << plan.base_size_m << "\n";
    os << "tree_k=" << plan.tree_k << "\n";
    os << "z=" << plan.z_split << "\n";
    os << "tree_levels=" << join_u64(plan.tree_levels) << "\n";
    os << "leaf_sizes=" << join_u64(plan.leaf_sizes) << "\n";
    os << "Z=" << plan.leaf_primes.size() << "\n";
    os << "leaf_primes=" << join_u64(plan.leaf_primes) << "\n";
    os << "prime_product_M=" << plan.prime_product_M << "\n";
    os << "budget_bits=" << plan.budget_bits << "\n";
    os << "total_table_bits=" << plan.total_table_bits << "\n";
    os << "fits=" << (plan.fits ? 1 : 0) << "\n";
    os << "leaf_digit_bits=" << plan.leaf_digit_bits << "\n";
    os << "reduce_digit_bits=" << plan.reduce_digit_bits << "\n";
    os << "mult_base=" << plan.mult_base << "\n";
    os << "m_formula_diag=" << planner::paper_m_diagnostic(plan.length_n) << "\n";
}

std::vector<u64> parse_u64_list(const std::string& text) {
    std::vector<u64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoull(item));
    return out;
}

LeafMode parse_mode(const std::string& mode) {
    if (mode == "direct") return LeafMode::direct_leaves;
    if (mode == "lookup") return LeafMode::lookup_leaves;
    throw CLI::ValidationError("--mode must be direct or lookup");
}

// ---------------------------------------------------------------------------
// verify helpers
// ---------------------------------------------------------------------------

struct VerifyStats {
    u64 checks = 0;
    u64 failures = 0;

    void expect(bool ok) {
        ++checks;
        if (!ok) ++failures;
    }
};

void verify_digit_tables(const serialize::LoadedTables& lt, bool full,
                         VerifyStats& stats) {
    const auto& t = lt.tables.digit;
    const u64 P = t.P;
    std::mt19937_64 rng(7);
    u64 total = t.entries.size();
    u64 samples = full ? total : std::min<u64>(total, 4096);
    for (u64 s = 0; s < samples; ++s) {
        u64 flat = full ? s : rng() % total;
        u64 l = flat / (t.R * t.R);
        u64 a = (flat / t.R) % t.R;
        u64 b = flat % t.R;
        u64 expected = mul_mod(mul_mod(a % P, b % P, P), pow_mod(t.R % P, l, P), P);
        stats.expect(t.entries[flat] == expected);
    }
}

void verify_forward_tables(const serialize::LoadedTables& lt, VerifyStats& stats) {
    const auto& fwd = lt.tables.leaf.forward;
    const auto& primes = lt.plan.leaf_primes;
    for (u32 k = 0; k < fwd.d_F; ++k) {
        for (size_t j = 0; j < primes.size(); ++j) {
            u64 q = primes[j];
            u64 weight = pow_mod(fwd.R_F % q, k, q);
            for (u64 x = 0; x < fwd.position_entries[k]; ++x)
                stats.expect(fwd.at(k, static_cast<u32>(j), x) ==
                             mul_mod(x % q, weight, q));
        }
    }
}

void verify_dft_tables(const serialize::LoadedTables& lt, bool full,
                       VerifyStats& stats) {
    const auto& plan = lt.plan;
    const auto& dft = lt.tables.leaf.dft;
    std::mt19937_64 rng(11);
    for (size_t si = 0; si < dft.sizes.size(); ++si) {
        u64 mu = dft.sizes[si];
        u64 leaf_root =
            pow_mod(plan.root_omega, plan.length_n / mu, plan.field_prime_P);
        for (size_t j = 0; j < plan.leaf_primes.size(); ++j) {
            u64 q = plan.leaf_primes[j];
            u64 tuples = sat_pow(q, mu);
            bool exhaustive = full && tuples * mu <= (u64{1} << 16);
            u64 samples = exhaustive ? tuples : std::min<u64>(tuples, 512);
            std::vector<u64> digits(mu);
            for (u64 s = 0; s < samples; ++s) {
                u64 idx = exhaustive ? s : rng() % tuples;
                u64 rest = idx;
                for (u64 i = mu; i-- > 0;) {
                    digits[i] = rest % q;
                    rest /= q;
                }
                for (u64 k = 0; k < mu; ++k) {
                    u64 acc = 0;
                    for (u64 i = 0; i < mu; ++i) {
                        u64 w = pow_mod(leaf_root, (i * k) % mu, plan.field_prime_P) % q;
                        acc += digits[i] * w;
                    }
                    stats.expect(dft.tables[si][j][idx * mu + k] == acc % q);
                }
            }
        }
    }
}

void verify_combine_roundtrip(const serialize::LoadedTables& lt, bool full,
                              VerifyStats& stats) {
    const auto& plan = lt.plan;
    const auto& leaf = lt.tables.leaf;
    u64 limit = full ? std::min<u64>(plan.field_prime_P, u64{1} << 12) : 256;
    std::mt19937_64 rng(13);
    for (u64 s = 0; s < limit; ++s) {
        u64 c = (full && plan.field_prime_P <= (u64{1} << 12))
                    ? s
                    : rng() % plan.field_prime_P;
        OpCounts scratch;
        tables::ResidueTuple tuple = tables::crt_decompose(c, leaf, scratch);
        for (size_t j = 0; j < plan.leaf_primes.size(); ++j)
            stats.expect(tuple.residues[j] == c % plan.leaf_primes[j]);
        u64 v = tables::crt_combine(tuple, leaf, scratch);
        stats.expect(v == c);
        stats.expect(tables::combine_reduce_to_P(v, plan.field_prime_P,
                                                 leaf.combine, scratch) == c);
    }
}

void verify_header(const serialize::LoadedTables& lt, VerifyStats& stats) {
    const auto& plan = lt.plan;
    stats.expect(numtheory::is_prime(plan.field_prime_P));
    stats.expect((plan.field_prime_P - 1) % plan.length_n == 0);
    stats.expect(pow_mod(plan.root_omega, plan.length_n, plan.field_prime_P) == 1);
    for (auto [t, e] : numtheory::factorize(plan.length_n).factors) {
        (void)e;
        stats.expect(pow_mod(plan.root_omega, plan.length_n / t,
                             plan.field_prime_P) != 1);
    }
    u128 recon = static_cast<u128>(plan.field_prime_P) * plan.field_prime_P *
                 plan.leaf_sizes.back();
    stats.expect(static_cast<u128>(plan.prime_product_M) > recon);
    stats.expect(tables::total_table_bits(lt.tables, plan) ==
                 plan.total_table_bits);
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchSpec {
    u64 target = 0;
    u64 forced_m = 0;
};

std::vector<BenchSpec> parse_bench_sizes(const std::string& text) {
    std::vector<BenchSpec> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        BenchSpec spec;
        auto colon = item.find(':');
        if (colon == std::string::npos) {
            spec.target = std::stoull(item);
        } else {
            spec.target = std::stoull(item.substr(0, colon));
            spec.forced_m = std::stoull(item.substr(colon + 1));
        }
        out.push_back(spec);
    }
    return out;
}

int run_bench(const std::string& sizes_text, const std::string& modes_text,
              const std::string& csv_path, u64 budget_bits, u64 seed) {
    std::vector<BenchSpec> specs = parse_bench_sizes(sizes_text);
    std::vector<std::string> modes;
    {
        std::stringstream ss(modes_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) modes.push_back(item);
    }
    if (specs.empty() || modes.empty()) {
        std::cerr << "bench: need --sizes and --modes\n";
        return kExitBenchVerify;
    }

    std::ostringstream csv;
    csv << "n,mode,mulmod,addmod,table_reads,compares,wall_time_ns,ratio\n";

    for (const BenchSpec& spec : specs) {
        planner::PlannerConfig cfg;
        cfg.budget_bits = budget_bits;
        cfg.seed = seed;
        cfg.forced_m = spec.forced_m;
        planner::TransformPlan plan = planner::make_plan_cfg(spec.target, cfg);
        tables::TableSet tabs = tables::build_tables(plan);
        transform::Engine engine(plan, tabs);

        std::mt19937_64 rng(seed ^ plan.length_n);
        transform::FieldVector x(plan.length_n);
        for (u64& v : x) v = rng() % plan.field_prime_P;

        for (const std::string& mode_name : modes) {
            LeafMode mode = parse_mode(mode_name);
            OpCounts counters;
            auto t0 = std::chrono::steady_clock::now();
            transform::FieldVector got = engine.forward(x, mode, counters);
            auto t1 = std::chrono::steady_clock::now();

            if (plan.length_n <= 4096) {
                std::vector<u64> expected =
                    oracle::naive_dft(x, plan.root_omega, plan.field_prime_P);
                if (got != expected) {
                    std::cerr << "bench: verification mismatch at n="
                              << plan.length_n << " mode=" << mode_name << "\n";
                    return kExitBenchVerify;
                }
            }

            double nlogn = static_cast<double>(plan.length_n) *
                           std::log2(static_cast<double>(plan.length_n));
            double ratio = static_cast<double>(counters.total()) / nlogn;
            u64 wall = static_cast<u64>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                    .count());
            csv << plan.length_n << ',' << mode_name << ',' << counters.mulmod
                << ',' << counters.addmod << ',' << counters.table_reads << ','
                << counters.compares << ',' << wall << ',' << std::fixed
                << std::setprecision(6) << ratio << "\n";
        }
    }

    if (csv_path.empty() || csv_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(csv_path);
        if (!out) {
            std::cerr << "bench: cannot write " << csv_path << "\n";
            return kExitBenchVerify;
        }
        out << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Preprocessed number-theoretic-transform engine"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    std::string out_path, tables_path, csv_path;
    std::string mode_name = "lookup";
    std::string modes_text = "direct,lookup";
    std::string sizes_text;
    std::string a_hex, b_hex, input_text;
    std::string level = "quick";
    bool inverse_flag = false;

    CLI::App* cmd_plan = app.add_subcommand("plan", "Print a transform plan");
    cmd_plan->add_option("--n", plan_args.n, "target transform length")->required();
    cmd_plan->add_option("--m", plan_args.m, "force the base-case size");
    cmd_plan->add_option("--budget-bits", plan_args.budget_bits, "table budget");
    cmd_plan->add_option("--seed", plan_args.seed, "root search seed");

    CLI::App* cmd_pre = app.add_subcommand("preprocess", "Build and save tables");
    cmd_pre->add_option("--n", plan_args.n, "target transform length")->required();
    cmd_pre->add_option("--m", plan_args.m, "force the base-case size");
    cmd_pre->add_option("--budget-bits", plan_args.budget_bits, "table budget");
    cmd_pre->add_option("--seed", plan_args.seed, "root search seed");
    cmd_pre->add_option("--out", out_path, "output NTTB file")->required();

    CLI::App* cmd_dft = app.add_subcommand("dft", "Transform a vector");
    cmd_dft->add_option("--tables", tables_path, "NTTB file")->required();
    cmd_dft->add_option("--input", input_text, "comma-separated coefficients")
        ->required();
    cmd_dft->add_option("--mode", mode_name, "direct|lookup");
    cmd_dft->add_flag("--inverse", inverse_flag, "apply the inverse transform");

    CLI::App* cmd_mul = app.add_subcommand("multiply", "Multiply two hex naturals");
    cmd_mul->add_option("--a", a_hex, "first operand, hex")->required();
    cmd_mul->add_option("--b", b_hex, "second operand, hex")->required();
    cmd_mul->add_option("--tables", tables_path, "optional NTTB file");
    cmd_mul->add_option("--mode", mode_name, "direct|lookup");
    cmd_mul->add_option("--seed", plan_args.seed, "root search seed");

    CLI::App* cmd_bench = app.add_subcommand("bench", "Operation-count sweep");
    cmd_bench->add_option("--sizes", sizes_text, "targets, e.g. 16,81,1296:2")
        ->required();
    cmd_bench->add_option("--modes", modes_text, "comma list of direct,lookup");
    cmd_bench->add_option("--csv", csv_path, "CSV output path ('-' = stdout)");
    cmd_bench->add_option("--budget-bits", plan_args.budget_bits, "table budget");
    cmd_bench->add_option("--seed", plan_args.seed, "input vector seed");

    CLI::App* cmd_verify = app.add_subcommand("verify", "Check a table file");
    cmd_verify->add_option("--tables", tables_path, "NTTB file")->required();
    cmd_verify->add_option("--level", level, "quick|full");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_plan->parsed()) {
            try {
                planner::TransformPlan plan = plan_from_args(plan_args);
                print_plan(plan, std::cout);
                return 0;
            } catch (const std::exception& e) {
                std::cerr << "plan: " << e.what() << "\n";
                return kExitPlan;
            }
        }

        if (cmd_pre->parsed()) {
            planner::TransformPlan plan;
            try {
                plan = plan_from_args(plan_args);
            } catch (const std::exception& e) {
                std::cerr << "preprocess: " << e.what() << "\n";
                return kExitPlan;
            }
            try {
                tables::TableSet tabs = tables::build_tables(plan);
                serialize::save_file(out_path, plan, tabs);
                std::cout << "wrote " << out_path << " ("
                          << plan.total_table_bits << " table bits)\n";
                return 0;
            } catch (const std::exception& e) {
                std::cerr << "preprocess: " << e.what() << "\n";
                return kExitPreprocess;
            }
        }

        if (cmd_dft->parsed()) {
            serialize::LoadedTables lt;
            try {
                lt = serialize::load_file(tables_path);
            } catch (const std::exception& e) {
                std::cerr << "dft: " << e.what() << "\n";
                return kExitFormat;
            }
            transform::Engine engine(lt.plan, lt.tables);
            std::vector<u64> x = parse_u64_list(input_text);
            OpCounts counters;
            std::vector<u64> y =
                inverse_flag ? engine.inverse(x, parse_mode(mode_name), counters)
                             : engine.forward(x, parse_mode(mode_name), counters);
            std::cout << join_u64(y) << "\n";
            return 0;
        }

        if (cmd_mul->parsed()) {
            bigmult::Natural a = bigmult::Natural::from_hex(a_hex);
            bigmult::Natural b = bigmult::Natural::from_hex(b_hex);
            if (a.is_zero() || b.is_zero()) {
                std::cout << "0x0\n";
                return 0;
            }
            try {
                planner::TransformPlan plan;
                tables::TableSet tabs;
                if (!tables_path.empty()) {
                    serialize::LoadedTables lt = serialize::load_file(tables_path);
                    plan = lt.plan;
                    tabs = std::move(lt.tables);
                } else {
                    plan = planner::plan_for_multiply(a.bit_length(), b.bit_length(),
                                                      0, plan_args.seed);
                    tabs = tables::build_tables(plan);
                }
                transform::Engine engine(plan, tabs);
                OpCounts counters;
                bigmult::Natural product =
                    bigmult::multiply(a, b, engine, parse_mode(mode_name), counters);
                std::cout << product.to_hex() << "\n";
                return 0;
            } catch (const capacity_error& e) {
                std::cerr << "multiply: " << e.what() << "\n";
                return kExitPreprocess;
            }
        }

        if (cmd_bench->parsed())
            return run_bench(sizes_text, modes_text, csv_path,
                             plan_args.budget_bits, plan_args.seed);

        if (cmd_verify->parsed()) {
            serialize::LoadedTables lt;
            try {
                lt = serialize::load_file(tables_path);
            } catch (const std::exception& e) {
                std::cerr << "verify: " << e.what() << "\n";
                return kExitFormat;
            }
            bool full = level == "full";
            VerifyStats stats;
            verify_header(lt, stats);
            verify_digit_tables(lt, full, stats);
            verify_forward_tables(lt, stats);
            verify_dft_tables(lt, full, stats);
            verify_combine_roundtrip(lt, full, stats);
            std::cout << "verify: " << (stats.checks - stats.failures) << "/"
                      << stats.checks << " checks passed\n";
            return stats.failures == 0 ? 0 : kExitFormat;
        }
    } catch (const serialize::format_error& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
