// numtheory.cpp - sieving, primality, factorization, progression prime
// search, multiplicative order, root-of-unity search.

#include "tabntt/numtheory.hpp"

#include <algorithm>
#include <random>

namespace tabntt::numtheory {

// ============================================================================
// Sieve and primality
// ============================================================================

PrimeList sieve_primes(u64 limit) {
    PrimeList out;
    out.limit = limit;
    if (limit < 2) return out;

    // Simple segmented Eratosthenes: root primes first, then 1M-entry
    // segments. Meets the Atkin contract exactly at desk scale.
    u64 root = 1;
    while (root * root <= limit) ++root;
    // root is now the smallest value with root^2 > limit

    std::vector<bool> small_composite(root + 1, false);
    std::vector<u64> root_primes;
    for (u64 i = 2; i <= root; ++i) {
        if (small_composite[i]) continue;
        root_primes.push_back(i);
        for (u64 j = i * i; j <= root; j += i) small_composite[j] = true;
    }
    for (u64 p : root_primes)
        if (p <= limit) out.primes.push_back(p);

    const u64 segment = 1u << 20;
    std::vector<bool> mark;
    for (u64 low = root + 1; low <= limit; low += segment) {
        u64 high = std::min(limit, low + segment - 1);
        mark.assign(high - low + 1, false);
        for (u64 p : root_primes) {
            if (p * p > high) break;
            u64 start = std::max(p * p, ((low + p - 1) / p) * p);
            for (u64 j = start; j <= high; j += p) mark[j - low] = true;
        }
        for (u64 i = low; i <= high; ++i)
            if (!mark[i - low]) out.primes.push_back(i);
    }
    return out;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // Deterministic Miller-Rabin; this base set is exact for all 64-bit n.
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// ============================================================================
// Factorization
// ============================================================================

namespace {

u64 pollard_brent(u64 n) {
    // n is odd, composite, and has no factor below the trial bound.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 power = 1, lam = 1;
        auto step = [&](u64 v) { return add_mod_raw(mul_mod(v, v, n), c % n, n); };
        while (d == 1) {
            if (power == lam) { x = y; power <<= 1; lam = 0; }
            y = step(y);
            ++lam;
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break; // cycle without factor; retry with next c
            d = gcd_u64(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(u64 n, std::map<u64, u32>& out) {
    if (n == 1) return;
    if (is_prime(n)) { ++out[n]; return; }
    u64 d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

Factorization factorize(u64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    Factorization f;
    f.value = n;
    u64 rest = n;
    for (u64 p : {2ull, 3ull, 5ull}) {
        while (rest % p == 0) { ++f.factors[p]; rest /= p; }
    }
    // wheel over 7, 11, 13, ... up to a fixed trial bound
    for (u64 p = 7; p <= 1u << 20 && p * p <= rest; p += 2) {
        while (rest % p == 0) { ++f.factors[p]; rest /= p; }
    }
    if (rest > 1) factor_rec(rest, f.factors);
    return f;
}

// ============================================================================
// Progression primes and roots of unity
// ============================================================================

FieldPrime find_field_prime(u64 n, u32 linnik_exponent, u64 min_value) {
    if (n < 2) throw std::invalid_argument("find_field_prime: n must be >= 2");
    if (linnik_exponent < 1)
        throw std::invalid_argument("find_field_prime: L must be >= 1");

    u64 linnik_bound = sat_pow(n, linnik_exponent);
    // the n^(L+1) cap frames the default search; a min_value floor (used
    // by multiply-capable plans) shifts the window up with it
    u64 search_cap = std::max(sat_pow(n, linnik_exponent + 1), sat_mul(min_value, 16));

    u64 d = 1;
    if (min_value > n + 1) d = (min_value - 1 + n - 1) / n; // first d with n*d+1 >= min_value
    for (;; ++d) {
        u64 candidate = sat_mul(n, d);
        if (candidate >= search_cap || candidate == UINT64_MAX)
            throw std::runtime_error("find_field_prime: no prime below n^(L+1)");
        candidate += 1;
        if (is_prime(candidate))
            return FieldPrime{candidate, candidate <= linnik_bound};
    }
}

u64 multiplicative_order(u64 a, u64 modulus) {
    if (modulus < 2) throw std::invalid_argument("multiplicative_order: modulus >= 2");
    a %= modulus;
    if (gcd_u64(a, modulus) != 1)
        throw std::invalid_argument("multiplicative_order: gcd(a, modulus) != 1");

    // phi(modulus) from the factorization of the modulus
    Factorization mf = factorize(modulus);
    u64 phi = 1;
    for (auto [p, e] : mf.factors) {
        u64 pe = 1;
        for (u32 i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }

    // order divides phi: strip each prime of phi while a^(t/p) == 1
    u64 t = phi;
    Factorization pf = factorize(phi);
    for (auto [p, e] : pf.factors) {
        for (u32 i = 0; i < e; ++i) {
            if (t % p == 0 && pow_mod(a, t / p, modulus) == 1)
                t /= p;
            else
                break;
        }
    }
    return t;
}

namespace {

bool order_is_exactly(u64 w, u64 n, u64 P, const Factorization& n_factors) {
    if (pow_mod(w, n, P) != 1) return false;
    for (auto [t, e] : n_factors.factors) {
        (void)e;
        if (pow_mod(w, n / t, P) == 1) return false;
    }
    return true;
}

} // namespace

u64 find_root_of_unity(u64 P, u64 n, RootStrategy strategy, u64 seed) {
    if (P < 2 || !is_prime(P))
        throw std::invalid_argument("find_root_of_unity: P must be prime");
    if (n == 0 || (P - 1) % n != 0)
        throw std::invalid_argument("find_root_of_unity: n must divide P-1");
    if (n == 1) return 1;

    Factorization n_factors = factorize(n);

    if (strategy == RootStrategy::deterministic_sweep) {
        // Sweep candidates ascending, skipping residues eliminated as
        // powers of earlier candidates (none of which can supply an
        // order-n element once their generator's order fails n | t).
        std::vector<bool> eliminated(P, false);
        for (u64 g = 2; g < P; ++g) {
            if (eliminated[g]) continue;
            u64 t = 0;
            u64 v = g;
            while (true) {
                ++t;
                if (v < P) eliminated[v] = true;
                if (v == 1) break;
                v = mul_mod(v, g, P);
            }
            // t is the multiplicative order of g
            if (t % n == 0) {
                u64 w = pow_mod(g, t / n, P);
                if (order_is_exactly(w, n, P, n_factors)) return w;
            }
        }
        throw std::runtime_error("find_root_of_unity: sweep exhausted");
    }

    // Randomized: guess g, get its order via the divisor walk, and take
    // the (t/n)-th power when n divides t.
    std::mt19937_64 rng(seed ^ (P * 0x9e3779b97f4a7c15ull));
    std::uniform_int_distribution<u64> dist(2, P - 1);
    for (int attempt = 0; attempt < 4096; ++attempt) {
        u64 g = dist(rng);
        u64 t = multiplicative_order(g, P);
        if (t % n != 0) continue;
        u64 w = pow_mod(g, t / n, P);
        if (order_is_exactly(w, n, P, n_factors)) return w;
    }
    throw std::runtime_error("find_root_of_unity: randomized search exhausted");
}

} // namespace tabntt::numtheory
