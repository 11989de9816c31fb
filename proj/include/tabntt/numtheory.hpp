#pragma once
// numtheory.hpp - exact integer primitives used by preprocessing:
// sieving, primality, factorization, prime search in arithmetic
// progressions, multiplicative order, root-of-unity search.

#include <map>
#include <vector>

#include "tabntt/common.hpp"

namespace tabntt::numtheory {

struct PrimeList {
    u64 limit = 0;
    std::vector<u64> primes;
};

struct Factorization {
    u64 value = 1;
    std::map<u64, u32> factors; // prime -> exponent
};

// Result of the progression search P = n*d + 1.
struct FieldPrime {
    u64 value = 0;
    bool within_linnik_bound = false; // P <= n^L
};

enum class RootStrategy { deterministic_sweep, randomized };

// All primes <= limit, ascending. Segmented Eratosthenes.
PrimeList sieve_primes(u64 limit);

// Deterministic and exact for all 64-bit inputs (Miller-Rabin with a
// proven base set).
bool is_prime(u64 n);

// Exact prime factorization; trial division with a Pollard-Brent
// fallback for large cofactors. n >= 1.
Factorization factorize(u64 n);

// Smallest prime P = n*d + 1 with d >= 1 and P >= min_value.
// Reports whether P <= n^linnik_exponent. Throws std::runtime_error if
// nothing is found below n^(linnik_exponent+1) (saturating).
FieldPrime find_field_prime(u64 n, u32 linnik_exponent, u64 min_value = 1);

// Smallest t >= 1 with a^t = 1 (mod modulus); computed by walking the
// divisor lattice of phi(modulus). Throws std::invalid_argument if
// gcd(a, modulus) != 1.
u64 multiplicative_order(u64 a, u64 modulus);

// An element of multiplicative order exactly n modulo prime P.
// Both strategies satisfy the same postcondition:
//   w^n = 1 and w^(n/t) != 1 for every prime t | n.
// Throws std::invalid_argument if n does not divide P-1.
u64 find_root_of_unity(u64 P, u64 n, RootStrategy strategy, u64 seed = 0);

} // namespace tabntt::numtheory
