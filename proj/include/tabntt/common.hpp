#pragma once
// common.hpp - shared integer types and word-level modular helpers

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace tabntt {

using u8 = uint8_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i64 = int64_t;
using u128 = unsigned __int128;

// Thrown when a requested table would exceed the configured memory cap.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a plan cannot carry the requested multiplication (R^2 * n >= P).
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 add_mod_raw(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}

inline u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Modular inverse for prime modulus.
inline u64 inv_mod_prime(u64 a, u64 p) {
    return pow_mod(a % p, p - 2, p);
}

// Number of bits needed to represent x; bit_width(0) == 0.
inline int bit_width_u64(u64 x) {
    int w = 0;
    while (x != 0) { x >>= 1; ++w; }
    return w;
}

inline u64 next_pow2(u64 x) {
    u64 p = 1;
    while (p < x) p <<= 1;
    return p;
}

inline int log2_exact(u64 pow2_value) {
    int k = 0;
    while ((u64{1} << k) < pow2_value) ++k;
    return k;
}

inline u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

// Saturating multiply; caps at UINT64_MAX instead of wrapping.
inline u64 sat_mul(u64 a, u64 b) {
    if (a == 0 || b == 0) return 0;
    u128 p = static_cast<u128>(a) * b;
    if (p > static_cast<u128>(UINT64_MAX)) return UINT64_MAX;
    return static_cast<u64>(p);
}

// a^e, capped at UINT64_MAX.
inline u64 sat_pow(u64 a, u64 e) {
    u64 r = 1;
    while (e > 0) {
        if (e & 1) r = sat_mul(r, a);
        e >>= 1;
        if (e > 0) a = sat_mul(a, a);
    }
    return r;
}

} // namespace tabntt
