#pragma once
// bigmult.hpp - exact multiplication of arbitrary-size naturals through
// the NTT engine: digitize, transform, pointwise multiply, inverse
// transform, carry-normalize.

#include <string>
#include <vector>

#include "tabntt/transform.hpp"

namespace tabntt::bigmult {

// Little-endian base-2^64 natural number. Canonical: no trailing zero
// limbs; zero is the empty limb vector.
struct Natural {
    std::vector<u64> limbs;

    static Natural from_u64(u64 v);
    static Natural from_hex(const std::string& hex);
    std::string to_hex() const;

    bool is_zero() const { return limbs.empty(); }
    u64 bit_length() const;
    void trim();

    bool operator==(const Natural&) const = default;
};

// Little-endian base-R digits, canonical (no trailing zeros).
struct DigitVector {
    u64 base_R = 2;
    std::vector<u64> digits;
};

// Canonical base-R digits of value. pre: R >= 2, a power of two.
DigitVector digitize(const Natural& value, u64 R);

// Canonical digits of sum raw[i] * R^i. R >= 2 (any radix). Throws
// std::overflow_error if an entry breaks the convolution bound
// raw[i] < R^2 * len(raw).
DigitVector carry_normalize(const std::vector<u64>& raw, u64 R);

Natural assemble(const DigitVector& digits);

// Exact a*b via two forward transforms, a pointwise multiply, one
// inverse transform and carry normalization. pre: digit counts fit in
// n/2 each and B^2 * n < P (checked; throws capacity_error).
Natural multiply(const Natural& a, const Natural& b,
                 const transform::Engine& engine, transform::LeafMode mode,
                 OpCounts& counters);

} // namespace tabntt::bigmult
