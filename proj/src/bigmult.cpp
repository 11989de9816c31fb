// bigmult.cpp - natural-number container, digitization, carry
// normalization and the NTT multiplication pipeline.

#include "tabntt/bigmult.hpp"

#include <algorithm>
#include <cctype>

namespace tabntt::bigmult {

// ============================================================================
// Natural
// ============================================================================

void Natural::trim() {
    while (!limbs.empty() && limbs.back() == 0) limbs.pop_back();
}

Natural Natural::from_u64(u64 v) {
    Natural n;
    if (v != 0) n.limbs.push_back(v);
    return n;
}

u64 Natural::bit_length() const {
    if (limbs.empty()) return 0;
    return (limbs.size() - 1) * 64 + bit_width_u64(limbs.back());
}

Natural Natural::from_hex(const std::string& hex) {
    std::string s = hex;
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
    if (s.empty()) throw std::invalid_argument("from_hex: empty string");

    Natural n;
    n.limbs.assign((s.size() * 4 + 63) / 64, 0);
    u64 bit = 0;
    for (size_t i = s.size(); i-- > 0;) {
        char c = s[i];
        u64 v;
        if (c >= '0' && c <= '9') v = static_cast<u64>(c - '0');
        else if (c >= 'a' && c <= 'f') v = static_cast<u64>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') v = static_cast<u64>(c - 'A' + 10);
        else throw std::invalid_argument("from_hex: invalid digit");
        n.limbs[bit / 64] |= v << (bit % 64);
        if (bit % 64 > 60 && (bit / 64 + 1) < n.limbs.size())
            n.limbs[bit / 64 + 1] |= v >> (64 - bit % 64);
        bit += 4;
    }
    n.trim();
    return n;
}

std::string Natural::to_hex() const {
    if (limbs.empty()) return "0x0";
    std::string out;
    u64 nibbles = (bit_length() + 3) / 4;
    out.reserve(nibbles + 2);
    for (u64 i = nibbles; i-- > 0;) {
        u64 bit = i * 4;
        u64 v = (limbs[bit / 64] >> (bit % 64)) & 0xF;
        if (bit % 64 > 60 && bit / 64 + 1 < limbs.size())
            v |= (limbs[bit / 64 + 1] << (64 - bit % 64)) & 0xF;
        out.push_back("0123456789abcdef"[v]);
    }
    return "0x" + out;
}

// ============================================================================
// Digits
// ============================================================================

DigitVector digitize(const Natural& value, u64 R) {
    if (R < 2 || (R & (R - 1)) != 0)
        throw std::invalid_argument("digitize: R must be a power of two >= 2");
    DigitVector d;
    d.base_R = R;
    if (value.is_zero()) return d;

    const u32 r = static_cast<u32>(log2_exact(R));
    const u64 bits = value.bit_length();
    const u64 count = ceil_div(bits, r);
    d.digits.resize(count);
    for (u64 i = 0; i < count; ++i) {
        u64 bit = i * r;
        u64 word = bit / 64, off = bit % 64;
        u64 v = value.limbs[word] >> off;
        if (off + r > 64 && word + 1 < value.limbs.size())
            v |= value.limbs[word + 1] << (64 - off);
        d.digits[i] = v & (R - 1);
    }
    while (!d.digits.empty() && d.digits.back() == 0) d.digits.pop_back();
    return d;
}

DigitVector carry_normalize(const std::vector<u64>& raw, u64 R) {
    if (R < 2) throw std::invalid_argument("carry_normalize: R must be >= 2");
    const u128 bound = static_cast<u128>(R) * R * std::max<u64>(1, raw.size());
    for (u64 v : raw)
        if (static_cast<u128>(v) >= bound)
            throw std::overflow_error("carry_normalize: entry breaks the convolution bound");

    DigitVector d;
    d.base_R = R;
    u128 carry = 0;
    for (u64 v : raw) {
        u128 acc = carry + v;
        d.digits.push_back(static_cast<u64>(acc % R));
        carry = acc / R;
    }
    while (carry > 0) {
        d.digits.push_back(static_cast<u64>(carry % R));
        carry /= R;
    }
    while (!d.digits.empty() && d.digits.back() == 0) d.digits.pop_back();
    return d;
}

Natural assemble(const DigitVector& digits) {
    const u64 R = digits.base_R;
    if (R < 2 || (R & (R - 1)) != 0)
        throw std::invalid_argument("assemble: R must be a power of two >= 2");
    const u32 r = static_cast<u32>(log2_exact(R));

    Natural n;
    if (digits.digits.empty()) return n;
    n.limbs.assign(ceil_div(digits.digits.size() * r, 64) + 1, 0);
    for (size_t i = 0; i < digits.digits.size(); ++i) {
        u64 bit = i * r;
        u64 word = bit / 64, off = bit % 64;
        n.limbs[word] |= digits.digits[i] << off;
        if (off + r > 64)
            n.limbs[word + 1] |= digits.digits[i] >> (64 - off);
    }
    n.trim();
    return n;
}

// ============================================================================
// Multiplication pipeline
// ============================================================================

Natural multiply(const Natural& a, const Natural& b,
                 const transform::Engine& engine, transform::LeafMode mode,
                 OpCounts& counters) {
    if (a.is_zero() || b.is_zero()) return Natural{};

    const auto& plan = engine.plan();
    const u64 n = plan.length_n;
    const u64 P = plan.field_prime_P;
    const u64 B = plan.mult_base;
    if (B < 2 || static_cast<u128>(B) * B * n >= P)
        throw capacity_error("multiply: plan lacks headroom (B^2 * n >= P)");

    DigitVector da = digitize(a, B);
    DigitVector db = digitize(b, B);
    if (da.digits.size() > n / 2 || db.digits.size() > n / 2)
        throw capacity_error("multiply: operand digit count exceeds n/2");

    transform::FieldVector va(n, 0), vb(n, 0);
    std::copy(da.digits.begin(), da.digits.end(), va.begin());
    std::copy(db.digits.begin(), db.digits.end(), vb.begin());

    transform::FieldVector fa = engine.forward(va, mode, counters);
    transform::FieldVector fb = engine.forward(vb, mode, counters);
    transform::FieldVector prod = engine.pointwise_multiply(fa, fb, counters);
    transform::FieldVector conv = engine.inverse(prod, mode, counters);

    // the product is acyclic: nothing may alias past da+db-1 digits
    const u64 plen = da.digits.size() + db.digits.size();
    for (u64 k = plen; k < n; ++k)
        if (conv[k] != 0)
            throw std::logic_error("multiply: cyclic wraparound detected");

    conv.resize(std::max<u64>(plen, 1));
    DigitVector result = carry_normalize(conv, B);
    return assemble(result);
}

} // namespace tabntt::bigmult
