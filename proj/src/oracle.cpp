// oracle.cpp - brute-force references. Deliberately self-contained:
// local modular helpers, no table machinery.

#include "tabntt/oracle.hpp"

namespace tabntt::oracle {

namespace {

u64 o_mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 o_powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = o_mulmod(r, a, m);
        a = o_mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

std::vector<u64> naive_dft(const std::vector<u64>& x, u64 omega, u64 P) {
    const u64 n = x.size();
    std::vector<u64> out(n, 0);
    for (u64 k = 0; k < n; ++k) {
        u64 acc = 0;
        for (u64 j = 0; j < n; ++j) {
            u64 w = o_powmod(omega, (j * k) % n, P);
            acc = (acc + o_mulmod(x[j] % P, w, P)) % P;
        }
        out[k] = acc;
    }
    return out;
}

bigmult::Natural schoolbook_multiply(const bigmult::Natural& a,
                                     const bigmult::Natural& b) {
    if (a.is_zero() || b.is_zero()) return bigmult::Natural{};

    // grade-school over 32-bit half-limbs with 128-bit column sums
    std::vector<u64> ha, hb;
    for (u64 limb : a.limbs) {
        ha.push_back(limb & 0xFFFFFFFFull);
        ha.push_back(limb >> 32);
    }
    for (u64 limb : b.limbs) {
        hb.push_back(limb & 0xFFFFFFFFull);
        hb.push_back(limb >> 32);
    }

    std::vector<u128> columns(ha.size() + hb.size(), 0);
    for (size_t i = 0; i < ha.size(); ++i) {
        if (ha[i] == 0) continue;
        for (size_t j = 0; j < hb.size(); ++j)
            columns[i + j] += static_cast<u128>(ha[i]) * hb[j];
    }

    std::vector<u64> half_out;
    u128 carry = 0;
    for (u128 column : columns) {
        u128 acc = column + carry;
        half_out.push_back(static_cast<u64>(acc & 0xFFFFFFFFull));
        carry = acc >> 32;
    }
    while (carry > 0) {
        half_out.push_back(static_cast<u64>(carry & 0xFFFFFFFFull));
        carry >>= 32;
    }

    bigmult::Natural out;
    out.limbs.assign((half_out.size() + 1) / 2, 0);
    for (size_t i = 0; i < half_out.size(); ++i)
        out.limbs[i / 2] |= half_out[i] << ((i % 2) * 32);
    out.trim();
    return out;
}

std::vector<u64> cyclic_convolution(const std::vector<u64>& a,
                                    const std::vector<u64>& b, u64 P) {
    if (a.size() != b.size())
        throw std::length_error("cyclic_convolution: length mismatch");
    const u64 n = a.size();
    std::vector<u64> out(n, 0);
    for (u64 i = 0; i < n; ++i) {
        if (a[i] % P == 0) continue;
        for (u64 j = 0; j < n; ++j) {
            u64 k = i + j < n ? i + j : i + j - n;
            out[k] = (out[k] + o_mulmod(a[i] % P, b[j] % P, P)) % P;
        }
    }
    return out;
}

} // namespace tabntt::oracle
