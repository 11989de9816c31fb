#pragma once
// oracle.hpp - independent brute-force references used by the test and
// acceptance suites: naive DFT, schoolbook multiplication, and direct
// cyclic convolution. These share no algorithm code with the engine.

#include <vector>

#include "tabntt/bigmult.hpp"

namespace tabntt::oracle {

// Literal double-loop evaluation of the DFT sum, O(n^2) hardware
// multiplies, no tables. pre: omega has order len(x) mod P.
std::vector<u64> naive_dft(const std::vector<u64>& x, u64 omega, u64 P);

// Exact product by digit-by-digit accumulation over 32-bit half-limbs.
bigmult::Natural schoolbook_multiply(const bigmult::Natural& a,
                                     const bigmult::Natural& b);

// c_k = sum_{i+j = k mod n} a_i * b_j mod P, direct double loop.
std::vector<u64> cyclic_convolution(const std::vector<u64>& a,
                                    const std::vector<u64>& b, u64 P);

} // namespace tabntt::oracle
