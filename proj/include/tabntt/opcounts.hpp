#pragma once
// opcounts.hpp - arithmetic / table-read counters for scaling measurements

#include "tabntt/common.hpp"

namespace tabntt {

// Counter conventions (kept data-independent so that runs over different
// operand values yield identical counts for a fixed plan):
//   mulmod      - one per full-width multiplication mod P (tabular or direct)
//   addmod      - additions, subtractions and branchless conditional
//                 subtracts inside reduction ladders
//   table_reads - every table entry fetch (digit, forward, dft, combine,
//                 twiddle power reads)
//   compares    - ladder comparisons and modular-add wrap checks
struct OpCounts {
    u64 mulmod = 0;
    u64 addmod = 0;
    u64 table_reads = 0;
    u64 compares = 0;

    void merge(const OpCounts& other) {
        mulmod += other.mulmod;
        addmod += other.addmod;
        table_reads += other.table_reads;
        compares += other.compares;
    }

    u64 total() const { return mulmod + addmod + table_reads + compares; }

    bool operator==(const OpCounts&) const = default;
};

} // namespace tabntt
