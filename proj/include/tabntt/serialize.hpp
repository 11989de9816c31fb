#pragma once
// serialize.hpp - the NTTB v1 table file format. Magic bytes "NTTB",
// version u32, header (n, P, omega, R, L, m, Z, q_j list), then length-
// prefixed sections; all integers little-endian unsigned 64-bit words.
// Bit-exact across platforms.

#include <string>
#include <vector>

#include "tabntt/tables.hpp"

namespace tabntt::serialize {

struct format_error : std::runtime_error {
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

struct LoadedTables {
    planner::TransformPlan plan;
    tables::TableSet tables;
};

std::vector<u8> to_bytes(const planner::TransformPlan& plan,
                         const tables::TableSet& tables);
LoadedTables from_bytes(const std::vector<u8>& bytes);

void save_file(const std::string& path, const planner::TransformPlan& plan,
               const tables::TableSet& tables);
LoadedTables load_file(const std::string& path);

} // namespace tabntt::serialize
