#pragma once

#include <cstdint>
#include <string>

#include "scatter/norm_table.hpp"

namespace scatter {

// Binary cache container: magic, format version, torus spec, cutoff,
// delta-encoded entries, FNV-1a trailer. Round-trips bit-exactly.
void save_table(const std::string& path, const NormTable& table);
NormTable load_table(const std::string& path);

// CSV export with header `norm,multiplicity`. Exact norms print as reduced
// fractions (bare integer when the denominator is 1), floats with 17
// significant digits.
void write_table_csv(const std::string& path, const NormTable& table);

// FNV-1a 64 over a file's bytes; used to stamp sidecars with the cache id.
std::uint64_t file_checksum(const std::string& path);

std::string format_norm(const NormTable& table, std::size_t index);

}  // namespace scatter
