#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace tpg::io {

// FNV-1a 64-bit; used to stamp reports with a hash of their resolved config.
std::uint64_t fnv1a64(std::string_view data);

// "# config_hash=0x..." header line derived from the compact JSON dump.
std::string config_hash_line(const nlohmann::json& resolved_config);

// Shortest round-trip representation of a double (%.17g trimmed by parse check).
std::string format_double(double v);

// Writes to <path>.tmp.<pid> and renames into place; partial output never
// lands under the final name.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::json load_json_file(const std::string& path);

std::string read_file(const std::string& path);

// Directory part of a path ("" when none).
std::string dirname(const std::string& path);

}  // namespace tpg::io
