#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace orr {

// Shortest decimal form that round-trips a double, locale-independent.
// All CSV/JSON emitters share this so reruns are byte-identical.
std::string format_double(double x);

// Writes via a temp file in the same directory, then renames into place.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

// FNV-1a over raw bytes; used for output-determinism checks.
std::uint64_t fnv1a_hash(const std::string& bytes);

std::uint64_t fnv1a_hash_file(const std::filesystem::path& path);

}  // namespace orr
