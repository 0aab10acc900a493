#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

namespace redtide {

/// Writes via a temp file in the same directory followed by an atomic
/// rename, so readers never observe a partially written artifact.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

uint64_t fnv1a64(const void* data, size_t len);
uint64_t fnv1a64(const std::string& s);
std::string hex64(uint64_t v);

/// Canonical shortest-round-trip text form of a double ("%.17g" trimmed
/// via std::to_chars). Used wherever emitted files must be reproducible.
std::string format_double(double v);

}  // namespace redtide
