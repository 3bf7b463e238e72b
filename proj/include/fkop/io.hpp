#pragma once

#include <cstdint>
#include <string>

namespace fkop {

// Writes content to a temporary file in the same directory and renames it
// into place, so readers never observe partial output.
void atomic_write_file(const std::string& path, const std::string& content);

// Shortest round-trip decimal representation of a double (repeatable output).
std::string format_double(double v);

// FNV-1a 64-bit hash, hex-encoded; used for config manifests.
std::string fnv1a_hex(const std::string& data);

// Default worker count: FKOP_THREADS if set, else hardware concurrency.
int default_thread_count();

}  // namespace fkop
