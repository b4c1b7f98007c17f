#pragma once

#include <string>
#include <vector>

namespace qlab {

// Round-trip formatting for doubles (%.17g): deterministic bytes, exact re-parse.
std::string format_double(double v);

double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

std::vector<std::string> split(const std::string& line, char sep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit digest, hex-encoded; used for config hashes and artifact digests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace qlab
