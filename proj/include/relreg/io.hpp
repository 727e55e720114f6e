#pragma once

#include <string>
#include <string_view>

namespace relreg::io {

//! Shortest-safe text form of a double: 17 significant digits, so that
//! parsing the result gives back the same bits.
std::string format_double(double value);

//! Parses the whole token as a double; returns false on trailing garbage.
bool parse_double(std::string_view token, double& value);

//! Writes `content` to a sibling temp file and renames it over `path`, so
//! readers never see a partially written file.
void write_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

} // namespace relreg::io
