#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace onoma::io {

/// Opens a file for reading or throws InputError naming the path.
std::ifstream open_input(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place, so a
/// failed command never leaves a truncated artifact behind.
void write_file(const std::filesystem::path& path, std::string_view content);

/// printf-style `%.<digits>g`.
std::string format_sig(double value, int digits);

/// Round-trip representation used in every numeric output file.
inline std::string format_exact(double value) { return format_sig(value, 17); }

std::string sha256_hex(std::string_view bytes);

/// One surname per line; blank lines skipped, CR stripped.
std::vector<std::string> read_name_list(std::istream& in);

}  // namespace onoma::io

namespace onoma::log {

enum class Level { quiet = 0, warn = 1, info = 2 };

void set_level(Level level);
Level level();
void warn(std::string_view message);
void info(std::string_view message);

}  // namespace onoma::log
