#pragma once

#include <filesystem>
#include <string>

namespace segqa {

/// SHA-256 of a string, lowercase hex.
std::string sha256_hex(const std::string& data);

/// SHA-256 of a file's bytes, lowercase hex.
std::string sha256_file_hex(const std::filesystem::path& path);

/// Combined hash over every regular file under a directory (sorted relative
/// paths + contents); stable identity for checkpoints and datasets.
std::string sha256_dir_hex(const std::filesystem::path& dir);

}  // namespace segqa
