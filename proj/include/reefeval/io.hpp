// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <unistd.h>

#include "reefeval/error.hpp"

namespace reefeval::io {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return std::move(ss).str();
}

namespace detail {

inline fs::path temp_sibling(const fs::path& target) {
  auto name = "." + target.filename().string() + ".tmp-" + std::to_string(::getpid());
  return target.parent_path() / name;
}

inline void write_plain(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace detail

// Writes to a temporary sibling and renames it over `path`, so readers never
// observe a half-written file.
inline void write_file_atomic(const fs::path& path, const std::string& content) {
  const auto parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw IoError("output directory '" + parent.string() + "' does not exist");
  }
  const auto tmp = detail::temp_sibling(path);
  try {
    detail::write_plain(tmp, content);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

// Relative path -> file content.
using FileBundle = std::vector<std::pair<std::string, std::string>>;

// Materializes a whole directory at once: files go into a temporary sibling
// directory that is renamed into place after every write succeeded. The target
// must not exist or be empty.
inline void write_directory_atomic(const fs::path& dir, const FileBundle& files) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir) || !fs::is_empty(dir)) {
      throw IoError("output directory '" + dir.string() + "' exists and is not empty");
    }
  }
  const auto parent = dir.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw IoError("parent directory '" + parent.string() + "' does not exist");
  }
  const auto tmp = detail::temp_sibling(dir);
  try {
    fs::remove_all(tmp);
    fs::create_directory(tmp);
    for (const auto& [rel, content] : files) {
      const auto p = tmp / rel;
      fs::create_directories(p.parent_path());
      detail::write_plain(p, content);
    }
    if (fs::exists(dir)) fs::remove(dir);
    fs::rename(tmp, dir);
  } catch (const fs::filesystem_error& e) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw IoError(e.what());
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }
}

}  // namespace reefeval::io
