#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bvtrace/errors.hpp"

namespace bvtrace {

/// A stored simplex integral disagrees with its recomputation.
class CacheMismatchError : public DomainError {
 public:
  explicit CacheMismatchError(const std::string& key)
      : DomainError("cache record '" + key + "' does not match its recomputed value"), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct CacheLoadReport {
  std::size_t loaded = 0;
  std::vector<std::string> warnings;  // one per skipped line
};

/// Cache file inside `dir`.
std::filesystem::path simplex_cache_file(const std::filesystem::path& dir);

/// Seeds the simplex memo from <dir>/simplex.cache. Corrupt lines are skipped
/// (their values get recomputed on demand). With `verify`, every record is
/// recomputed and a mismatch throws CacheMismatchError. A missing file is an
/// empty cache.
CacheLoadReport load_simplex_cache(const std::filesystem::path& dir, bool verify);

/// Merges the memo into the cache file (sorted by key, one "<key> <value>"
/// per line) through a temporary file and an atomic rename. Returns the
/// number of records written.
std::size_t store_simplex_cache(const std::filesystem::path& dir);

}  // namespace bvtrace
