#include "bvtrace/cache.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "bvtrace/correlation.hpp"

namespace bvtrace {
namespace {

using Records = std::map<std::string, Rational>;

// Parses one record; nullopt-like failure via bool.
bool parse_record(const std::string& line, std::string& key, Rational& value, EdgeIntegrand& e) {
  auto space = line.find(' ');
  if (space == std::string::npos || space == 0 || line.find(' ', space + 1) != std::string::npos) return false;
  key = line.substr(0, space);
  try {
    e = EdgeIntegrand::parse_key(key);
    if (e.key() != key) return false;
    value = Rational::parse(line.substr(space + 1));
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

Records read_records(const std::filesystem::path& file, std::vector<std::string>* warnings, bool verify,
                     bool seed_memo) {
  Records out;
  std::ifstream in(file);
  if (!in) return out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string key;
    Rational value;
    EdgeIntegrand e;
    if (!parse_record(line, key, value, e)) {
      if (warnings) warnings->push_back(file.string() + ":" + std::to_string(lineno) + ": skipping corrupt cache line");
      continue;
    }
    if (verify && simplex_integral_uncached(e) != value) throw CacheMismatchError(key);
    if (seed_memo) simplex_memo_insert(e, value);
    out.emplace(key, value);
  }
  return out;
}

}  // namespace

std::filesystem::path simplex_cache_file(const std::filesystem::path& dir) { return dir / "simplex.cache"; }

CacheLoadReport load_simplex_cache(const std::filesystem::path& dir, bool verify) {
  CacheLoadReport report;
  report.loaded = read_records(simplex_cache_file(dir), &report.warnings, verify, true).size();
  return report;
}

std::size_t store_simplex_cache(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto file = simplex_cache_file(dir);
  // values are exact, so merging by key cannot lose or alter a record
  Records records = read_records(file, nullptr, false, false);
  for (auto& [key, value] : simplex_memo_snapshot()) records.insert_or_assign(key, value);

  std::random_device rd;
  auto tmp = dir / ("simplex.cache.tmp." + std::to_string(rd()) + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    for (const auto& [key, value] : records) out << key << ' ' << value.to_string() << '\n';
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("cannot write cache file " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, file);
  return records.size();
}

}  // namespace bvtrace
