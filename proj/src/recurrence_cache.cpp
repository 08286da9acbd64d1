#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bernstein/extremal.hpp"
#include "json.hpp"

namespace bernstein {

namespace {

constexpr const char* kFormat = "bernstein.recurrence";
constexpr int kVersion = 1;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string key_string(const RecurrenceCache::Key& k) {
  std::ostringstream s;
  s << k.weight_id << '|' << k.density << '|' << k.precision_bits << '|' << k.cutoff << '|'
    << k.n_max;
  return s.str();
}

nlohmann::json key_json(const RecurrenceCache::Key& k) {
  return {{"weight_id", k.weight_id},
          {"density", k.density},
          {"precision_bits", k.precision_bits},
          {"cutoff", k.cutoff},
          {"n_max", k.n_max}};
}

std::string sanitized(const std::string& s) {
  std::string out;
  for (char c : s) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '.' || c == '-';
    out += keep ? c : '_';
  }
  return out;
}

// Only files written by this cache are counted or removed.
bool is_cache_file(const std::filesystem::path& path) {
  if (path.extension() != ".json") return false;
  std::ifstream in(path);
  if (!in) return false;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    return doc.is_object() && doc.value("format", "") == kFormat;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

bool RecurrenceCache::Key::operator<(const Key& o) const {
  return std::tie(weight_id, density, precision_bits, cutoff, n_max) <
         std::tie(o.weight_id, o.density, o.precision_bits, o.cutoff, o.n_max);
}

bool RecurrenceCache::Key::operator==(const Key& o) const {
  return std::tie(weight_id, density, precision_bits, cutoff, n_max) ==
         std::tie(o.weight_id, o.density, o.precision_bits, o.cutoff, o.n_max);
}

RecurrenceCache::RecurrenceCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path RecurrenceCache::file_for(const Key& key) const {
  std::ostringstream name;
  name << sanitized(key.weight_id) << '-' << sanitized(key.density) << '-' << key.precision_bits
       << "b-n" << key.n_max << '-' << std::hex << fnv1a(key_string(key)) << ".json";
  return dir_ / name.str();
}

std::optional<Recurrence> RecurrenceCache::load(const Key& key) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (auto it = memory_.find(key); it != memory_.end()) {
    ++hits_;
    return it->second;
  }
  if (dir_.empty()) {
    ++misses_;
    return std::nullopt;
  }
  std::ifstream in(file_for(key));
  if (!in) {
    ++misses_;
    return std::nullopt;
  }
  // Unreadable, foreign or mismatched files count as misses and get rewritten.
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("format") != kFormat || doc.at("version") != kVersion ||
        doc.at("key") != key_json(key)) {
      ++misses_;
      return std::nullopt;
    }
    Recurrence r;
    for (const auto& v : doc.at("a")) r.a.push_back(parse_real(v.get<std::string>()));
    for (const auto& v : doc.at("b")) r.b.push_back(parse_real(v.get<std::string>()));
    if (r.a.empty() || r.b.size() != r.a.size() + 1) {
      ++misses_;
      return std::nullopt;
    }
    memory_.emplace(key, r);
    ++hits_;
    return r;
  } catch (const std::exception&) {
    ++misses_;
    return std::nullopt;
  }
}

void RecurrenceCache::store(const Key& key, const Recurrence& r) {
  std::lock_guard<std::mutex> lock(mutex_);
  memory_[key] = r;
  if (dir_.empty()) return;
  nlohmann::json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["key"] = key_json(key);
  doc["mass"] = to_decimal(r.mass());
  auto& a = doc["a"] = nlohmann::json::array();
  for (const auto& v : r.a) a.push_back(to_decimal(v));
  auto& b = doc["b"] = nlohmann::json::array();
  for (const auto& v : r.b) b.push_back(to_decimal(v));

  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::Cache, "cannot create cache directory " + dir_.string() + ": " + ec.message());
  static std::atomic<unsigned> counter{0};
  const auto target = file_for(key);
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::Cache, "cannot write cache file " + tmp.string());
    out << doc.dump(1) << '\n';
    if (!out) fail(ErrorCode::Cache, "short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::Cache, "cannot move cache file into place: " + target.string());
  }
}

RecurrenceCache::Stats RecurrenceCache::stats() const {
  Stats s;
  std::error_code ec;
  if (dir_.empty() || !std::filesystem::is_directory(dir_, ec)) return s;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (entry.is_regular_file() && is_cache_file(entry.path())) {
      ++s.files;
      s.bytes += entry.file_size();
    }
  }
  return s;
}

size_t RecurrenceCache::clear() {
  std::lock_guard<std::mutex> lock(mutex_);
  memory_.clear();
  size_t removed = 0;
  std::error_code ec;
  if (dir_.empty() || !std::filesystem::is_directory(dir_, ec)) return 0;
  std::vector<std::filesystem::path> doomed;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (entry.is_regular_file() && is_cache_file(entry.path())) {
      doomed.push_back(entry.path());
    }
  }
  for (const auto& p : doomed) removed += std::filesystem::remove(p, ec) ? 1 : 0;
  return removed;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("BERNSTEIN_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "bernstein";
  }
  return std::filesystem::temp_directory_path() / "bernstein-cache";
}

}  // namespace bernstein
