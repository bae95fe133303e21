#include "adeglab/cache.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace fs = std::filesystem;

namespace {

std::string cache_key(const BooleanFunction& f, Measure measure, const Rational& epsilon, const lp::Mode& mode) {
  std::ostringstream key;
  key << std::hex << f.hash() << std::dec << "-a" << f.arity() << "-" << to_string(measure) << "-";
  for (char c : to_string(epsilon)) key << (c == '/' ? '_' : c);
  key << "-" << (mode.is_exact() ? "exact" : "float");
  return key.str();
}

std::optional<Json> read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return Json::parse(in);
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

/// Function and certificate of a cache file, or nullopt when it does not
/// re-verify.
std::optional<std::pair<BooleanFunction, DegreeCertificate>> decode(const Json& j) {
  try {
    auto f = function_from_json(j.at("function"));
    auto cert = certificate_from_json(j.at("certificate"));
    if (!verify_certificate(cert, f).ok) return std::nullopt;
    return std::make_pair(std::move(f), std::move(cert));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

DegreeCache::DegreeCache(fs::path directory) : directory_(std::move(directory)) {}

fs::path DegreeCache::default_directory() {
  if (const char* dir = std::getenv("ADEGLAB_CACHE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "adeglab";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "adeglab";
  return fs::temp_directory_path() / "adeglab-cache";
}

fs::path DegreeCache::path_for(const std::string& key) const { return directory_ / (key + ".json"); }

std::optional<DegreeCertificate> DegreeCache::load(const BooleanFunction& f, Measure measure,
                                                   const Rational& epsilon, const lp::Mode& mode) {
  const auto key = cache_key(f, measure, epsilon, mode);
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end() && it->second.function == f) {
      ++stats_.hits;
      return it->second.certificate;
    }
  }
  std::optional<std::pair<BooleanFunction, DegreeCertificate>> decoded;
  if (auto j = read_json(path_for(key))) decoded = decode(*j);
  std::lock_guard lock(mutex_);
  if (!decoded || !(decoded->first == f)) {
    ++stats_.misses;
    return std::nullopt;
  }
  ++stats_.hits;
  memory_.insert_or_assign(key, Entry{f, decoded->second});
  return decoded->second;
}

void DegreeCache::store(const BooleanFunction& f, Measure measure, const Rational& epsilon, const lp::Mode& mode,
                        const DegreeCertificate& cert) {
  const auto key = cache_key(f, measure, epsilon, mode);
  {
    std::lock_guard lock(mutex_);
    memory_.insert_or_assign(key, Entry{f, cert});
    ++stats_.stores;
  }
  const Json j = {{"format", 1},
                  {"key", key},
                  {"function", function_to_json(f)},
                  {"measure", to_string(measure)},
                  {"epsilon", to_string(epsilon)},
                  {"mode", mode.is_exact() ? "exact" : "float"},
                  {"certificate", certificate_to_json(cert)}};
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(directory_, ec);
  if (ec) return;  // the cache is an optimization; an unwritable directory is not an error
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
  const fs::path tmp = directory_ / tmp_name.str();
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
    if (!out) {
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, path_for(key), ec);
  if (ec) fs::remove(tmp, ec);
}

DegreeCache::Stats DegreeCache::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

DegreeCache::GcReport DegreeCache::gc(bool remove_all) {
  GcReport report;
  {
    std::lock_guard lock(mutex_);
    if (remove_all) memory_.clear();
  }
  std::error_code ec;
  if (!fs::exists(directory_, ec)) return report;
  for (const auto& entry : fs::directory_iterator(directory_, ec)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    const bool is_tmp = name.find(".tmp.") != std::string::npos;
    const bool is_json = entry.path().extension() == ".json";
    if (!is_tmp && !is_json) continue;
    bool keep = !remove_all && !is_tmp;
    if (keep) {
      const auto j = read_json(entry.path());
      keep = j && decode(*j).has_value();
    }
    if (keep) {
      ++report.kept;
    } else {
      fs::remove(entry.path(), ec);
      ++report.removed;
    }
  }
  return report;
}

}  // namespace adeglab
