#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "adeglab/degrees.hpp"

namespace adeglab {

/// On-disk store of degree certificates keyed by (table hash, measure,
/// epsilon, LP mode), one JSON file per key, fronted by an in-memory map.
///
/// Entries are re-verified against the stored truth table when loaded, so a
/// stale or corrupted file is treated as a miss. Writes go to a temporary
/// file that is renamed into place; concurrent writers of the same key race
/// harmlessly because the values are deterministic.
class DegreeCache {
 public:
  explicit DegreeCache(std::filesystem::path directory);

  /// $ADEGLAB_CACHE_DIR, else $XDG_CACHE_HOME/adeglab, else ~/.cache/adeglab.
  static std::filesystem::path default_directory();

  const std::filesystem::path& directory() const { return directory_; }

  std::optional<DegreeCertificate> load(const BooleanFunction& f, Measure measure, const Rational& epsilon,
                                        const lp::Mode& mode);
  void store(const BooleanFunction& f, Measure measure, const Rational& epsilon, const lp::Mode& mode,
             const DegreeCertificate& cert);

  struct Stats {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t stores = 0;
  };
  Stats stats() const;

  struct GcReport {
    std::size_t kept = 0;
    std::size_t removed = 0;
  };
  /// Deletes unreadable, unverifiable and leftover temporary files; with
  /// `remove_all` every entry goes.
  GcReport gc(bool remove_all = false);

 private:
  struct Entry {
    BooleanFunction function;
    DegreeCertificate certificate;
  };

  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path directory_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, Entry> memory_;
  Stats stats_;
};

}  // namespace adeglab
