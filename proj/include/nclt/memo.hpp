#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace nclt {

// FNV-1a over an integer key sequence.
struct IntVecHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Cache for a pure deterministic function. Concurrent lookups/inserts are
// safe; duplicated work between racing threads is allowed and harmless
// because values for equal keys are always equal.
template <class K, class V, class Hash = std::hash<K>>
class Memo {
 public:
  std::optional<V> find(const K& key) const {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const K& key, V value) {
    std::lock_guard lock(mu_);
    map_.emplace(key, std::move(value));
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<K, V, Hash> map_;
};

}  // namespace nclt
