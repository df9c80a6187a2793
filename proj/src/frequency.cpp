#include "piml/frequency.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace piml {

int norm1(const Frequency& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

Frequency negate(const Frequency& k) {
  Frequency m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) m[i] = -k[i];
  return m;
}

namespace {

// Append every k with |k|_1 == r (dimension dims) in lexicographic order.
void emit_level(int dims, int r, Frequency& prefix,
                std::vector<Frequency>& out) {
  if (dims == 1) {
    if (r == 0) {
      prefix.push_back(0);
      out.push_back(prefix);
      prefix.pop_back();
    } else {
      prefix.push_back(-r);
      out.push_back(prefix);
      prefix.back() = r;
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (int v = -r; v <= r; ++v) {
    prefix.push_back(v);
    emit_level(dims - 1, r - std::abs(v), prefix, out);
    prefix.pop_back();
  }
}

// Grow-on-demand cache of the enumeration, one per dimension.  Guarded by
// a mutex so callers stay free to enumerate concurrently.
struct LevelCache {
  std::vector<Frequency> flat;
  int next_level = 0;
};

std::mutex cache_mutex;
std::map<int, LevelCache> caches;

// Returns the cache for dimension d grown to at least `count` entries.
// Caller must hold cache_mutex.
LevelCache& grown_cache(int d, std::size_t count) {
  if (d < 1) throw std::invalid_argument("frequency: dimension must be >= 1");
  LevelCache& cache = caches[d];
  Frequency scratch;
  while (cache.flat.size() < count) {
    emit_level(d, cache.next_level++, scratch, cache.flat);
  }
  return cache;
}

std::vector<Frequency> ordered_prefix(int d, std::size_t count) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  const LevelCache& cache = grown_cache(d, count);
  return std::vector<Frequency>(cache.flat.begin(),
                                cache.flat.begin() + std::ptrdiff_t(count));
}

}  // namespace

FrequencyOrdering::FrequencyOrdering(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("frequency: dimension must be >= 1");
}

Frequency FrequencyOrdering::at(std::size_t j) const {
  std::lock_guard<std::mutex> lock(cache_mutex);
  return grown_cache(d_, j + 1).flat[j];
}

std::vector<Frequency> FrequencyOrdering::prefix(std::size_t count) const {
  return ordered_prefix(d_, count);
}

bool FrequencyOrdering::before(const Frequency& a, const Frequency& b) {
  const int na = norm1(a), nb = norm1(b);
  if (na != nb) return na < nb;
  return a < b;  // lexicographic tie-break
}

Frequency index_map(std::size_t j, int d) {
  return FrequencyOrdering(d).at(j);
}

std::vector<std::vector<int>> multi_indices_up_to(int d, int s) {
  if (d < 1 || s < 0)
    throw std::invalid_argument("multi_indices_up_to: bad arguments");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(std::size_t(d), 0);
  // Counted recursion over remaining budget, dimension by dimension.
  auto rec = [&](auto&& self, int pos, int budget) -> void {
    if (pos == d) {
      out.push_back(cur);
      return;
    }
    for (int a = 0; a <= budget; ++a) {
      cur[std::size_t(pos)] = a;
      self(self, pos + 1, budget - a);
    }
    cur[std::size_t(pos)] = 0;
  };
  rec(rec, 0, s);
  return out;
}

}  // namespace piml
