#include "axray/symtensor/multi_index.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace axray::symtensor {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndexTable::MultiIndexTable(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > 15) throw std::invalid_argument("multi-index dim out of range");
  if (order < 0 || order > 12) throw std::invalid_argument("multi-index order out of range");

  std::vector<int> cur(order, 0);
  // Nondecreasing tuples in lexicographic order.
  const auto emit = [&] {
    list_.push_back(cur);
    // multiplicity = order! / prod over equal-value runs of (run length)!
    double m = 1.0;
    for (int i = 1; i <= order; ++i) m *= i;
    int run = 1;
    double div = 1.0;
    for (int i = 1; i < order; ++i) {
      if (cur[i] == cur[i - 1]) {
        ++run;
        div *= run;
      } else {
        run = 1;
      }
    }
    mult_.push_back(m / div);
  };

  if (order == 0) {
    emit();
  } else {
    while (true) {
      emit();
      int p = order - 1;
      while (p >= 0 && cur[p] == dim - 1) --p;
      if (p < 0) break;
      ++cur[p];
      for (int q = p + 1; q < order; ++q) cur[q] = cur[p];
    }
  }

  rank_.reserve(list_.size() * 2);
  for (int k = 0; k < static_cast<int>(list_.size()); ++k) rank_[key_of(list_[k])] = k;

  if (static_cast<long long>(list_.size()) != binom(dim + order - 1, order))
    throw std::logic_error("multi-index enumeration mismatch");
}

std::uint64_t MultiIndexTable::key_of(const std::vector<int>& sorted) const {
  std::uint64_t key = 0;
  for (int v : sorted) key = key * 16u + static_cast<std::uint64_t>(v + 1);
  return key;
}

int MultiIndexTable::rank_of(std::vector<int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw std::invalid_argument("index length mismatch");
  std::sort(idx.begin(), idx.end());
  if (order_ > 0 && (idx.front() < 0 || idx.back() >= dim_))
    throw std::out_of_range("index entry out of range");
  const auto it = rank_.find(key_of(idx));
  if (it == rank_.end()) throw std::logic_error("sorted index not found");
  return it->second;
}

const MultiIndexTable& index_table(int dim, int order) {
  static std::mutex mu;
  static std::unordered_map<int, MultiIndexTable*> cache;
  std::lock_guard<std::mutex> lock(mu);
  const int key = dim * 64 + order;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, new MultiIndexTable(dim, order)).first;
  return *it->second;
}

}  // namespace axray::symtensor
