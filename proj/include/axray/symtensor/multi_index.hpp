#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace axray::symtensor {

long long binom(int n, int k);

// Sorted multi-indices of a fixed length over {0,...,dim-1}, in lexicographic
// order. A symmetric tensor of that order is stored as one coefficient per
// sorted index; `multiplicity` counts the full-index tuples collapsing to it.
class MultiIndexTable {
 public:
  MultiIndexTable(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(list_.size()); }

  const std::vector<int>& at(int k) const { return list_[k]; }

  // Rank of an arbitrary index tuple (sorted internally). Length must match.
  int rank_of(std::vector<int> idx) const;

  double multiplicity(int k) const { return mult_[k]; }

  // Visits every full index tuple (dim^order of them) as (tuple, sorted rank).
  template <class F>
  void for_each_full(F&& f) const {
    std::vector<int> idx(order_, 0);
    if (order_ == 0) {
      f(idx, 0);
      return;
    }
    while (true) {
      std::vector<int> s = idx;
      f(idx, rank_of(std::move(s)));
      int p = order_ - 1;
      while (p >= 0 && idx[p] == dim_ - 1) {
        idx[p] = 0;
        --p;
      }
      if (p < 0) break;
      ++idx[p];
    }
  }

 private:
  std::uint64_t key_of(const std::vector<int>& sorted) const;

  int dim_;
  int order_;
  std::vector<std::vector<int>> list_;
  std::vector<double> mult_;
  std::unordered_map<std::uint64_t, int> rank_;
};

// Shared tables keyed by (dim, order); thread-safe on first access.
const MultiIndexTable& index_table(int dim, int order);

}  // namespace axray::symtensor
