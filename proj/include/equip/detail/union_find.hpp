#pragma once

#include <numeric>
#include <vector>

namespace equip::detail {

/// Union-find whose root is always the least element of its class.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

  /// Dense class numbering, ordered by least member.
  std::vector<int> classes(int* count) {
    std::vector<int> label(parent_.size(), -1);
    int next = 0;
    for (int x = 0; x < static_cast<int>(parent_.size()); ++x) {
      const int r = find(x);
      if (label[r] < 0) label[r] = next++;
      label[x] = label[r];
    }
    *count = next;
    return label;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace equip::detail
