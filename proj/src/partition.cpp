#include "pecok/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace pecok {

Partition::Partition(std::vector<int> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("Partition: empty label sequence");
  }
  // Relabel by first appearance. This both canonicalizes and guarantees
  // that every group index 0..K-1 occurs.
  std::unordered_map<int, int> remap;
  labels_.reserve(labels.size());
  for (int raw : labels) {
    auto [it, inserted] = remap.try_emplace(raw, static_cast<int>(remap.size()));
    labels_.push_back(it->second);
  }
  group_sizes_.assign(remap.size(), 0);
  for (int g : labels_) ++group_sizes_[g];
  min_group_size_ = *std::min_element(group_sizes_.begin(), group_sizes_.end());
}

Partition Partition::contiguous(int k, int m) {
  if (k < 1 || m < 1) {
    throw std::invalid_argument("Partition::contiguous: k and m must be >= 1");
  }
  std::vector<int> labels(static_cast<std::size_t>(k) * m);
  for (int g = 0; g < k; ++g) {
    for (int i = 0; i < m; ++i) labels[static_cast<std::size_t>(g) * m + i] = g;
  }
  return Partition(std::move(labels));
}

std::vector<int> Partition::group(int g) const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a) {
    if (labels_[a] == g) out.push_back(a);
  }
  return out;
}

}  // namespace pecok
