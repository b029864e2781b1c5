#pragma once

#include <string>
#include <vector>

namespace pecok {

// Assignment of p variable indices to K non-empty groups. Labels are kept
// in canonical form (groups numbered by first appearance), so two
// partitions are equal iff their label sequences are equal.
class Partition {
 public:
  explicit Partition(std::vector<int> labels);

  // Contiguous equal-size groups: k groups of m consecutive indices.
  static Partition contiguous(int k, int m);

  int size() const { return static_cast<int>(labels_.size()); }
  int k() const { return static_cast<int>(group_sizes_.size()); }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& group_sizes() const { return group_sizes_; }
  int min_group_size() const { return min_group_size_; }

  // Indices belonging to group g, in increasing order.
  std::vector<int> group(int g) const;

  bool operator==(const Partition& other) const {
    return labels_ == other.labels_;
  }
  bool operator!=(const Partition& other) const { return !(*this == other); }

 private:
  std::vector<int> labels_;
  std::vector<int> group_sizes_;
  int min_group_size_ = 0;
};

}  // namespace pecok
