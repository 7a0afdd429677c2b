#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "invlim/errors.hpp"

namespace invlim {

// Finite tree given by a parent map with a unique root. A node's rank is its
// proper-ancestor count; the height is the least bound above all ranks.
class Tree {
 public:
  static Tree from_parent_map(
      std::vector<std::string> nodes,
      const std::unordered_map<std::string, std::string>& parent);

  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  int index_of(const std::string& name) const;
  std::optional<int> parent(int node) const;
  int root() const { return root_; }
  int rank_of(int node) const { return ranks_[node]; }
  std::size_t height() const { return levels_.size(); }
  // Node indices of the given rank, in load order.
  const std::vector<int>& level(std::size_t alpha) const;
  // The unique ancestor of `node` with rank alpha; requires alpha <= rank.
  int ancestor_at(int node, int alpha) const;
  // Tree order: s below-or-equal t along the ancestor chain.
  bool ancestor_leq(int s, int t) const;

 private:
  Tree() = default;

  std::vector<std::string> nodes_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> parent_;  // -1 at the root
  std::vector<int> ranks_;
  std::vector<std::vector<int>> levels_;
  int root_ = -1;
};

// A cofinal branch: node indices by rank, one per level, downward closed,
// reaching the last level.
using Branch = std::vector<int>;

std::vector<Branch> cofinal_branches(const Tree& t);

}  // namespace invlim
