#include "invlim/tree.hpp"

#include <algorithm>

#include "invlim/words.hpp"

namespace invlim {

namespace {
constexpr std::size_t kMaxNodes = 100000;
}

Tree Tree::from_parent_map(
    std::vector<std::string> nodes,
    const std::unordered_map<std::string, std::string>& parent) {
  if (nodes.empty()) throw error(errc::input_error, "tree has no nodes");
  if (nodes.size() > kMaxNodes)
    throw error(errc::size_limit,
                "more than " + std::to_string(kMaxNodes) + " nodes");
  Tree t;
  t.nodes_ = std::move(nodes);
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    validate_label(t.nodes_[i]);
    auto [it, inserted] = t.index_.emplace(t.nodes_[i], static_cast<int>(i));
    if (!inserted)
      throw error(errc::input_error, "duplicate node '" + t.nodes_[i] + "'");
  }
  t.parent_.assign(t.nodes_.size(), -1);
  for (const auto& [child, par] : parent) {
    auto c = t.index_.find(child);
    auto p = t.index_.find(par);
    if (c == t.index_.end())
      throw error(errc::input_error, "parent map names unknown node '" + child + "'");
    if (p == t.index_.end())
      throw error(errc::input_error, "parent map names unknown node '" + par + "'");
    if (c->second == p->second)
      throw error(errc::input_error, "node '" + child + "' is its own parent");
    t.parent_[c->second] = p->second;
  }
  t.root_ = -1;
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    if (t.parent_[i] != -1) continue;
    if (t.root_ != -1)
      throw error(errc::input_error, "two roots: '" + t.nodes_[t.root_] +
                                         "' and '" + t.nodes_[i] + "'");
    t.root_ = static_cast<int>(i);
  }
  if (t.root_ == -1) throw error(errc::input_error, "no root (parent cycle)");

  t.ranks_.assign(t.nodes_.size(), -1);
  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    // Walk to the first node of known rank; a walk longer than the tree is a
    // cycle.
    std::vector<int> path;
    int cur = static_cast<int>(i);
    while (t.ranks_[cur] == -1 && t.parent_[cur] != -1) {
      path.push_back(cur);
      cur = t.parent_[cur];
      if (path.size() > t.nodes_.size())
        throw error(errc::input_error, "parent cycle through '" + t.nodes_[i] + "'");
    }
    int rank = t.ranks_[cur] == -1 ? 0 : t.ranks_[cur];
    if (t.ranks_[cur] == -1) t.ranks_[cur] = 0;
    for (auto it = path.rbegin(); it != path.rend(); ++it) t.ranks_[*it] = ++rank;
  }

  const int height = 1 + *std::max_element(t.ranks_.begin(), t.ranks_.end());
  t.levels_.assign(static_cast<std::size_t>(height), {});
  for (std::size_t i = 0; i < t.nodes_.size(); ++i)
    t.levels_[static_cast<std::size_t>(t.ranks_[i])].push_back(
        static_cast<int>(i));
  // Every rank below the height is inhabited by the ancestors of a deepest
  // node; the check guards the invariant all the same.
  for (std::size_t a = 0; a < t.levels_.size(); ++a)
    if (t.levels_[a].empty())
      throw error(errc::empty_level, "level " + std::to_string(a) + " is empty");
  return t;
}

int Tree::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw error(errc::input_error, "unknown node '" + name + "'");
  return it->second;
}

std::optional<int> Tree::parent(int node) const {
  if (parent_[node] == -1) return std::nullopt;
  return parent_[node];
}

const std::vector<int>& Tree::level(std::size_t alpha) const {
  if (alpha >= levels_.size())
    throw error(errc::input_error, "no level " + std::to_string(alpha));
  return levels_[alpha];
}

int Tree::ancestor_at(int node, int alpha) const {
  if (alpha > ranks_[node])
    throw error(errc::input_error, "rank " + std::to_string(alpha) +
                                       " above node '" + nodes_[node] + "'");
  int cur = node;
  while (ranks_[cur] > alpha) cur = parent_[cur];
  return cur;
}

bool Tree::ancestor_leq(int s, int t) const {
  return ranks_[s] <= ranks_[t] && ancestor_at(t, ranks_[s]) == s;
}

std::vector<Branch> cofinal_branches(const Tree& t) {
  std::vector<Branch> out;
  const std::size_t h = t.height();
  for (int tip : t.level(h - 1)) {
    Branch b(h);
    int cur = tip;
    for (std::size_t a = h; a-- > 0;) {
      b[a] = cur;
      if (a > 0) cur = *t.parent(cur);
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace invlim
