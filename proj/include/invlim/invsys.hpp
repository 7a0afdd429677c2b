#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "invlim/poset.hpp"
#include "invlim/tree.hpp"
#include "invlim/words.hpp"

namespace invlim {

// One listed connecting map: images of the upper fiber in the lower one.
struct CoveringMap {
  ElemId lower;
  ElemId upper;
  std::unordered_map<FiberId, FiberId> images;
};

// Inverse system of finite nonempty fibers over a directed base. Finite
// instances materialize a connecting map for every comparable pair,
// including the diagonal; maps listed for a covering set of pairs are
// composed along the order at load and the result is checked exhaustively.
// Symbolic instances answer fibers and maps per loaded point, either from
// tables over the probe chain or from caller-supplied rules.
class InverseSystem {
 public:
  using FibersFn = std::function<std::vector<FiberId>(const ElemId&)>;
  using MapFn =
      std::function<FiberId(const ElemId&, const ElemId&, const FiberId&)>;

  static InverseSystem from_covering(DirectedSet base,
                                     std::vector<std::vector<FiberId>> fibers,
                                     const std::vector<CoveringMap>& covering);
  // Full tables keyed by (lower, upper) index pair; `verify` runs the
  // exhaustive composition check.
  static InverseSystem from_tables(
      DirectedSet base, std::vector<std::vector<FiberId>> fibers,
      std::unordered_map<std::uint64_t, std::vector<std::int32_t>> maps,
      bool verify);
  static InverseSystem symbolic_rules(DirectedSet base, FibersFn fibers,
                                      MapFn maps);

  const DirectedSet& base() const { return base_; }
  bool is_finite() const { return base_.kind() == DirectedSet::Kind::finite; }
  bool rule_backed() const { return static_cast<bool>(fibers_fn_); }

  // Index-based access; valid on finite instances and on the loaded prefix
  // of table-backed symbolic ones.
  int fiber_count(int elem) const;
  const std::vector<FiberId>& fiber_names(int elem) const;
  int fiber_index(int elem, const FiberId& name) const;
  std::int32_t map_index(int lower, int upper, std::int32_t fiber) const;

  // Identifier-based access; the only access path for rule-backed symbolic
  // instances.
  std::vector<FiberId> fibers_of(const ElemId& p) const;
  FiberId map_fiber(const ElemId& lower, const ElemId& upper,
                    const FiberId& fiber) const;

  std::size_t max_fiber_size() const;
  static std::uint64_t pair_key(int lower, int upper) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lower))
            << 32) |
           static_cast<std::uint32_t>(upper);
  }

 private:
  InverseSystem() = default;
  void index_fibers();

  DirectedSet base_;
  std::vector<std::vector<FiberId>> fibers_;
  std::vector<std::unordered_map<std::string, int>> fiber_index_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> maps_;
  FibersFn fibers_fn_;
  MapFn map_fn_;
};

// Exhaustive composition check over all comparable triples; throws
// CoherenceViolation naming the first failing triple. Finite instances only.
void verify_coherence(const InverseSystem& sys);

// All bit-functions on subsets of {0..n-1} under restriction, over the
// powerset base. A bit-function on u is named "f" + its bits in increasing
// order of the members of u.
InverseSystem restriction_system(int n);

// Levels of a tree over the chain of its height; the connecting map sends a
// node to its ancestor at the lower rank.
InverseSystem tree_system(const Tree& t);

// A coherent choice of one fiber element per base point. Dense threads hold
// one fiber index per loaded element; sparse threads (from probed symbolic
// systems) hold labels for the probed points only.
class Thread {
 public:
  Thread() = default;
  static Thread dense(std::vector<std::int32_t> fiber_by_elem);
  static Thread sparse(std::map<ElemId, FiberId> values);

  bool is_dense() const { return dense_form_; }
  const std::vector<std::int32_t>& dense_values() const { return dense_; }
  const std::map<ElemId, FiberId>& sparse_values() const { return sparse_; }
  std::int32_t at(int elem) const { return dense_[elem]; }
  FiberId name_at(const InverseSystem& sys, const ElemId& e) const;

  friend bool operator==(const Thread&, const Thread&) = default;
  friend auto operator<=>(const Thread&, const Thread&) = default;

 private:
  bool dense_form_ = true;
  std::vector<std::int32_t> dense_;
  std::map<ElemId, FiberId> sparse_;
};

bool thread_is_coherent(const InverseSystem& sys, const Thread& t);

// All threads of a finite system in lexicographic order of the canonical
// element/fiber order. The maximum of the base indexes them: each fiber
// element of the maximum pushes down to one thread. The first form shards
// the fiber of the maximum across workers; the serial form is the reference.
std::vector<Thread> enumerate_threads(const InverseSystem& sys);
std::vector<Thread> enumerate_threads_serial(const InverseSystem& sys);

Thread thread_from_branch(const InverseSystem& sys, const Tree& t,
                          const Branch& b);
Branch branch_from_thread(const InverseSystem& sys, const Tree& t,
                          const Thread& th);

// Desk-scale reading of the goodness conditions: (1) the climbing Player I
// strategy exists and wins sampled runs, (2) the base and every fiber fit
// under lambda, (3) the thread count equals nu exactly.
struct GoodnessReport {
  enum class Game { holds_with_witness, unknown };
  enum class Outcome { good, not_good, unknown };

  Game game_condition = Game::unknown;
  std::size_t base_size = 0;
  std::size_t max_fiber = 0;
  std::size_t lambda = 0;
  bool sizes_ok = false;
  std::optional<std::size_t> thread_count;
  std::size_t nu = 0;
  bool count_ok = false;
  Outcome verdict = Outcome::unknown;
  std::string failing_clause;  // "", "(1)", "(2)" or "(3)"
  std::string note;
};

GoodnessReport check_good(const InverseSystem& sys, std::size_t lambda,
                          std::size_t nu);

}  // namespace invlim
