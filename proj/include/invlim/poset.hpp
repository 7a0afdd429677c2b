#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "invlim/errors.hpp"

namespace invlim {

using ElemId = std::string;

// Directed preorder of base points. Finite instances built from explicit
// pairs carry the full reflexive-transitive closure; the built-in families
// answer the order by rule; symbolic instances expose a loaded probe chain
// plus caller-supplied oracles. Antisymmetry is not required: mutually
// comparable distinct points are kept distinct.
class DirectedSet {
 public:
  enum class Kind { finite, symbolic };

  using LeqFn = std::function<bool(const ElemId&, const ElemId&)>;
  using BoundFn =
      std::function<std::optional<ElemId>(std::span<const ElemId>)>;

  // Empty placeholder; every usable instance comes from a factory.
  DirectedSet() = default;

  // Closure of the listed pairs over the listed points. Directedness is NOT
  // enforced here; loaders reject non-directed inputs via undirected_witness.
  static DirectedSet from_pairs(
      std::vector<ElemId> elements,
      const std::vector<std::pair<ElemId, ElemId>>& leq_pairs);

  // Subsets of {0..n-1} under inclusion, named by membership bitstrings
  // ("0110" = {1,2}) and loaded in lexicographic name order, so the empty
  // set comes first and the full set last.
  static DirectedSet powerset(int ground_size);

  // 0 < 1 < ... < length-1, names zero-padded so lexicographic order is
  // numeric order.
  static DirectedSet chain(std::int64_t length);

  static DirectedSet symbolic(std::vector<ElemId> probe_chain, LeqFn leq,
                              BoundFn bound = nullptr);

  Kind kind() const { return kind_; }
  // Canonical load order. For symbolic instances this is the probe chain.
  const std::vector<ElemId>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  int index_of(const ElemId& e) const;
  std::optional<int> find(const ElemId& e) const;
  bool leq(int p, int q) const;
  bool leq_id(const ElemId& p, const ElemId& q) const;
  bool has_bound_oracle() const { return static_cast<bool>(bound_fn_); }
  std::optional<ElemId> bound_oracle(std::span<const ElemId> s) const;
  // True for the rule-backed built-in families, whose directedness holds by
  // construction and is not re-derived pair by pair.
  bool rule_backed() const { return backing_ != Backing::matrix && backing_ != Backing::symbolic; }

 private:
  enum class Backing { matrix, powerset, chain, symbolic };

  void build_index();

  Kind kind_ = Kind::finite;
  Backing backing_ = Backing::matrix;
  std::vector<ElemId> elements_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<std::uint64_t>> rows_;  // matrix backing, bitset rows
  std::vector<std::uint32_t> masks_;              // powerset backing
  LeqFn leq_fn_;                                  // symbolic backing
  BoundFn bound_fn_;
};

// First witness pair with no upper bound among the elements, if any.
// Finite kinds only; symbolic kinds need a bound oracle and are then probed
// over the loaded chain.
std::optional<std::pair<ElemId, ElemId>> undirected_witness(
    const DirectedSet& d);
bool is_directed(const DirectedSet& d);

// First element in canonical load order lying above every member of s.
// Symbolic kinds consult the bound oracle before scanning loaded elements.
ElemId upper_bound(const DirectedSet& d, std::span<const ElemId> s);

std::optional<ElemId> maximum_of(const DirectedSet& d);

// Alternating-move game on d. Player I moves at even indices. A finished
// run is won by Player I iff either Player II ever moved below Player I's
// preceding move, or every Player I continuation climbed and the whole run
// is bounded above. A finite prefix gets one of four verdicts.
enum class Verdict { i_immediate, i_provisional, ii_provisional, undecided };

const char* verdict_name(Verdict v);

struct GameTranscript {
  std::vector<ElemId> moves;
  Verdict verdict = Verdict::undecided;
  // i_immediate: the first round whose reply fell below Player I's move.
  // ii_provisional: the first round whose Player I move broke the climb.
  // Otherwise: the last round with at least one move.
  std::size_t decided_round = 0;
};

struct GameStrategy {
  enum class Side { one, two };
  Side side = Side::one;
  // Deterministic: equal prefixes must yield equal moves.
  std::function<ElemId(std::span<const ElemId>)> respond;
};

GameTranscript judge_transcript(const DirectedSet& d,
                                std::span<const ElemId> moves);

// Plays `rounds` rounds (2*rounds moves), stopping early once a reply falls
// below Player I's move, then judges the emitted prefix.
GameTranscript play_bounded(const DirectedSet& d, const GameStrategy& one,
                            const GameStrategy& two, std::size_t rounds);

// Player I strategy whose opening move is the first loaded element and whose
// every later move is upper_bound of all prior moves.
GameStrategy player_one_bound_strategy(const DirectedSet& d);

// Seeded strategy picking a loaded element by hashing the prefix; pure, so
// equal prefixes yield equal moves.
GameStrategy seeded_random_strategy(const DirectedSet& d,
                                    GameStrategy::Side side,
                                    std::uint64_t seed);

}  // namespace invlim
