#include "invlim/poset.hpp"

#include <algorithm>

#include "invlim/words.hpp"

namespace invlim {

namespace {
constexpr std::size_t kMaxListedElements = 512;
constexpr int kMaxPowersetGround = 16;
constexpr std::int64_t kMaxChainLength = 100000;
}  // namespace

void DirectedSet::build_index() {
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    validate_label(elements_[i]);
    auto [it, inserted] = index_.emplace(elements_[i], static_cast<int>(i));
    if (!inserted)
      throw error(errc::input_error, "duplicate element '" + elements_[i] + "'");
  }
}

DirectedSet DirectedSet::from_pairs(
    std::vector<ElemId> elements,
    const std::vector<std::pair<ElemId, ElemId>>& leq_pairs) {
  if (elements.empty())
    throw error(errc::input_error, "a directed set needs at least one element");
  if (elements.size() > kMaxListedElements)
    throw error(errc::size_limit, "more than " +
                                      std::to_string(kMaxListedElements) +
                                      " listed elements");
  DirectedSet d;
  d.kind_ = Kind::finite;
  d.backing_ = Backing::matrix;
  d.elements_ = std::move(elements);
  d.build_index();

  const std::size_t n = d.elements_.size();
  const std::size_t words = (n + 63) / 64;
  d.rows_.assign(n, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < n; ++i) d.rows_[i][i / 64] |= 1ull << (i % 64);
  for (const auto& [lo, hi] : leq_pairs) {
    const int i = d.index_of(lo);
    const int j = d.index_of(hi);
    d.rows_[i][j / 64] |= 1ull << (j % 64);
  }
  // Transitive closure; k outermost.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (d.rows_[i][k / 64] & (1ull << (k % 64)))
        for (std::size_t w = 0; w < words; ++w) d.rows_[i][w] |= d.rows_[k][w];
  return d;
}

DirectedSet DirectedSet::powerset(int ground_size) {
  if (ground_size < 0 || ground_size > kMaxPowersetGround)
    throw error(errc::size_limit, "powerset ground size must be in [0," +
                                      std::to_string(kMaxPowersetGround) + "]");
  DirectedSet d;
  d.kind_ = Kind::finite;
  d.backing_ = Backing::powerset;
  const std::uint32_t count = 1u << ground_size;
  std::vector<std::string> names(count);
  for (std::uint32_t m = 0; m < count; ++m) {
    std::string name(static_cast<std::size_t>(ground_size), '0');
    for (int b = 0; b < ground_size; ++b)
      if (m & (1u << b)) name[b] = '1';
    if (ground_size == 0) name = "e";  // single point; a label must be nonempty
    names[m] = std::move(name);
  }
  std::sort(names.begin(), names.end());
  d.elements_ = std::move(names);
  d.build_index();
  d.masks_.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t mask = 0;
    if (ground_size > 0)
      for (int b = 0; b < ground_size; ++b)
        if (d.elements_[i][b] == '1') mask |= 1u << b;
    d.masks_[i] = mask;
  }
  return d;
}

DirectedSet DirectedSet::chain(std::int64_t length) {
  if (length < 1 || length > kMaxChainLength)
    throw error(errc::size_limit, "chain length must be in [1," +
                                      std::to_string(kMaxChainLength) + "]");
  DirectedSet d;
  d.kind_ = Kind::finite;
  d.backing_ = Backing::chain;
  const std::size_t width = std::to_string(length - 1).size();
  d.elements_.reserve(static_cast<std::size_t>(length));
  for (std::int64_t i = 0; i < length; ++i) {
    std::string name = std::to_string(i);
    name.insert(0, width - name.size(), '0');
    d.elements_.push_back(std::move(name));
  }
  d.build_index();
  return d;
}

DirectedSet DirectedSet::symbolic(std::vector<ElemId> probe_chain, LeqFn leq,
                                  BoundFn bound) {
  if (probe_chain.empty())
    throw error(errc::input_error, "symbolic probe chain is empty");
  if (!leq) throw error(errc::input_error, "symbolic order oracle is missing");
  DirectedSet d;
  d.kind_ = Kind::symbolic;
  d.backing_ = Backing::symbolic;
  d.elements_ = std::move(probe_chain);
  d.build_index();
  d.leq_fn_ = std::move(leq);
  d.bound_fn_ = std::move(bound);
  for (std::size_t i = 0; i + 1 < d.elements_.size(); ++i)
    if (!d.leq_fn_(d.elements_[i], d.elements_[i + 1]))
      throw error(errc::input_error, "probe chain is not increasing at '" +
                                         d.elements_[i] + "'");
  return d;
}

int DirectedSet::index_of(const ElemId& e) const {
  auto it = index_.find(e);
  if (it == index_.end())
    throw error(errc::input_error, "unknown element '" + e + "'");
  return it->second;
}

std::optional<int> DirectedSet::find(const ElemId& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool DirectedSet::leq(int p, int q) const {
  switch (backing_) {
    case Backing::matrix:
      return rows_[p][static_cast<std::size_t>(q) / 64] &
             (1ull << (q % 64));
    case Backing::powerset:
      return (masks_[p] & ~masks_[q]) == 0;
    case Backing::chain:
      return p <= q;
    case Backing::symbolic:
      return leq_fn_(elements_[p], elements_[q]);
  }
  return false;
}

bool DirectedSet::leq_id(const ElemId& p, const ElemId& q) const {
  if (backing_ == Backing::symbolic) return leq_fn_(p, q);
  return leq(index_of(p), index_of(q));
}

std::optional<ElemId> DirectedSet::bound_oracle(
    std::span<const ElemId> s) const {
  if (!bound_fn_) return std::nullopt;
  return bound_fn_(s);
}

std::optional<std::pair<ElemId, ElemId>> undirected_witness(
    const DirectedSet& d) {
  if (d.kind() == DirectedSet::Kind::symbolic) {
    if (!d.has_bound_oracle())
      throw error(errc::symbolic_unsupported,
                  "directedness probe needs a bound oracle");
    // Probe the loaded chain pairwise through the oracle.
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        const ElemId pair[2] = {d.elements()[i], d.elements()[j]};
        if (!d.bound_oracle(pair))
          return std::make_pair(d.elements()[i], d.elements()[j]);
      }
    return std::nullopt;
  }
  if (d.rule_backed()) return std::nullopt;  // directed by construction
  const int n = static_cast<int>(d.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool bounded = false;
      for (int r = 0; r < n && !bounded; ++r)
        bounded = d.leq(i, r) && d.leq(j, r);
      if (!bounded)
        return std::make_pair(d.elements()[i], d.elements()[j]);
    }
  return std::nullopt;
}

bool is_directed(const DirectedSet& d) { return !undirected_witness(d); }

ElemId upper_bound(const DirectedSet& d, std::span<const ElemId> s) {
  if (s.empty()) throw error(errc::input_error, "upper bound of nothing");
  if (d.kind() == DirectedSet::Kind::symbolic) {
    if (auto b = d.bound_oracle(s)) return *b;
    for (const ElemId& r : d.elements()) {
      bool above = true;
      for (const ElemId& p : s)
        if (!d.leq_id(p, r)) {
          above = false;
          break;
        }
      if (above) return r;
    }
    throw error(errc::no_bound, "no loaded element bounds the set");
  }
  std::vector<int> idx;
  idx.reserve(s.size());
  for (const ElemId& p : s) idx.push_back(d.index_of(p));
  const int n = static_cast<int>(d.size());
  for (int r = 0; r < n; ++r) {
    bool above = true;
    for (int p : idx)
      if (!d.leq(p, r)) {
        above = false;
        break;
      }
    if (above) return d.elements()[r];
  }
  throw error(errc::no_bound, "no element bounds the set");
}

std::optional<ElemId> maximum_of(const DirectedSet& d) {
  if (d.kind() == DirectedSet::Kind::symbolic)
    throw error(errc::symbolic_unsupported,
                "maximum is only probed on finite kinds");
  const int n = static_cast<int>(d.size());
  for (int r = 0; r < n; ++r) {
    bool top = true;
    for (int p = 0; p < n && top; ++p) top = d.leq(p, r);
    if (top) return d.elements()[r];
  }
  return std::nullopt;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::i_immediate:
      return "I-immediate";
    case Verdict::i_provisional:
      return "I-provisional";
    case Verdict::ii_provisional:
      return "II-provisional";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

GameTranscript judge_transcript(const DirectedSet& d,
                                std::span<const ElemId> moves) {
  if (moves.empty())
    throw error(errc::malformed_transcript, "transcript has no moves");
  for (const ElemId& m : moves)
    if (!d.find(m))
      throw error(errc::malformed_transcript, "unloaded move '" + m + "'");

  GameTranscript t;
  t.moves.assign(moves.begin(), moves.end());
  const std::size_t rounds_with_reply = moves.size() / 2;
  t.decided_round = moves.empty() ? 0 : (moves.size() - 1) / 2;

  // A reply below Player I's move settles the whole run for Player I,
  // regardless of anything later.
  for (std::size_t i = 0; i < rounds_with_reply; ++i)
    if (!d.leq_id(moves[2 * i], moves[2 * i + 1])) {
      t.verdict = Verdict::i_immediate;
      t.decided_round = i;
      return t;
    }
  // Player I failing to climb over the previous reply cedes the run unless a
  // later reply misbehaves.
  for (std::size_t i = 0; 2 * i + 2 < moves.size(); ++i)
    if (!d.leq_id(moves[2 * i + 1], moves[2 * i + 2])) {
      t.verdict = Verdict::ii_provisional;
      t.decided_round = i + 1;
      return t;
    }
  try {
    upper_bound(d, moves);
    t.verdict = Verdict::i_provisional;
  } catch (const error& e) {
    if (e.code() != errc::no_bound) throw;
    t.verdict = Verdict::undecided;
  }
  return t;
}

GameTranscript play_bounded(const DirectedSet& d, const GameStrategy& one,
                            const GameStrategy& two, std::size_t rounds) {
  if (rounds == 0) throw error(errc::input_error, "rounds must be positive");
  if (one.side != GameStrategy::Side::one || two.side != GameStrategy::Side::two)
    throw error(errc::input_error, "strategies passed on the wrong sides");
  std::vector<ElemId> moves;
  moves.reserve(2 * rounds);
  for (std::size_t i = 0; i < rounds; ++i) {
    moves.push_back(one.respond(moves));
    moves.push_back(two.respond(moves));
    if (!d.leq_id(moves[2 * i], moves[2 * i + 1])) break;  // settled
  }
  return judge_transcript(d, moves);
}

GameStrategy player_one_bound_strategy(const DirectedSet& d) {
  GameStrategy s;
  s.side = GameStrategy::Side::one;
  s.respond = [&d](std::span<const ElemId> prefix) -> ElemId {
    if (prefix.empty()) return d.elements().front();
    return upper_bound(d, prefix);
  };
  return s;
}

namespace {

std::uint64_t fnv1a(std::uint64_t seed, std::span<const ElemId> prefix) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const ElemId& m : prefix) {
    for (char c : m) mix(static_cast<unsigned char>(c));
    mix(0x1f);
  }
  return h;
}

}  // namespace

GameStrategy seeded_random_strategy(const DirectedSet& d,
                                    GameStrategy::Side side,
                                    std::uint64_t seed) {
  GameStrategy s;
  s.side = side;
  s.respond = [&d, seed](std::span<const ElemId> prefix) -> ElemId {
    std::uint64_t h = fnv1a(seed, prefix);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return d.elements()[h % d.size()];
  };
  return s;
}

}  // namespace invlim
