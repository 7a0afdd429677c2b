#include <doctest.h>

#include <random>

#include "invlim/poset.hpp"

using namespace invlim;

namespace {

// Independent reflexive-transitive closure by repeated relational squaring.
std::vector<std::vector<bool>> closure_oracle(
    int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (r[i][k] && r[k][j] && !r[i][j]) {
            r[i][j] = true;
            changed = true;
          }
  }
  return r;
}

std::vector<ElemId> labels(int n) {
  std::vector<ElemId> out;
  for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

// Player II strategy reading moves off a fixed script.
GameStrategy script_strategy(std::vector<ElemId> script) {
  GameStrategy s;
  s.side = GameStrategy::Side::two;
  s.respond = [script = std::move(script)](
                  std::span<const ElemId> prefix) -> ElemId {
    return script.at(prefix.size() / 2);
  };
  return s;
}

}  // namespace

TEST_CASE("from_pairs closes the listed relation") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> nd(1, 6);
    const int n = nd(rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> ecount(0, 2 * n);
    std::vector<std::pair<int, int>> edges;
    const int e = ecount(rng);
    for (int i = 0; i < e; ++i) edges.push_back({pick(rng), pick(rng)});

    std::vector<std::pair<ElemId, ElemId>> named;
    for (auto [a, b] : edges)
      named.push_back({"e" + std::to_string(a), "e" + std::to_string(b)});
    const DirectedSet d = DirectedSet::from_pairs(labels(n), named);
    const auto want = closure_oracle(n, edges);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(d.leq(i, j) == want[i][j]);
  }
}

TEST_CASE("listed-set validation") {
  CHECK_THROWS_AS(DirectedSet::from_pairs({}, {}), error);
  CHECK_THROWS_AS(DirectedSet::from_pairs({"a", "a"}, {}), error);
  CHECK_THROWS_AS(DirectedSet::from_pairs({"a b"}, {}), error);
  CHECK_THROWS_AS(DirectedSet::from_pairs({"a"}, {{"a", "zz"}}), error);
  CHECK_THROWS_AS(DirectedSet::from_pairs(labels(513), {}), error);
  try {
    DirectedSet::from_pairs(labels(513), {});
  } catch (const error& e) {
    CHECK(e.code() == errc::size_limit);
  }
  CHECK(DirectedSet::from_pairs(labels(512), {}).size() == 512);
}

TEST_CASE("powerset ordering is containment") {
  const DirectedSet d = DirectedSet::powerset(2);
  REQUIRE(d.size() == 4);
  CHECK(d.elements() == std::vector<ElemId>{"00", "01", "10", "11"});
  CHECK(d.leq_id("00", "01"));
  CHECK(d.leq_id("00", "10"));
  CHECK(d.leq_id("01", "11"));
  CHECK(d.leq_id("10", "11"));
  CHECK(!d.leq_id("01", "10"));
  CHECK(!d.leq_id("10", "01"));
  CHECK(!d.leq_id("11", "01"));
  CHECK(maximum_of(d) == ElemId("11"));

  CHECK(DirectedSet::powerset(0).size() == 1);
  CHECK(DirectedSet::powerset(0).elements().front() == "e");
  CHECK(DirectedSet::powerset(4).size() == 16);
  CHECK_THROWS_AS(DirectedSet::powerset(17), error);
  CHECK_THROWS_AS(DirectedSet::powerset(-1), error);

  // Containment agrees with the generic closure on the listed version.
  const DirectedSet d3 = DirectedSet::powerset(3);
  std::vector<std::pair<ElemId, ElemId>> pairs;
  for (const ElemId& p : d3.elements())
    for (const ElemId& q : d3.elements()) {
      bool subset = true;
      for (int b = 0; b < 3; ++b)
        if (p[b] == '1' && q[b] == '0') subset = false;
      if (subset) pairs.push_back({p, q});
    }
  const DirectedSet listed =
      DirectedSet::from_pairs(d3.elements(), pairs);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(d3.leq(i, j) == listed.leq(i, j));
}

TEST_CASE("chain ordering and naming") {
  const DirectedSet d = DirectedSet::chain(12);
  REQUIRE(d.size() == 12);
  CHECK(d.elements().front() == "00");
  CHECK(d.elements().back() == "11");
  CHECK(d.leq_id("03", "10"));
  CHECK(!d.leq_id("10", "03"));
  CHECK(maximum_of(d) == ElemId("11"));
  CHECK_THROWS_AS(DirectedSet::chain(0), error);
  CHECK_THROWS_AS(DirectedSet::chain(100001), error);
}

TEST_CASE("directedness witnesses") {
  CHECK(is_directed(DirectedSet::powerset(3)));
  CHECK(is_directed(DirectedSet::chain(5)));
  CHECK(is_directed(DirectedSet::from_pairs(
      {"p", "q", "r"}, {{"p", "r"}, {"q", "r"}})));

  const DirectedSet bad = DirectedSet::from_pairs({"a", "b"}, {});
  const auto w = undirected_witness(bad);
  REQUIRE(w.has_value());
  CHECK(w->first == "a");
  CHECK(w->second == "b");

  // Two maximal points above a shared bottom: still undirected.
  const DirectedSet vee_down =
      DirectedSet::from_pairs({"a", "b", "c"}, {{"c", "a"}, {"c", "b"}});
  CHECK(!is_directed(vee_down));

  // Oracle cross-check on random relations: directed iff every pair has an
  // upper bound in the closure.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> nd(1, 5);
    const int n = nd(rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> ecount(0, n + 2);
    std::vector<std::pair<int, int>> edges;
    const int e = ecount(rng);
    for (int i = 0; i < e; ++i) edges.push_back({pick(rng), pick(rng)});
    std::vector<std::pair<ElemId, ElemId>> named;
    for (auto [a, b] : edges)
      named.push_back({"e" + std::to_string(a), "e" + std::to_string(b)});
    const DirectedSet d = DirectedSet::from_pairs(labels(n), named);

    const auto r = closure_oracle(n, edges);
    bool want = true;
    for (int i = 0; i < n && want; ++i)
      for (int j = 0; j < n && want; ++j) {
        bool bounded = false;
        for (int k = 0; k < n && !bounded; ++k) bounded = r[i][k] && r[j][k];
        want = bounded;
      }
    CHECK(is_directed(d) == want);
  }
}

TEST_CASE("upper_bound takes the first dominating element in load order") {
  const DirectedSet d = DirectedSet::powerset(2);
  const ElemId s1[] = {"01", "10"};
  CHECK(upper_bound(d, s1) == "11");
  const ElemId s2[] = {"00"};
  CHECK(upper_bound(d, s2) == "00");
  const ElemId s3[] = {"01", "01"};
  CHECK(upper_bound(d, s3) == "01");
  CHECK_THROWS_AS(upper_bound(d, std::span<const ElemId>{}), error);

  const DirectedSet bad = DirectedSet::from_pairs({"a", "b"}, {});
  const ElemId s4[] = {"a", "b"};
  try {
    upper_bound(bad, s4);
    FAIL("expected no_bound");
  } catch (const error& e) {
    CHECK(e.code() == errc::no_bound);
  }
}

TEST_CASE("symbolic sets probe through the oracles") {
  auto rank = [](const ElemId& e) { return std::stoll(e.substr(1)); };
  const DirectedSet d = DirectedSet::symbolic(
      {"s0", "s1", "s2"},
      [rank](const ElemId& a, const ElemId& b) { return rank(a) <= rank(b); },
      [rank](std::span<const ElemId> s) -> std::optional<ElemId> {
        std::int64_t best = 0;
        for (const ElemId& e : s) best = std::max<std::int64_t>(best, rank(e));
        return "s" + std::to_string(best);
      });
  CHECK(d.kind() == DirectedSet::Kind::symbolic);
  CHECK(d.leq_id("s1", "s2"));
  CHECK(d.leq_id("s5", "s9"));  // beyond the loaded prefix
  const ElemId s[] = {"s1", "s7"};
  CHECK(upper_bound(d, s) == "s7");
  CHECK(is_directed(d));
  CHECK_THROWS_AS(maximum_of(d), error);

  // Decreasing probe chain is rejected up front.
  CHECK_THROWS_AS(
      DirectedSet::symbolic(
          {"s1", "s0"},
          [rank](const ElemId& a, const ElemId& b) { return rank(a) <= rank(b); },
          nullptr),
      error);
}

TEST_CASE("maximum_of") {
  CHECK(maximum_of(DirectedSet::chain(4)) == ElemId("3"));
  CHECK(!maximum_of(DirectedSet::from_pairs({"a", "b"}, {})).has_value());
  CHECK(maximum_of(DirectedSet::from_pairs(
            {"a", "m"}, {{"a", "m"}})) == ElemId("m"));
}

TEST_CASE("judging transcripts") {
  const DirectedSet d = DirectedSet::powerset(2);

  // A reply that fails to dominate settles the run at that round.
  auto t = judge_transcript(d, std::vector<ElemId>{"01", "10"});
  CHECK(t.verdict == Verdict::i_immediate);
  CHECK(t.decided_round == 0);

  t = judge_transcript(d, std::vector<ElemId>{"00", "01", "11", "10"});
  CHECK(t.verdict == Verdict::i_immediate);
  CHECK(t.decided_round == 1);

  // A bad reply outranks an earlier climb break.
  t = judge_transcript(d, std::vector<ElemId>{"00", "11", "01", "00"});
  CHECK(t.verdict == Verdict::i_immediate);
  CHECK(t.decided_round == 1);

  // Player I dropping below the last reply cedes the run.
  t = judge_transcript(d, std::vector<ElemId>{"00", "01", "00", "00"});
  CHECK(t.verdict == Verdict::ii_provisional);
  CHECK(t.decided_round == 1);

  // A climbing, bounded prefix is provisionally Player I's.
  t = judge_transcript(d, std::vector<ElemId>{"00", "00", "01", "11"});
  CHECK(t.verdict == Verdict::i_provisional);
  CHECK(t.decided_round == 1);

  // Odd-length prefix: the unanswered move cannot settle anything.
  t = judge_transcript(d, std::vector<ElemId>{"00"});
  CHECK(t.verdict == Verdict::i_provisional);
  CHECK(t.decided_round == 0);

  // On a finite set a climbing run is always bounded by its last move, so
  // "undecided" needs an order whose comparisons do not chain; only the
  // symbolic kind can carry one.
  const DirectedSet loose = DirectedSet::symbolic(
      {"a", "b", "c"},
      [](const ElemId& p, const ElemId& q) {
        if (p == q) return true;
        return (p == "a" && q == "b") || (p == "b" && q == "c");
      },
      nullptr);
  t = judge_transcript(loose, std::vector<ElemId>{"a", "b", "b", "c"});
  CHECK(t.verdict == Verdict::undecided);
  CHECK(t.decided_round == 1);

  CHECK_THROWS_AS(judge_transcript(d, std::span<const ElemId>{}), error);
  try {
    judge_transcript(d, std::vector<ElemId>{"zz"});
    FAIL("expected malformed_transcript");
  } catch (const error& e) {
    CHECK(e.code() == errc::malformed_transcript);
  }
}

TEST_CASE("verdict names") {
  CHECK(std::string(verdict_name(Verdict::i_immediate)) == "I-immediate");
  CHECK(std::string(verdict_name(Verdict::i_provisional)) == "I-provisional");
  CHECK(std::string(verdict_name(Verdict::ii_provisional)) == "II-provisional");
  CHECK(std::string(verdict_name(Verdict::undecided)) == "undecided");
}

TEST_CASE("bound strategy wins every sampled run") {
  for (const DirectedSet& d :
       {DirectedSet::powerset(2), DirectedSet::powerset(3),
        DirectedSet::chain(7),
        DirectedSet::from_pairs({"p", "q", "r"}, {{"p", "r"}, {"q", "r"}})}) {
    const GameStrategy one = player_one_bound_strategy(d);
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
      const GameStrategy two =
          seeded_random_strategy(d, GameStrategy::Side::two, seed);
      const GameTranscript t = play_bounded(d, one, two, 8);
      const bool won = t.verdict == Verdict::i_immediate ||
                       t.verdict == Verdict::i_provisional;
      CAPTURE(seed);
      CHECK(won);
    }
  }
}

TEST_CASE("bound strategy beats every scripted opponent on tiny sets") {
  // Exhaustive over Player II move scripts: |D| <= 3, 3 rounds.
  for (const DirectedSet& d :
       {DirectedSet::chain(2), DirectedSet::chain(3),
        DirectedSet::from_pairs({"a", "m"}, {{"a", "m"}}),
        DirectedSet::from_pairs({"a", "b", "m"}, {{"a", "m"}, {"b", "m"}})}) {
    const GameStrategy one = player_one_bound_strategy(d);
    const int n = static_cast<int>(d.size());
    for (int code = 0; code < n * n * n; ++code) {
      std::vector<ElemId> script{d.elements()[code % n],
                                 d.elements()[code / n % n],
                                 d.elements()[code / (n * n)]};
      const GameTranscript t =
          play_bounded(d, one, script_strategy(script), 3);
      const bool won = t.verdict == Verdict::i_immediate ||
                       t.verdict == Verdict::i_provisional;
      CAPTURE(code);
      CHECK(won);
    }
  }
}

TEST_CASE("fixed seeds replay identically") {
  const DirectedSet d = DirectedSet::powerset(2);
  const GameStrategy one = player_one_bound_strategy(d);
  const GameTranscript a =
      play_bounded(d, one, seeded_random_strategy(d, GameStrategy::Side::two, 7), 4);
  const GameTranscript b =
      play_bounded(d, one, seeded_random_strategy(d, GameStrategy::Side::two, 7), 4);
  CHECK(a.moves == b.moves);
  CHECK(a.verdict == b.verdict);
  const GameTranscript c =
      play_bounded(d, one, seeded_random_strategy(d, GameStrategy::Side::two, 8), 4);
  CHECK(a.moves.front() == c.moves.front());  // Player I opener is fixed
}

TEST_CASE("play_bounded validates its inputs") {
  const DirectedSet d = DirectedSet::chain(2);
  const GameStrategy one = player_one_bound_strategy(d);
  const GameStrategy two =
      seeded_random_strategy(d, GameStrategy::Side::two, 1);
  CHECK_THROWS_AS(play_bounded(d, one, two, 0), error);
  CHECK_THROWS_AS(play_bounded(d, two, one, 3), error);
}
