#pragma once

#include <algorithm>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "invlim/grouplimit.hpp"
#include "invlim/io.hpp"
#include "invlim/model.hpp"

namespace fixtures {

inline std::string path(const char* name) {
  return (std::filesystem::path(FIXTURES_DIR) / name).string();
}

// Chain p < q with A_q = {a, b} collapsing onto A_p = {c}.
inline invlim::InverseSystem collapse_chain() {
  invlim::DirectedSet base =
      invlim::DirectedSet::from_pairs({"p", "q"}, {{"p", "q"}});
  invlim::CoveringMap m{"p", "q", {{"a", "c"}, {"b", "c"}}};
  return invlim::InverseSystem::from_covering(std::move(base),
                                              {{"c"}, {"a", "b"}}, {m});
}

// p, q <= r with one bijective leg and one collapsing leg.
inline invlim::InverseSystem vee_system() {
  invlim::DirectedSet base = invlim::DirectedSet::from_pairs(
      {"p", "q", "r"}, {{"p", "r"}, {"q", "r"}});
  invlim::CoveringMap pr{"p", "r", {{"a", "c"}, {"b", "d"}}};
  invlim::CoveringMap qr{"q", "r", {{"a", "e"}, {"b", "e"}}};
  return invlim::InverseSystem::from_covering(
      std::move(base), {{"c", "d"}, {"e"}, {"a", "b"}}, {pr, qr});
}

// One point a below a mutually comparable three-point cluster. Each cluster
// edge steps the cycle x -> y -> z -> x, so the loop composes to the
// identity; the cluster is a preorder, not a partial order.
inline invlim::InverseSystem topcluster() {
  invlim::DirectedSet base = invlim::DirectedSet::from_pairs(
      {"a", "m1", "m2", "m3"},
      {{"a", "m1"}, {"m1", "m2"}, {"m2", "m3"}, {"m3", "m1"}});
  const std::unordered_map<invlim::FiberId, invlim::FiberId> cycle{
      {"x", "y"}, {"y", "z"}, {"z", "x"}};
  std::vector<invlim::CoveringMap> covering{
      {"a", "m1", {{"x", "u"}, {"y", "u"}, {"z", "u"}}},
      {"m1", "m2", cycle},
      {"m2", "m3", cycle},
      {"m3", "m1", cycle}};
  return invlim::InverseSystem::from_covering(
      std::move(base),
      {{"u"}, {"x", "y", "z"}, {"x", "y", "z"}, {"x", "y", "z"}}, covering);
}

inline std::int64_t chain_rank(const invlim::ElemId& e) {
  return std::stoll(e.substr(1));
}

// Rule-backed system over the symbolic chain s0 < s1 < ...: the fiber over
// sk is {m0..mk} and the maps clamp the index from above.
inline std::shared_ptr<const invlim::InverseSystem> planted_carrier() {
  invlim::DirectedSet base = invlim::io::poset_from_json(
      {{"kind", "builtin"}, {"name", "symbolic-chain"}, {"param", 64}});
  auto fibers = [](const invlim::ElemId& p) {
    std::vector<invlim::FiberId> out;
    for (std::int64_t t = 0; t <= chain_rank(p); ++t)
      out.push_back("m" + std::to_string(t));
    return out;
  };
  auto maps = [](const invlim::ElemId& lower, const invlim::ElemId&,
                 const invlim::FiberId& fiber) {
    const std::int64_t cap = chain_rank(lower);
    return "m" + std::to_string(std::min(chain_rank(fiber), cap));
  };
  return std::make_shared<const invlim::InverseSystem>(
      invlim::InverseSystem::symbolic_rules(std::move(base), fibers, maps));
}

// Lazy element over planted_carrier whose length profile is 1,2,...,11 and
// then constant: it stabilizes exactly at s10.
inline invlim::LimitElement planted_element(
    std::shared_ptr<const invlim::GroupSystem> sys) {
  return invlim::limit_element_lazy(
      std::move(sys), [](const invlim::ElemId& p) -> invlim::GroupValue {
        const std::int64_t j = std::min<std::int64_t>(chain_rank(p), 10);
        std::vector<invlim::Syllable> syl;
        for (std::int64_t t = 0; t < j; ++t)
          syl.push_back({"m" + std::to_string(t), 1});
        syl.push_back({"m" + std::to_string(j), 11 - j});
        return invlim::Word(syl);
      });
}

inline invlim::CayleyGroup cyclic(int n) {
  invlim::CayleyGroup g;
  for (int i = 0; i < n; ++i) g.names.push_back(std::to_string(i));
  g.mul.assign(static_cast<std::size_t>(n), std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mul[a][b] = (a + b) % n;
  g.identity = 0;
  return g;
}

inline invlim::CayleyGroup klein() {
  invlim::CayleyGroup g;
  g.names = {"00", "01", "10", "11"};
  g.mul.assign(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g.mul[a][b] = a ^ b;
  g.identity = 0;
  return g;
}

inline invlim::FiniteGroupSystem one_point(invlim::CayleyGroup g) {
  return invlim::group_system_from_covering(
      invlim::DirectedSet::from_pairs({"p"}, {}), {std::move(g)}, {});
}

// p < q with Z/4 over q reduced mod 2 onto p.
inline invlim::FiniteGroupSystem z4_chain() {
  return invlim::group_system_from_covering(
      invlim::DirectedSet::from_pairs({"p", "q"}, {{"p", "q"}}),
      {cyclic(2), cyclic(4)}, {{"p", "q", {0, 1, 0, 1}}});
}

// p, q < r with the Klein group over r projecting onto each Z/2.
inline invlim::FiniteGroupSystem klein_vee() {
  return invlim::group_system_from_covering(
      invlim::DirectedSet::from_pairs({"p", "q", "r"},
                                      {{"p", "r"}, {"q", "r"}}),
      {cyclic(2), cyclic(2), klein()},
      {{"p", "r", {0, 0, 1, 1}}, {"q", "r", {0, 1, 0, 1}}});
}

inline std::int64_t nonzero_exp(std::mt19937_64& rng, std::int64_t span) {
  std::uniform_int_distribution<std::int64_t> d(1, 2 * span);
  const std::int64_t v = d(rng);
  return v <= span ? v : span - v;  // {1..span, -1..-span}
}

// Random value in the fiber group of the maximum, pushed down everywhere:
// coherent by construction.
inline invlim::LimitElement random_element(
    std::shared_ptr<const invlim::GroupSystem> sys, std::mt19937_64& rng,
    int max_syllables = 5) {
  const invlim::InverseSystem& carrier = *sys->carrier;
  const invlim::DirectedSet& base = carrier.base();
  const invlim::ElemId top = *invlim::maximum_of(base);
  const int m = base.index_of(top);
  const auto& names = carrier.fiber_names(m);
  std::uniform_int_distribution<std::size_t> count(
      0, static_cast<std::size_t>(max_syllables));
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);

  invlim::GroupValue at_top = invlim::gv_identity(sys->variant);
  const std::size_t k = count(rng);
  for (std::size_t i = 0; i < k; ++i)
    at_top = invlim::gv_multiply(
        at_top, invlim::gv_generator(sys->variant, names[pick(rng)],
                                     nonzero_exp(rng, 3)));

  std::vector<invlim::GroupValue> values;
  values.reserve(base.size());
  for (const invlim::ElemId& p : base.elements())
    values.push_back(
        invlim::gv_map(at_top, invlim::connecting_fiber_map(*sys, p, top)));
  return invlim::limit_element_eager(std::move(sys), std::move(values));
}

// Random term list as decompose would emit it: free keeps adjacent threads
// distinct, abelian keeps all threads distinct and sorts them by their fiber
// name at the maximum.
inline std::vector<invlim::Decomposition::Term> random_canonical_terms(
    const invlim::GroupSystem& sys, const std::vector<invlim::Thread>& threads,
    std::mt19937_64& rng, std::size_t max_terms = 4) {
  const invlim::InverseSystem& carrier = *sys.carrier;
  const int m = carrier.base().index_of(*invlim::maximum_of(carrier.base()));
  std::uniform_int_distribution<std::size_t> count(0, max_terms);
  std::uniform_int_distribution<std::size_t> pick(0, threads.size() - 1);
  std::vector<invlim::Decomposition::Term> terms;
  const std::size_t want = std::min(count(rng), threads.size());
  if (sys.variant == invlim::Variant::free_group) {
    std::size_t last = threads.size();
    while (terms.size() < want) {
      const std::size_t i = pick(rng);
      if (i == last) continue;
      terms.push_back({threads[i], nonzero_exp(rng, 3)});
      last = i;
    }
  } else {
    std::vector<std::size_t> chosen;
    while (chosen.size() < want) {
      const std::size_t i = pick(rng);
      if (std::find(chosen.begin(), chosen.end(), i) == chosen.end())
        chosen.push_back(i);
    }
    std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
      return carrier.fiber_names(m)[threads[a].at(m)] <
             carrier.fiber_names(m)[threads[b].at(m)];
    });
    for (std::size_t i : chosen)
      terms.push_back({threads[i], nonzero_exp(rng, 3)});
  }
  return terms;
}

}  // namespace fixtures
