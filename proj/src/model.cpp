#include "invlim/model.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>

namespace invlim {

namespace {
constexpr std::size_t kDomainLimit = 200;

std::uint64_t pack2(int a, int b) {
  return (static_cast<std::uint64_t>(a) << 20) | static_cast<std::uint64_t>(b);
}

std::uint64_t pack3(int a, int b, int c) {
  return (static_cast<std::uint64_t>(a) << 40) |
         (static_cast<std::uint64_t>(b) << 20) | static_cast<std::uint64_t>(c);
}
}  // namespace

void validate_group(const CayleyGroup& g, const std::string& where) {
  const int n = g.order();
  if (n == 0) throw error(errc::not_a_group, "no elements at '" + where + "'");
  if (g.identity < 0 || g.identity >= n)
    throw error(errc::not_a_group, "identity index out of range at '" + where + "'");
  if (g.mul.size() != static_cast<std::size_t>(n))
    throw error(errc::not_a_group, "table is not square at '" + where + "'");
  for (const auto& row : g.mul) {
    if (row.size() != static_cast<std::size_t>(n))
      throw error(errc::not_a_group, "table is not square at '" + where + "'");
    for (int v : row)
      if (v < 0 || v >= n)
        throw error(errc::not_a_group, "table entry out of range at '" + where + "'");
  }
  for (int a = 0; a < n; ++a)
    if (g.op(g.identity, a) != a || g.op(a, g.identity) != a)
      throw error(errc::not_a_group, "identity law fails at '" + where + "'");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c)))
          throw error(errc::not_a_group,
                      "associativity fails at '" + where + "' on (" +
                          g.names[a] + ", " + g.names[b] + ", " + g.names[c] +
                          ")");
  for (int a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < n && !has_inverse; ++b)
      has_inverse = g.op(a, b) == g.identity && g.op(b, a) == g.identity;
    if (!has_inverse)
      throw error(errc::not_a_group,
                  "no inverse for '" + g.names[a] + "' at '" + where + "'");
  }
}

std::uint64_t FiniteGroupSystem::pair_key(int lower, int upper) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lower)) << 32) |
         static_cast<std::uint32_t>(upper);
}

const std::vector<int>& FiniteGroupSystem::hom(int lower, int upper) const {
  return homs.at(pair_key(lower, upper));
}

FiniteGroupSystem group_system_from_covering(
    DirectedSet base, std::vector<CayleyGroup> groups,
    const std::vector<CoveringHom>& covering) {
  if (auto witness = undirected_witness(base))
    throw error(errc::not_directed, "no upper bound for {" + witness->first +
                                        ", " + witness->second + "}");
  FiniteGroupSystem sys;
  sys.base = std::move(base);
  sys.groups = std::move(groups);
  const int n = static_cast<int>(sys.base.size());
  if (sys.groups.size() != static_cast<std::size_t>(n))
    throw error(errc::input_error, "one group per base point required");
  for (int q = 0; q < n; ++q)
    validate_group(sys.groups[q], sys.base.elements()[q]);

  std::vector<std::vector<std::pair<int, const CoveringHom*>>> down(n);
  for (const CoveringHom& ch : covering) {
    const int lo = sys.base.index_of(ch.lower);
    const int hi = sys.base.index_of(ch.upper);
    if (lo == hi)
      throw error(errc::input_error, "listed map on the diagonal at '" +
                                         ch.lower + "'");
    if (!sys.base.leq(lo, hi))
      throw error(errc::input_error, "listed map against the order: (" +
                                         ch.lower + ", " + ch.upper + ")");
    if (ch.images.size() != static_cast<std::size_t>(sys.groups[hi].order()))
      throw error(errc::non_total_map, "map (" + ch.lower + ", " + ch.upper +
                                           ") misses group elements");
    for (int v : ch.images)
      if (v < 0 || v >= sys.groups[lo].order())
        throw error(errc::input_error, "map (" + ch.lower + ", " + ch.upper +
                                           ") image out of range");
    down[hi].push_back({lo, &ch});
  }

  for (int r = 0; r < n; ++r) {
    std::vector<int> identity(static_cast<std::size_t>(sys.groups[r].order()));
    std::iota(identity.begin(), identity.end(), 0);
    sys.homs[FiniteGroupSystem::pair_key(r, r)] = std::move(identity);
    std::deque<int> queue{r};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      const auto from_u = sys.homs.at(FiniteGroupSystem::pair_key(u, r));
      for (const auto& [lo, ch] : down[u]) {
        if (sys.homs.contains(FiniteGroupSystem::pair_key(lo, r))) continue;
        std::vector<int> composed(from_u.size());
        for (std::size_t a = 0; a < from_u.size(); ++a)
          composed[a] = ch->images[static_cast<std::size_t>(from_u[a])];
        sys.homs[FiniteGroupSystem::pair_key(lo, r)] = std::move(composed);
        queue.push_back(lo);
      }
    }
  }

  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      if (!sys.base.leq(p, q)) continue;
      auto it = sys.homs.find(FiniteGroupSystem::pair_key(p, q));
      if (it == sys.homs.end())
        throw error(errc::non_total_map,
                    "no homomorphism for pair (" + sys.base.elements()[p] +
                        ", " + sys.base.elements()[q] + ")");
      const auto& h = it->second;
      for (int a = 0; a < sys.groups[q].order(); ++a)
        for (int b = 0; b < sys.groups[q].order(); ++b)
          if (h[static_cast<std::size_t>(sys.groups[q].op(a, b))] !=
              sys.groups[p].op(h[static_cast<std::size_t>(a)],
                               h[static_cast<std::size_t>(b)]))
            throw error(errc::not_a_homomorphism,
                        "pair (" + sys.base.elements()[p] + ", " +
                            sys.base.elements()[q] +
                            ") does not preserve products");
    }

  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q) {
      if (!sys.base.leq(q, r)) continue;
      for (int p = 0; p < n; ++p) {
        if (!sys.base.leq(p, q)) continue;
        const auto& h_qr = sys.hom(q, r);
        const auto& h_pq = sys.hom(p, q);
        const auto& h_pr = sys.hom(p, r);
        for (int a = 0; a < sys.groups[r].order(); ++a)
          if (h_pq[static_cast<std::size_t>(h_qr[static_cast<std::size_t>(a)])] !=
              h_pr[static_cast<std::size_t>(a)])
            throw error(errc::coherence_violation,
                        "triple (" + sys.base.elements()[p] + ", " +
                            sys.base.elements()[q] + ", " +
                            sys.base.elements()[r] + ") breaks at '" +
                            sys.groups[r].names[a] + "'");
      }
    }
  return sys;
}

int Structure::point(int q, int g, int tag) const {
  return block_offset[q] + tag * system.groups[q].order() + g;
}

Structure build_model(FiniteGroupSystem sys) {
  Structure m;
  m.system = std::move(sys);
  const int n = static_cast<int>(m.system.base.size());
  std::size_t total = 0;
  for (const CayleyGroup& g : m.system.groups)
    total += 2 * static_cast<std::size_t>(g.order());
  if (total > kDomainLimit)
    throw error(errc::size_limit, "domain of " + std::to_string(total) +
                                      " points exceeds " +
                                      std::to_string(kDomainLimit));
  m.block_offset.resize(n);
  int offset = 0;
  for (int q = 0; q < n; ++q) {
    m.block_offset[q] = offset;
    const int ord = m.system.groups[q].order();
    for (int tag = 0; tag < 2; ++tag)
      for (int g = 0; g < ord; ++g) m.domain.push_back({q, g, tag});
    offset += 2 * ord;
  }

  for (int q = 0; q < n; ++q) {
    const int ord = m.system.groups[q].order();
    std::vector<std::array<int, 3>> triples;
    triples.reserve(static_cast<std::size_t>(ord) * ord);
    for (int g = 0; g < ord; ++g)
      for (int h = 0; h < ord; ++h)
        triples.push_back({m.point(q, g, 0), m.point(q, h, 1),
                           m.point(q, m.system.groups[q].op(g, h), 0)});
    m.f_triples.push_back(std::move(triples));
  }

  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q) {
      if (q == r || !m.system.base.leq(q, r)) continue;
      const auto& h = m.system.hom(q, r);
      std::vector<std::array<int, 2>> pairs;
      pairs.reserve(static_cast<std::size_t>(m.system.groups[r].order()));
      for (int g = 0; g < m.system.groups[r].order(); ++g)
        pairs.push_back({m.point(r, g, 0),
                         m.point(q, h[static_cast<std::size_t>(g)], 0)});
      m.h_pairs.push_back(std::move(pairs));
      m.h_key.push_back({q, r});
    }
  return m;
}

bool is_automorphism(const Structure& m, const std::vector<int>& perm) {
  const std::size_t n = m.domain_size();
  if (perm.size() != n) return false;
  std::vector<bool> hit(n, false);
  for (int v : perm) {
    if (v < 0 || v >= static_cast<int>(n) || hit[static_cast<std::size_t>(v)])
      return false;
    hit[static_cast<std::size_t>(v)] = true;
  }
  // Constants must be fixed, blocks preserved.
  for (std::size_t x = 0; x < n; ++x) {
    const auto& p = m.domain[x];
    const auto& img = m.domain[static_cast<std::size_t>(perm[x])];
    if (p.tag == 1 && perm[x] != static_cast<int>(x)) return false;
    if (p.tag == 0 && (img.tag != 0 || img.q != p.q)) return false;
  }
  // A bijection preserving every tuple forward preserves the relations both
  // ways: the image of a finite tuple set of equal size inside itself is the
  // whole set.
  std::unordered_set<std::uint64_t> set2;
  for (std::size_t k = 0; k < m.h_pairs.size(); ++k) {
    set2.clear();
    for (const auto& t : m.h_pairs[k]) set2.insert(pack2(t[0], t[1]));
    for (const auto& t : m.h_pairs[k])
      if (!set2.contains(pack2(perm[t[0]], perm[t[1]]))) return false;
  }
  std::unordered_set<std::uint64_t> set3;
  for (const auto& triples : m.f_triples) {
    set3.clear();
    for (const auto& t : triples) set3.insert(pack3(t[0], t[1], t[2]));
    for (const auto& t : triples)
      if (!set3.contains(pack3(perm[t[0]], perm[t[1]], perm[t[2]])))
        return false;
  }
  return true;
}

namespace {

// Static search tables shared by every branch.
struct SearchTables {
  const Structure& m;
  // Tuple lists: h lists first, then f lists.
  std::vector<const std::vector<std::array<int, 2>>*> pair_lists;
  std::vector<const std::vector<std::array<int, 3>>*> triple_lists;
  std::vector<std::unordered_set<std::uint64_t>> pair_sets;
  std::vector<std::unordered_set<std::uint64_t>> triple_sets;
  // Per domain point: (list id, tuple index); list ids < pair_lists.size()
  // address pairs, the rest triples.
  std::vector<std::vector<std::pair<int, int>>> incident;
  std::vector<int> order;  // free points in assignment order

  explicit SearchTables(const Structure& m_) : m(m_) {
    for (const auto& lst : m.h_pairs) {
      pair_lists.push_back(&lst);
      std::unordered_set<std::uint64_t> s;
      for (const auto& t : lst) s.insert(pack2(t[0], t[1]));
      pair_sets.push_back(std::move(s));
    }
    for (const auto& lst : m.f_triples) {
      triple_lists.push_back(&lst);
      std::unordered_set<std::uint64_t> s;
      for (const auto& t : lst) s.insert(pack3(t[0], t[1], t[2]));
      triple_sets.push_back(std::move(s));
    }
    incident.resize(m.domain_size());
    for (std::size_t k = 0; k < pair_lists.size(); ++k)
      for (std::size_t i = 0; i < pair_lists[k]->size(); ++i)
        for (int x : (*pair_lists[k])[i])
          incident[static_cast<std::size_t>(x)].push_back(
              {static_cast<int>(k), static_cast<int>(i)});
    for (std::size_t k = 0; k < triple_lists.size(); ++k)
      for (std::size_t i = 0; i < triple_lists[k]->size(); ++i) {
        const auto& t = (*triple_lists[k])[i];
        // A point may occur twice in a triple; record it once.
        for (int j = 0; j < 3; ++j) {
          bool seen = false;
          for (int l = 0; l < j; ++l) seen = seen || t[l] == t[j];
          if (!seen)
            incident[static_cast<std::size_t>(t[j])].push_back(
                {static_cast<int>(pair_lists.size() + k), static_cast<int>(i)});
        }
      }
    for (std::size_t x = 0; x < m.domain_size(); ++x)
      if (m.domain[x].tag == 0) order.push_back(static_cast<int>(x));
  }

  // All tuples through x whose points are now assigned must map into their
  // relation.
  bool consistent(const std::vector<int>& perm, int x) const {
    for (const auto& [list, idx] : incident[static_cast<std::size_t>(x)]) {
      if (list < static_cast<int>(pair_lists.size())) {
        const auto& t = (*pair_lists[static_cast<std::size_t>(list)])
            [static_cast<std::size_t>(idx)];
        if (perm[t[0]] < 0 || perm[t[1]] < 0) continue;
        if (!pair_sets[static_cast<std::size_t>(list)].contains(
                pack2(perm[t[0]], perm[t[1]])))
          return false;
      } else {
        const int k = list - static_cast<int>(pair_lists.size());
        const auto& t = (*triple_lists[static_cast<std::size_t>(k)])
            [static_cast<std::size_t>(idx)];
        if (perm[t[0]] < 0 || perm[t[1]] < 0 || perm[t[2]] < 0) continue;
        if (!triple_sets[static_cast<std::size_t>(k)].contains(
                pack3(perm[t[0]], perm[t[1]], perm[t[2]])))
          return false;
      }
    }
    return true;
  }

  void block_of(int x, int* begin, int* end) const {
    const auto& p = m.domain[static_cast<std::size_t>(x)];
    *begin = m.block_offset[p.q];
    *end = *begin + m.system.groups[p.q].order();
  }

  void descend(std::vector<int>& perm, std::vector<bool>& used,
               std::size_t depth, std::vector<std::vector<int>>& out) const {
    if (depth == order.size()) {
      out.push_back(perm);
      return;
    }
    const int x = order[depth];
    int begin = 0, end = 0;
    block_of(x, &begin, &end);
    for (int y = begin; y < end; ++y) {
      if (used[static_cast<std::size_t>(y)]) continue;
      perm[static_cast<std::size_t>(x)] = y;
      used[static_cast<std::size_t>(y)] = true;
      if (consistent(perm, x)) descend(perm, used, depth + 1, out);
      used[static_cast<std::size_t>(y)] = false;
      perm[static_cast<std::size_t>(x)] = -1;
    }
  }

  std::vector<int> fresh_perm() const {
    std::vector<int> perm(m.domain_size(), -1);
    for (std::size_t x = 0; x < m.domain_size(); ++x)
      if (m.domain[x].tag == 1) perm[x] = static_cast<int>(x);
    return perm;
  }
};

std::vector<Automorphism> finish(const Structure& m,
                                 std::vector<std::vector<int>> perms) {
  std::sort(perms.begin(), perms.end());
  std::vector<Automorphism> out;
  out.reserve(perms.size());
  for (auto& p : perms) {
    Automorphism a;
    a.coefficients = extract_coefficients(m, p);
    a.perm = std::move(p);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

std::vector<Automorphism> automorphisms_serial(const Structure& m) {
  SearchTables tables(m);
  std::vector<std::vector<int>> perms;
  std::vector<int> perm = tables.fresh_perm();
  std::vector<bool> used(m.domain_size(), false);
  tables.descend(perm, used, 0, perms);
  return finish(m, std::move(perms));
}

std::vector<Automorphism> automorphisms(const Structure& m) {
  SearchTables tables(m);
  if (tables.order.empty()) return finish(m, {tables.fresh_perm()});
  const int x0 = tables.order[0];
  int begin = 0, end = 0;
  tables.block_of(x0, &begin, &end);
  const int width = end - begin;
  std::vector<std::vector<std::vector<int>>> found(
      static_cast<std::size_t>(width));

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < width; ++c) {
    std::vector<int> perm = tables.fresh_perm();
    std::vector<bool> used(m.domain_size(), false);
    const int y = begin + c;
    perm[static_cast<std::size_t>(x0)] = y;
    used[static_cast<std::size_t>(y)] = true;
    if (tables.consistent(perm, x0))
      tables.descend(perm, used, 1, found[static_cast<std::size_t>(c)]);
  }

  std::vector<std::vector<int>> perms;
  for (auto& part : found)
    for (auto& p : part) perms.push_back(std::move(p));
  return finish(m, std::move(perms));
}

std::vector<int> extract_coefficients(const Structure& m,
                                      const std::vector<int>& perm) {
  const int n = static_cast<int>(m.system.base.size());
  std::vector<int> coeff(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    const CayleyGroup& grp = m.system.groups[static_cast<std::size_t>(q)];
    const int image = perm[static_cast<std::size_t>(
        m.point(q, grp.identity, 0))];
    coeff[static_cast<std::size_t>(q)] =
        m.domain[static_cast<std::size_t>(image)].g;
    for (int g = 0; g < grp.order(); ++g) {
      const int img = perm[static_cast<std::size_t>(m.point(q, g, 0))];
      const int want =
          m.point(q, grp.op(coeff[static_cast<std::size_t>(q)], g), 0);
      if (img != want)
        throw error(errc::translation_form_violated,
                    "block '" + m.system.base.elements()[q] +
                        "' moves '" + grp.names[static_cast<std::size_t>(g)] +
                        "' off the translation orbit");
    }
  }
  return coeff;
}

Automorphism sigma_from_limit(const Structure& m,
                              const std::vector<int>& family) {
  const int n = static_cast<int>(m.system.base.size());
  if (family.size() != static_cast<std::size_t>(n))
    throw error(errc::input_error, "one coefficient per base point required");
  for (int q = 0; q < n; ++q)
    if (family[static_cast<std::size_t>(q)] < 0 ||
        family[static_cast<std::size_t>(q)] >=
            m.system.groups[static_cast<std::size_t>(q)].order())
      throw error(errc::input_error, "coefficient out of range");
  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q) {
      if (!m.system.base.leq(q, r)) continue;
      const auto& h = m.system.hom(q, r);
      if (h[static_cast<std::size_t>(family[static_cast<std::size_t>(r)])] !=
          family[static_cast<std::size_t>(q)])
        throw error(errc::incoherent,
                    "pair (" + m.system.base.elements()[q] + ", " +
                        m.system.base.elements()[r] +
                        ") disagrees under the homomorphism");
    }
  Automorphism a;
  a.coefficients = family;
  a.perm.resize(m.domain_size());
  for (std::size_t x = 0; x < m.domain_size(); ++x) {
    const auto& p = m.domain[x];
    if (p.tag == 1) {
      a.perm[x] = static_cast<int>(x);
    } else {
      const CayleyGroup& grp = m.system.groups[static_cast<std::size_t>(p.q)];
      a.perm[x] =
          m.point(p.q, grp.op(family[static_cast<std::size_t>(p.q)], p.g), 0);
    }
  }
  if (!is_automorphism(m, a.perm))
    throw std::logic_error("translation by a coherent family must act");
  return a;
}

std::vector<std::vector<int>> enumerate_limit_families(
    const FiniteGroupSystem& sys) {
  auto max = maximum_of(sys.base);
  if (!max) throw error(errc::no_bound, "base has no maximum");
  const int m = sys.base.index_of(*max);
  const int n = static_cast<int>(sys.base.size());
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(sys.groups[static_cast<std::size_t>(m)]
                                           .order()));
  for (int g = 0; g < sys.groups[static_cast<std::size_t>(m)].order(); ++g) {
    std::vector<int> family(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q)
      family[static_cast<std::size_t>(q)] =
          sys.hom(q, m)[static_cast<std::size_t>(g)];
    out.push_back(std::move(family));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PhiReport verify_phi_isomorphism(const FiniteGroupSystem& sys) {
  PhiReport r;
  const Structure m = build_model(sys);
  const std::vector<Automorphism> auts = automorphisms(m);
  const std::vector<std::vector<int>> families = enumerate_limit_families(sys);
  r.automorphism_count = auts.size();
  r.family_count = families.size();

  std::vector<std::vector<int>> extracted;
  extracted.reserve(auts.size());
  for (const Automorphism& a : auts) extracted.push_back(a.coefficients);
  std::sort(extracted.begin(), extracted.end());
  r.injective =
      std::adjacent_find(extracted.begin(), extracted.end()) == extracted.end();
  r.surjective = extracted == families;

  r.homomorphic = true;
  for (std::size_t i = 0; i < auts.size() && r.homomorphic; ++i)
    for (std::size_t j = 0; j < auts.size() && r.homomorphic; ++j) {
      std::vector<int> composed(m.domain_size());
      for (std::size_t x = 0; x < m.domain_size(); ++x)
        composed[x] = auts[i].perm[static_cast<std::size_t>(
            auts[j].perm[x])];
      const std::vector<int> c = extract_coefficients(m, composed);
      for (int q = 0; q < static_cast<int>(sys.base.size()); ++q)
        if (c[static_cast<std::size_t>(q)] !=
            sys.groups[static_cast<std::size_t>(q)].op(
                auts[i].coefficients[static_cast<std::size_t>(q)],
                auts[j].coefficients[static_cast<std::size_t>(q)])) {
          r.homomorphic = false;
          break;
        }
    }

  r.pass = r.injective && r.surjective && r.homomorphic &&
           r.automorphism_count == r.family_count;
  if (!r.pass) {
    r.detail = std::string("injective=") + (r.injective ? "yes" : "no") +
               " surjective=" + (r.surjective ? "yes" : "no") +
               " homomorphic=" + (r.homomorphic ? "yes" : "no");
  }
  return r;
}

}  // namespace invlim
