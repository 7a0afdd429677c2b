#include "invlim/grouplimit.hpp"

#include <algorithm>
#include <array>

namespace invlim {

const char* variant_name(Variant v) {
  return v == Variant::free_group ? "free" : "abelian";
}

Variant variant_from_name(const std::string& name) {
  if (name == "free") return Variant::free_group;
  if (name == "abelian") return Variant::abelian;
  throw error(errc::input_error, "unknown variant '" + name + "'");
}

GroupValue gv_identity(Variant v) {
  if (v == Variant::free_group) return Word();
  return AbelianVector();
}

GroupValue gv_generator(Variant v, const FiberId& fiber, std::int64_t exp) {
  if (v == Variant::free_group) {
    const Syllable raw[1] = {{fiber, exp}};
    return Word(raw);
  }
  return AbelianVector({{fiber, exp}});
}

namespace {

void require_same_alternative(const GroupValue& a, const GroupValue& b) {
  if (a.index() != b.index())
    throw std::logic_error("mixed free and abelian values");
}

}  // namespace

GroupValue gv_multiply(const GroupValue& a, const GroupValue& b) {
  require_same_alternative(a, b);
  if (std::holds_alternative<Word>(a))
    return multiply(std::get<Word>(a), std::get<Word>(b));
  return ab_add(std::get<AbelianVector>(a), std::get<AbelianVector>(b));
}

GroupValue gv_inverse(const GroupValue& a) {
  if (std::holds_alternative<Word>(a)) return invert(std::get<Word>(a));
  return ab_negate(std::get<AbelianVector>(a));
}

GroupValue gv_map(const GroupValue& a, const FiberMap& f) {
  if (std::holds_alternative<Word>(a))
    return map_generators(std::get<Word>(a), f);
  return ab_map_generators(std::get<AbelianVector>(a), f);
}

std::size_t gv_length(const GroupValue& a) {
  if (std::holds_alternative<Word>(a))
    return syllable_length(std::get<Word>(a));
  return support_size(std::get<AbelianVector>(a));
}

bool gv_is_identity(const GroupValue& a) {
  if (std::holds_alternative<Word>(a)) return std::get<Word>(a).is_identity();
  return std::get<AbelianVector>(a).is_identity();
}

GroupValue gv_from_literal(Variant v, const std::string& text) {
  if (v == Variant::free_group) return word_from_literal(text);
  return abelian_from_literal(text);
}

std::string gv_to_literal(const GroupValue& a) {
  if (std::holds_alternative<Word>(a))
    return word_to_literal(std::get<Word>(a));
  return abelian_to_literal(std::get<AbelianVector>(a));
}

std::shared_ptr<const GroupSystem> induced_system(
    std::shared_ptr<const InverseSystem> carrier, Variant variant) {
  if (!carrier) throw error(errc::input_error, "no carrier system");
  auto sys = std::make_shared<GroupSystem>();
  sys->carrier = std::move(carrier);
  sys->variant = variant;
  return sys;
}

FiberMap connecting_fiber_map(const GroupSystem& sys, const ElemId& lower,
                              const ElemId& upper) {
  const InverseSystem* carrier = sys.carrier.get();
  return [carrier, lower, upper](const FiberId& a) -> std::optional<FiberId> {
    return carrier->map_fiber(lower, upper, a);
  };
}

namespace {

void check_variant(const GroupSystem& sys, const GroupValue& v,
                   const ElemId& where) {
  const bool ok = sys.variant == Variant::free_group
                      ? std::holds_alternative<Word>(v)
                      : std::holds_alternative<AbelianVector>(v);
  if (!ok)
    throw error(errc::input_error,
                "value at '" + where + "' does not match the variant");
}

// Each generator must name a fiber element of its point.
void check_fibers(const GroupSystem& sys, const GroupValue& v,
                  const ElemId& where) {
  const std::vector<FiberId> names = sys.carrier->fibers_of(where);
  auto known = [&names](const FiberId& f) {
    return std::find(names.begin(), names.end(), f) != names.end();
  };
  if (std::holds_alternative<Word>(v)) {
    for (const Syllable& s : std::get<Word>(v).syllables())
      if (!known(s.fiber))
        throw error(errc::input_error, "generator '" + s.fiber +
                                           "' is not a fiber element of '" +
                                           where + "'");
  } else {
    for (const auto& [fiber, _] : std::get<AbelianVector>(v).entries())
      if (!known(fiber))
        throw error(errc::input_error, "generator '" + fiber +
                                           "' is not a fiber element of '" +
                                           where + "'");
  }
}

GroupValue push_value(const GroupSystem& sys, const GroupValue& v,
                      const ElemId& lower, const ElemId& upper) {
  return gv_map(v, connecting_fiber_map(sys, lower, upper));
}

}  // namespace

GroupValue LimitElement::at(const ElemId& p) const {
  if (eager_) return (*eager_)[sys_->carrier->base().index_of(p)];
  std::lock_guard<std::mutex> hold(lazy_->guard);
  auto it = lazy_->cache.find(p);
  if (it != lazy_->cache.end()) return it->second;
  GroupValue v = lazy_->eval(p);
  check_variant(*sys_, v, p);
  const DirectedSet& base = sys_->carrier->base();
  // Verify the new probe against everything probed so far, both ways.
  for (const auto& [q, w] : lazy_->cache) {
    if (base.leq_id(p, q)) {
      if (!(push_value(*sys_, w, p, q) == v))
        throw error(errc::incoherent,
                    "pair (" + p + ", " + q + ") disagrees under the map");
    }
    if (base.leq_id(q, p)) {
      if (!(push_value(*sys_, v, q, p) == w))
        throw error(errc::incoherent,
                    "pair (" + q + ", " + p + ") disagrees under the map");
    }
  }
  lazy_->cache.emplace(p, v);
  return v;
}

GroupValue LimitElement::at_index(int elem) const {
  if (!eager_)
    throw error(errc::symbolic_unsupported, "lazy elements are probed by id");
  return (*eager_)[elem];
}

bool operator==(const LimitElement& a, const LimitElement& b) {
  if (!a.eager_ || !b.eager_)
    throw error(errc::symbolic_unsupported,
                "lazy elements compare only at probed points");
  return *a.eager_ == *b.eager_;
}

LimitElement limit_element_eager(std::shared_ptr<const GroupSystem> sys,
                                 std::vector<GroupValue> values) {
  if (!sys) throw error(errc::input_error, "no system");
  const InverseSystem& carrier = *sys->carrier;
  if (!carrier.is_finite() || carrier.rule_backed())
    throw error(errc::symbolic_unsupported,
                "eager elements need a finite system");
  const DirectedSet& base = carrier.base();
  const int n = static_cast<int>(base.size());
  if (values.size() != static_cast<std::size_t>(n))
    throw error(errc::input_error, "one value per base point required");
  for (int p = 0; p < n; ++p) {
    check_variant(*sys, values[p], base.elements()[p]);
    check_fibers(*sys, values[p], base.elements()[p]);
  }
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      if (!base.leq(p, q)) continue;
      if (!(push_value(*sys, values[q], base.elements()[p],
                       base.elements()[q]) == values[p]))
        throw error(errc::incoherent, "pair (" + base.elements()[p] + ", " +
                                          base.elements()[q] +
                                          ") disagrees under the map");
    }
  LimitElement g;
  g.sys_ = std::move(sys);
  g.eager_ =
      std::make_shared<const std::vector<GroupValue>>(std::move(values));
  return g;
}

LimitElement limit_element_lazy(
    std::shared_ptr<const GroupSystem> sys,
    std::function<GroupValue(const ElemId&)> eval) {
  if (!sys) throw error(errc::input_error, "no system");
  if (!eval) throw error(errc::input_error, "no evaluation rule");
  LimitElement g;
  g.sys_ = std::move(sys);
  auto core = std::make_shared<LimitElement::LazyCore>();
  core->eval = std::move(eval);
  g.lazy_ = std::move(core);
  return g;
}

LimitElement basis_element(std::shared_ptr<const GroupSystem> sys,
                           const Thread& t) {
  if (!sys) throw error(errc::input_error, "no system");
  const InverseSystem& carrier = *sys->carrier;
  if (!t.is_dense() || !thread_is_coherent(carrier, t))
    throw error(errc::incoherent, "thread is not coherent");
  const int n = static_cast<int>(carrier.base().size());
  std::vector<GroupValue> values;
  values.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p)
    values.push_back(
        gv_generator(sys->variant, carrier.fiber_names(p)[t.at(p)]));
  return limit_element_eager(std::move(sys), std::move(values));
}

LimitElement multiply_limit(const LimitElement& a, const LimitElement& b) {
  if (a.system_ptr() != b.system_ptr())
    throw error(errc::input_error, "elements of different systems");
  auto sys = a.system_ptr();
  if (!a.lazy() && !b.lazy()) {
    const int n = static_cast<int>(sys->carrier->base().size());
    std::vector<GroupValue> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
      values.push_back(gv_multiply(a.at_index(p), b.at_index(p)));
    return limit_element_eager(std::move(sys), std::move(values));
  }
  return limit_element_lazy(sys, [a, b](const ElemId& p) {
    return gv_multiply(a.at(p), b.at(p));
  });
}

LimitElement invert_limit(const LimitElement& a) {
  auto sys = a.system_ptr();
  if (!a.lazy()) {
    const int n = static_cast<int>(sys->carrier->base().size());
    std::vector<GroupValue> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p) values.push_back(gv_inverse(a.at_index(p)));
    return limit_element_eager(std::move(sys), std::move(values));
  }
  return limit_element_lazy(
      sys, [a](const ElemId& p) { return gv_inverse(a.at(p)); });
}

StabilizationPoint stabilization_point(const LimitElement& g,
                                       std::size_t window,
                                       std::size_t budget) {
  if (window == 0) throw error(errc::input_error, "window must be positive");
  const DirectedSet& base = g.system().carrier->base();
  if (!g.lazy()) {
    auto max = maximum_of(base);
    if (!max) throw error(errc::no_bound, "base has no maximum");
    StabilizationPoint s;
    s.point = *max;
    s.length = gv_length(g.at(*max));
    s.probes = 1;
    return s;
  }
  const std::vector<ElemId>& chain = base.elements();
  std::size_t run_start = 0;
  std::size_t run_length = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < chain.size() && k < budget; ++k) {
    const std::size_t len = gv_length(g.at(chain[k]));
    if (run_length > 0 && len == last) {
      ++run_length;
    } else {
      run_start = k;
      run_length = 1;
      last = len;
    }
    if (run_length >= window) {
      StabilizationPoint s;
      s.point = chain[run_start];
      s.length = last;
      s.probes = k + 1;
      return s;
    }
  }
  throw error(errc::unstable,
              "length profile still changing after " +
                  std::to_string(std::min<std::size_t>(budget, chain.size())) +
                  " probes");
}

namespace {

// Ordered support of an abelian value together with coefficients.
std::vector<std::pair<FiberId, std::int64_t>> ab_terms(const GroupValue& v) {
  const auto& entries = std::get<AbelianVector>(v).entries();
  return {entries.begin(), entries.end()};
}

Decomposition decompose_eager(const LimitElement& g) {
  const GroupSystem& sys = g.system();
  const InverseSystem& carrier = *sys.carrier;
  const DirectedSet& base = carrier.base();
  const StabilizationPoint stab = stabilization_point(g);
  const ElemId& p_bar = stab.point;
  const GroupValue top = g.at(p_bar);
  const int n = static_cast<int>(base.size());

  Decomposition d;
  d.stabilizer = p_bar;
  d.length = gv_length(top);

  // Fiber data of the i-th term at every base point, read off above the
  // stabilization point and pushed down.
  std::vector<std::vector<std::int32_t>> values(
      d.length, std::vector<std::int32_t>(static_cast<std::size_t>(n)));
  std::vector<std::int64_t> exps(d.length);

  if (sys.variant == Variant::free_group) {
    const auto& top_syl = std::get<Word>(top).syllables();
    for (std::size_t i = 0; i < d.length; ++i) exps[i] = top_syl[i].exp;
    for (int p = 0; p < n; ++p) {
      const ElemId join = upper_bound(base, std::array<ElemId, 2>{
                                                base.elements()[p], p_bar});
      const GroupValue at_join = g.at(join);
      const auto& syl = std::get<Word>(at_join).syllables();
      if (syl.size() != d.length)
        throw error(errc::incoherent,
                    "length profile not stabilized at '" + join + "'");
      const int pj = base.index_of(join);
      for (std::size_t i = 0; i < d.length; ++i)
        values[i][static_cast<std::size_t>(p)] = carrier.map_index(
            p, pj, carrier.fiber_index(pj, syl[i].fiber));
    }
  } else {
    const auto top_terms = ab_terms(top);
    for (std::size_t i = 0; i < d.length; ++i) exps[i] = top_terms[i].second;
    const int pb = base.index_of(p_bar);
    for (int p = 0; p < n; ++p) {
      const ElemId join = upper_bound(base, std::array<ElemId, 2>{
                                                base.elements()[p], p_bar});
      const int pj = base.index_of(join);
      const auto join_terms = ab_terms(g.at(join));
      if (join_terms.size() != d.length)
        throw error(errc::incoherent,
                    "support profile not stabilized at '" + join + "'");
      // The support above the stabilization point maps one-to-one onto the
      // support at it, preserving coefficients; locate each term's source.
      std::vector<bool> used(join_terms.size(), false);
      for (std::size_t i = 0; i < d.length; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < join_terms.size() && !found; ++j) {
          if (used[j]) continue;
          const int fj = carrier.fiber_index(pj, join_terms[j].first);
          if (carrier.fiber_names(pb)[carrier.map_index(pb, pj, fj)] ==
                  top_terms[i].first &&
              join_terms[j].second == top_terms[i].second) {
            values[i][static_cast<std::size_t>(p)] =
                carrier.map_index(p, pj, fj);
            used[j] = true;
            found = true;
          }
        }
        if (!found)
          throw error(errc::incoherent,
                      "support at '" + join + "' does not project onto '" +
                          p_bar + "'");
      }
    }
  }

  d.terms.reserve(d.length);
  for (std::size_t i = 0; i < d.length; ++i)
    d.terms.push_back({Thread::dense(std::move(values[i])), exps[i]});

  // The round trip is part of the contract; fail loudly rather than emit a
  // decomposition that does not multiply back.
  const LimitElement back = recompose(g.system_ptr(), d);
  if (!(back == g))
    throw error(errc::incoherent, "decomposition does not recompose");
  return d;
}

Decomposition decompose_lazy(const LimitElement& g, std::size_t window,
                             std::size_t budget) {
  const GroupSystem& sys = g.system();
  const InverseSystem& carrier = *sys.carrier;
  const DirectedSet& base = carrier.base();
  const StabilizationPoint stab = stabilization_point(g, window, budget);
  const GroupValue top = g.at(stab.point);

  Decomposition d;
  d.stabilizer = stab.point;
  d.length = gv_length(top);

  std::vector<std::map<ElemId, FiberId>> values(d.length);
  std::vector<std::int64_t> exps(d.length);

  std::vector<std::pair<FiberId, std::int64_t>> top_terms;
  if (sys.variant == Variant::free_group) {
    for (const Syllable& s : std::get<Word>(top).syllables())
      top_terms.push_back({s.fiber, s.exp});
  } else {
    top_terms = ab_terms(top);
  }
  for (std::size_t i = 0; i < d.length; ++i) exps[i] = top_terms[i].second;

  // Cover every loaded point; the join of a point with the stabilization
  // point carries the stabilized data.
  for (const ElemId& p : base.elements()) {
    const ElemId join = upper_bound(base, std::array<ElemId, 2>{p, stab.point});
    const GroupValue at_join = g.at(join);
    if (gv_length(at_join) != d.length)
      throw error(errc::unstable, "length profile changes again at '" + join +
                                      "' past the stabilization guess");
    if (sys.variant == Variant::free_group) {
      const auto& syl = std::get<Word>(at_join).syllables();
      for (std::size_t i = 0; i < d.length; ++i)
        values[i][p] = carrier.map_fiber(p, join, syl[i].fiber);
    } else {
      const auto join_terms = ab_terms(at_join);
      std::vector<bool> used(join_terms.size(), false);
      for (std::size_t i = 0; i < d.length; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < join_terms.size() && !found; ++j) {
          if (used[j]) continue;
          if (carrier.map_fiber(stab.point, join, join_terms[j].first) ==
                  top_terms[i].first &&
              join_terms[j].second == top_terms[i].second) {
            values[i][p] = carrier.map_fiber(p, join, join_terms[j].first);
            used[j] = true;
            found = true;
          }
        }
        if (!found)
          throw error(errc::incoherent, "support at '" + join +
                                            "' does not project onto '" +
                                            stab.point + "'");
      }
    }
  }

  d.terms.reserve(d.length);
  for (std::size_t i = 0; i < d.length; ++i)
    d.terms.push_back({Thread::sparse(std::move(values[i])), exps[i]});

  // Verify the round trip at every loaded point.
  for (const ElemId& p : base.elements()) {
    GroupValue acc = gv_identity(sys.variant);
    for (const auto& term : d.terms)
      acc = gv_multiply(acc,
                        gv_generator(sys.variant,
                                     term.thread.sparse_values().at(p),
                                     term.exp));
    if (!(acc == g.at(p)))
      throw error(errc::incoherent,
                  "decomposition does not recompose at '" + p + "'");
  }
  return d;
}

}  // namespace

Decomposition decompose(const LimitElement& g, std::size_t window,
                        std::size_t budget) {
  if (g.lazy()) return decompose_lazy(g, window, budget);
  return decompose_eager(g);
}

LimitElement recompose(std::shared_ptr<const GroupSystem> sys,
                       const Decomposition& d) {
  if (!sys) throw error(errc::input_error, "no system");
  const InverseSystem& carrier = *sys->carrier;
  if (!carrier.is_finite() || carrier.rule_backed())
    throw error(errc::symbolic_unsupported,
                "recompose needs a finite system");
  const DirectedSet& base = carrier.base();
  const int n = static_cast<int>(base.size());
  std::vector<GroupValue> values(static_cast<std::size_t>(n),
                                 gv_identity(sys->variant));
  for (const auto& term : d.terms) {
    if (term.exp == 0)
      throw error(errc::input_error, "zero exponent in decomposition");
    if (!term.thread.is_dense() ||
        term.thread.dense_values().size() != static_cast<std::size_t>(n))
      throw error(errc::input_error, "term thread does not cover the base");
    for (int p = 0; p < n; ++p)
      values[p] = gv_multiply(
          values[p],
          gv_generator(sys->variant,
                       carrier.fiber_names(p)[term.thread.at(p)], term.exp));
  }
  return limit_element_eager(std::move(sys), std::move(values));
}

ElemId freeness_certificate(const GroupSystem& sys,
                            const std::vector<Decomposition::Term>& word) {
  const InverseSystem& carrier = *sys.carrier;
  const DirectedSet& base = carrier.base();
  if (word.empty()) throw error(errc::input_error, "empty basis word");
  for (const auto& term : word) {
    if (term.exp == 0) throw error(errc::input_error, "zero exponent");
    if (!term.thread.is_dense())
      throw error(errc::input_error, "certificate needs dense threads");
  }

  auto separator = [&](const Thread& a, const Thread& b) -> ElemId {
    for (std::size_t p = 0; p < base.size(); ++p)
      if (a.at(static_cast<int>(p)) != b.at(static_cast<int>(p)))
        return base.elements()[p];
    throw error(errc::not_separable, "two listed threads coincide");
  };

  std::vector<ElemId> separators;
  if (sys.variant == Variant::free_group) {
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
      separators.push_back(separator(word[i].thread, word[i + 1].thread));
  } else {
    for (std::size_t i = 0; i < word.size(); ++i)
      for (std::size_t j = i + 1; j < word.size(); ++j)
        separators.push_back(separator(word[i].thread, word[j].thread));
  }

  const ElemId witness = separators.empty()
                             ? base.elements().front()
                             : upper_bound(base, separators);

  // At the witness the evaluated word is visibly non-identity; anything else
  // would falsify the construction.
  const int w = base.index_of(witness);
  GroupValue acc = gv_identity(sys.variant);
  for (const auto& term : word)
    acc = gv_multiply(
        acc, gv_generator(sys.variant,
                          carrier.fiber_names(w)[term.thread.at(w)],
                          term.exp));
  if (gv_is_identity(acc))
    throw std::logic_error("freeness witness evaluated to the identity");
  return witness;
}

}  // namespace invlim
