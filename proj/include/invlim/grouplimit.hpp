#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "invlim/invsys.hpp"
#include "invlim/words.hpp"

namespace invlim {

enum class Variant { free_group, abelian };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Value of one fiber group: a reduced word (free) or a finite-support
// vector (abelian). The active alternative matches the system's variant.
using GroupValue = std::variant<Word, AbelianVector>;

GroupValue gv_identity(Variant v);
GroupValue gv_generator(Variant v, const FiberId& fiber, std::int64_t exp = 1);
GroupValue gv_multiply(const GroupValue& a, const GroupValue& b);
GroupValue gv_inverse(const GroupValue& a);
GroupValue gv_map(const GroupValue& a, const FiberMap& f);
std::size_t gv_length(const GroupValue& a);
bool gv_is_identity(const GroupValue& a);
GroupValue gv_from_literal(Variant v, const std::string& text);
std::string gv_to_literal(const GroupValue& a);

// Fiber groups induced over an inverse system: the free or free-abelian
// group on each fiber, connected by the generator maps of the system.
struct GroupSystem {
  std::shared_ptr<const InverseSystem> carrier;
  Variant variant = Variant::free_group;
};

std::shared_ptr<const GroupSystem> induced_system(
    std::shared_ptr<const InverseSystem> carrier, Variant variant);

// The generator relabelling of a connecting map, as a FiberMap.
FiberMap connecting_fiber_map(const GroupSystem& sys, const ElemId& lower,
                              const ElemId& upper);

// A limit element: one fiber-group value per base point, coherent under the
// connecting maps. Eager elements hold every value and are checked
// exhaustively at construction; lazy elements evaluate on demand over a
// symbolic base and check each newly probed comparable pair immediately.
class LimitElement {
 public:
  const GroupSystem& system() const { return *sys_; }
  std::shared_ptr<const GroupSystem> system_ptr() const { return sys_; }
  bool lazy() const { return static_cast<bool>(lazy_); }

  GroupValue at(const ElemId& p) const;
  GroupValue at_index(int elem) const;  // eager only

  friend bool operator==(const LimitElement& a, const LimitElement& b);

 private:
  friend LimitElement limit_element_eager(std::shared_ptr<const GroupSystem>,
                                          std::vector<GroupValue>);
  friend LimitElement limit_element_lazy(
      std::shared_ptr<const GroupSystem>,
      std::function<GroupValue(const ElemId&)>);

  struct LazyCore {
    std::function<GroupValue(const ElemId&)> eval;
    mutable std::mutex guard;
    mutable std::map<ElemId, GroupValue> cache;
  };

  std::shared_ptr<const GroupSystem> sys_;
  std::shared_ptr<const std::vector<GroupValue>> eager_;
  std::shared_ptr<LazyCore> lazy_;
};

// Values indexed by base load order; checks every comparable pair.
LimitElement limit_element_eager(std::shared_ptr<const GroupSystem> sys,
                                 std::vector<GroupValue> values);
LimitElement limit_element_lazy(std::shared_ptr<const GroupSystem> sys,
                                std::function<GroupValue(const ElemId&)> eval);

// The coherent family of single generators along a thread.
LimitElement basis_element(std::shared_ptr<const GroupSystem> sys,
                           const Thread& t);

LimitElement multiply_limit(const LimitElement& a, const LimitElement& b);
LimitElement invert_limit(const LimitElement& a);

struct StabilizationPoint {
  ElemId point;
  std::size_t length = 0;
  std::size_t probes = 0;
};

// Point past which the length profile of g stops changing. Finite bases
// answer at the maximum; lazy elements walk the probe chain until `window`
// consecutive probes agree, giving up past `budget` probes.
StabilizationPoint stabilization_point(const LimitElement& g,
                                       std::size_t window = 3,
                                       std::size_t budget = 64);

// g written as a product/sum of basis elements: threads obtained by pushing
// the stabilized syllable data down from an upper bound, exponents read at
// the stabilization point.
struct Decomposition {
  struct Term {
    Thread thread;
    std::int64_t exp = 0;

    friend bool operator==(const Term&, const Term&) = default;
  };

  std::vector<Term> terms;
  ElemId stabilizer;
  std::size_t length = 0;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

Decomposition decompose(const LimitElement& g, std::size_t window = 3,
                        std::size_t budget = 64);
LimitElement recompose(std::shared_ptr<const GroupSystem> sys,
                       const Decomposition& d);

// A base point at which the given basis word evaluates without collapse:
// adjacent (free) or all (abelian) threads are separated below it, so the
// evaluated value is visibly non-identity there.
ElemId freeness_certificate(const GroupSystem& sys,
                            const std::vector<Decomposition::Term>& word);

}  // namespace invlim
