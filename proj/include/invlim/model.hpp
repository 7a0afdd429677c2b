#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "invlim/poset.hpp"

namespace invlim {

// Finite group as a multiplication table over named elements.
struct CayleyGroup {
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul;
  int identity = 0;

  int order() const { return static_cast<int>(names.size()); }
  int op(int a, int b) const { return mul[a][b]; }
};

// Throws NotAGroup naming the broken law.
void validate_group(const CayleyGroup& g, const std::string& where);

// Finite groups over a finite directed base with a group homomorphism for
// every comparable pair, closed under composition. Homomorphisms listed for
// a covering set of pairs are composed at load and checked exhaustively.
struct FiniteGroupSystem {
  DirectedSet base;
  std::vector<CayleyGroup> groups;  // by base load order
  // (lower, upper) index pair -> index map G_upper -> G_lower
  std::unordered_map<std::uint64_t, std::vector<int>> homs;

  const std::vector<int>& hom(int lower, int upper) const;
  static std::uint64_t pair_key(int lower, int upper);
};

struct CoveringHom {
  ElemId lower;
  ElemId upper;
  std::vector<int> images;
};

FiniteGroupSystem group_system_from_covering(
    DirectedSet base, std::vector<CayleyGroup> groups,
    const std::vector<CoveringHom>& covering);

// The relational structure carrying the system. Domain points are triples
// (base point q, group element g, tag i<2); tag 1 points are constants, tag
// 0 points form one block per base point. Relations: a unary block
// predicate per base point, the graph of each connecting homomorphism on
// tag-0 points, and the right-translation graph tying tag-0 points to tag-1
// constants.
struct Structure {
  struct Point {
    int q = 0;
    int g = 0;
    int tag = 0;
  };

  FiniteGroupSystem system;
  std::vector<Point> domain;
  // (q, g, tag) -> domain index
  int point(int q, int g, int tag) const;
  std::vector<int> block_offset;  // per base point, start of its tag-0 run

  // Relation tuples as domain indices.
  std::vector<std::vector<std::array<int, 2>>> h_pairs;   // per comparable pair key order
  std::vector<std::pair<int, int>> h_key;                 // (lower, upper) per entry
  std::vector<std::vector<std::array<int, 3>>> f_triples;  // per base point

  std::size_t domain_size() const { return domain.size(); }
};

Structure build_model(FiniteGroupSystem sys);

struct Automorphism {
  std::vector<int> perm;          // domain index -> domain index
  std::vector<int> coefficients;  // per base point: acting group element

  friend bool operator==(const Automorphism&, const Automorphism&) = default;
};

// Full two-way check of one candidate permutation.
bool is_automorphism(const Structure& m, const std::vector<int>& perm);

// Every constant-fixing relation-preserving permutation, found by generic
// backtracking over the tag-0 blocks (constants pinned, candidates kept
// inside each block by the block predicate, every relation tuple checked as
// it completes). The search never presumes the translation shape; the
// coefficients of each result are extracted and asserted afterwards. The
// first form partitions the first free block across workers; the serial
// form is the reference. Results in lexicographic permutation order.
std::vector<Automorphism> automorphisms(const Structure& m);
std::vector<Automorphism> automorphisms_serial(const Structure& m);

// Reads the acting element at each base point off sigma and asserts the
// translation shape; TranslationFormViolated on any mismatch.
std::vector<int> extract_coefficients(const Structure& m,
                                      const std::vector<int>& perm);

// The translation automorphism of a coherent family; Incoherent otherwise.
Automorphism sigma_from_limit(const Structure& m,
                              const std::vector<int>& family);

// All coherent families, by pushdown from the maximum, sorted.
std::vector<std::vector<int>> enumerate_limit_families(
    const FiniteGroupSystem& sys);

struct PhiReport {
  bool pass = false;
  std::size_t automorphism_count = 0;
  std::size_t family_count = 0;
  bool injective = false;
  bool surjective = false;
  bool homomorphic = false;
  std::string detail;
};

// Checks that coefficient extraction is a bijection onto the coherent
// families and turns composition into pointwise products.
PhiReport verify_phi_isomorphism(const FiniteGroupSystem& sys);

}  // namespace invlim
