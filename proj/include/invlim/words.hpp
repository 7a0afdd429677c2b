#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invlim/errors.hpp"

namespace invlim {

// Generators are labelled by fiber elements. Labels are opaque strings;
// wherever a canonical order is needed they are compared lexicographically.
using FiberId = std::string;

struct Syllable {
  FiberId fiber;
  std::int64_t exp = 0;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);

// Reduced word of a free group over fiber generators: adjacent syllables
// carry distinct fibers and no exponent is zero. The empty word is the
// identity.
class Word {
 public:
  Word() = default;
  explicit Word(std::span<const Syllable> raw);

  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Syllable> syllables_;
};

// Partial relabelling of generators; nullopt marks a label outside the
// domain and makes map_generators fail with UnmappedFiber.
using FiberMap = std::function<std::optional<FiberId>(const FiberId&)>;

Word reduce(std::span<const Syllable> raw);
Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);
std::size_t syllable_length(const Word& w);
Word map_generators(const Word& w, const FiberMap& f);

// Literal syntax: dot-separated syllables "a^2.b^-1.c"; "^1" may be omitted;
// the empty string is the identity. Labels must not contain '.', '^', '<',
// whitespace, or be empty.
Word word_from_literal(const std::string& text);
std::string word_to_literal(const Word& w);

// Free-abelian element with finite support: fiber -> nonzero coefficient,
// keyed in lexicographic label order.
class AbelianVector {
 public:
  AbelianVector() = default;
  explicit AbelianVector(std::map<FiberId, std::int64_t> entries);

  const std::map<FiberId, std::int64_t>& entries() const { return entries_; }
  bool is_identity() const { return entries_.empty(); }

  friend bool operator==(const AbelianVector&, const AbelianVector&) = default;

 private:
  std::map<FiberId, std::int64_t> entries_;
};

AbelianVector ab_add(const AbelianVector& u, const AbelianVector& v);
AbelianVector ab_negate(const AbelianVector& u);
AbelianVector ab_map_generators(const AbelianVector& u, const FiberMap& f);
std::size_t support_size(const AbelianVector& u);

// Literal syntax: "{a:2,b:-1}"; "{}" is the identity.
AbelianVector abelian_from_literal(const std::string& text);
std::string abelian_to_literal(const AbelianVector& u);

// Shared label validation for anything that ends up in literals or JSON keys.
void validate_label(const std::string& label);

}  // namespace invlim
