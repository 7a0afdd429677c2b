#include "invlim/words.hpp"

#include <cctype>
#include <sstream>

namespace invlim {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out))
    throw error(errc::exponent_overflow,
                "exponent sum " + std::to_string(a) + " + " + std::to_string(b) +
                    " leaves the representable range");
  return out;
}

void validate_label(const std::string& label) {
  if (label.empty()) throw error(errc::input_error, "empty label");
  for (char c : label) {
    if (c == '.' || c == '^' || c == '<' || c == ':' || c == ',' || c == '{' ||
        c == '}' || std::isspace(static_cast<unsigned char>(c)))
      throw error(errc::input_error,
                  "label '" + label + "' contains a reserved character");
  }
}

Word::Word(std::span<const Syllable> raw) {
  // Stack pass: merging a syllable into its left neighbour and dropping the
  // neighbour when the sum vanishes reaches the joint fixpoint of all single
  // merge/drop steps.
  for (const Syllable& s : raw) {
    if (s.exp == 0) continue;
    if (!syllables_.empty() && syllables_.back().fiber == s.fiber) {
      syllables_.back().exp = checked_add(syllables_.back().exp, s.exp);
      if (syllables_.back().exp == 0) syllables_.pop_back();
    } else {
      syllables_.push_back(s);
    }
  }
}

Word reduce(std::span<const Syllable> raw) { return Word(raw); }

Word multiply(const Word& u, const Word& v) {
  std::vector<Syllable> raw;
  raw.reserve(u.syllables().size() + v.syllables().size());
  raw.insert(raw.end(), u.syllables().begin(), u.syllables().end());
  raw.insert(raw.end(), v.syllables().begin(), v.syllables().end());
  return Word(raw);
}

Word invert(const Word& w) {
  std::vector<Syllable> raw;
  raw.reserve(w.syllables().size());
  for (auto it = w.syllables().rbegin(); it != w.syllables().rend(); ++it) {
    if (it->exp == INT64_MIN)
      throw error(errc::exponent_overflow, "exponent negation overflows");
    raw.push_back({it->fiber, -it->exp});
  }
  return Word(raw);
}

std::size_t syllable_length(const Word& w) { return w.syllables().size(); }

Word map_generators(const Word& w, const FiberMap& f) {
  std::vector<Syllable> raw;
  raw.reserve(w.syllables().size());
  for (const Syllable& s : w.syllables()) {
    std::optional<FiberId> image = f(s.fiber);
    if (!image)
      throw error(errc::unmapped_fiber, "no image for generator '" + s.fiber + "'");
    raw.push_back({*image, s.exp});
  }
  return Word(raw);
}

namespace {

std::int64_t parse_int64(const std::string& text) {
  if (text.empty()) throw error(errc::input_error, "empty integer literal");
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw error(errc::input_error, "bad integer literal '" + text + "'");
  }
  if (pos != text.size())
    throw error(errc::input_error, "bad integer literal '" + text + "'");
  return value;
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

Word word_from_literal(const std::string& text) {
  std::string body = strip(text);
  if (body.empty()) return Word();
  std::vector<Syllable> raw;
  for (const std::string& tok : split(body, '.')) {
    std::string t = strip(tok);
    std::size_t caret = t.find('^');
    std::string label = t.substr(0, caret);
    validate_label(label);
    std::int64_t exp = 1;
    if (caret != std::string::npos) exp = parse_int64(t.substr(caret + 1));
    raw.push_back({label, exp});
  }
  return Word(raw);
}

std::string word_to_literal(const Word& w) {
  std::ostringstream out;
  bool first = true;
  for (const Syllable& s : w.syllables()) {
    if (!first) out << '.';
    first = false;
    out << s.fiber;
    if (s.exp != 1) out << '^' << s.exp;
  }
  return out.str();
}

AbelianVector::AbelianVector(std::map<FiberId, std::int64_t> entries)
    : entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();)
    it = it->second == 0 ? entries_.erase(it) : std::next(it);
}

AbelianVector ab_add(const AbelianVector& u, const AbelianVector& v) {
  std::map<FiberId, std::int64_t> sum = u.entries();
  for (const auto& [fiber, coeff] : v.entries()) {
    auto [it, inserted] = sum.emplace(fiber, coeff);
    if (!inserted) it->second = checked_add(it->second, coeff);
  }
  return AbelianVector(std::move(sum));
}

AbelianVector ab_negate(const AbelianVector& u) {
  std::map<FiberId, std::int64_t> out;
  for (const auto& [fiber, coeff] : u.entries()) {
    if (coeff == INT64_MIN)
      throw error(errc::exponent_overflow, "coefficient negation overflows");
    out.emplace(fiber, -coeff);
  }
  return AbelianVector(std::move(out));
}

AbelianVector ab_map_generators(const AbelianVector& u, const FiberMap& f) {
  AbelianVector out;
  for (const auto& [fiber, coeff] : u.entries()) {
    std::optional<FiberId> image = f(fiber);
    if (!image)
      throw error(errc::unmapped_fiber, "no image for generator '" + fiber + "'");
    out = ab_add(out, AbelianVector({{*image, coeff}}));
  }
  return out;
}

std::size_t support_size(const AbelianVector& u) { return u.entries().size(); }

AbelianVector abelian_from_literal(const std::string& text) {
  std::string body = strip(text);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}')
    throw error(errc::input_error, "abelian literal must be brace-delimited");
  body = strip(body.substr(1, body.size() - 2));
  if (body.empty()) return AbelianVector();
  std::map<FiberId, std::int64_t> entries;
  for (const std::string& tok : split(body, ',')) {
    std::string t = strip(tok);
    std::size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw error(errc::input_error, "abelian entry '" + t + "' lacks ':'");
    std::string label = strip(t.substr(0, colon));
    validate_label(label);
    std::int64_t coeff = parse_int64(strip(t.substr(colon + 1)));
    auto [it, inserted] = entries.emplace(label, coeff);
    if (!inserted)
      throw error(errc::input_error, "duplicate abelian entry '" + label + "'");
  }
  return AbelianVector(std::move(entries));
}

std::string abelian_to_literal(const AbelianVector& u) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [fiber, coeff] : u.entries()) {
    if (!first) out << ',';
    first = false;
    out << fiber << ':' << coeff;
  }
  out << '}';
  return out.str();
}

}  // namespace invlim
