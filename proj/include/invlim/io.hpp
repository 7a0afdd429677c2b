#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "invlim/grouplimit.hpp"
#include "invlim/invsys.hpp"
#include "invlim/model.hpp"
#include "invlim/poset.hpp"
#include "invlim/tree.hpp"

namespace invlim::io {

using json = nlohmann::json;

// Parses the file as JSON; InputError on missing files or parse failures.
json read_json_file(const std::filesystem::path& path);

// {"kind":"finite","elements":[...],"leq":[["p","q"],...]} or
// {"kind":"builtin","name":"powerset"|"chain"|"symbolic-chain","param":n}.
// Finite descriptions are rejected unless directed; the symbolic-chain
// builtin loads the first n points of an unbounded chain s0 < s1 < ... with
// order and bound oracles that answer for every sk.
DirectedSet poset_from_json(const json& j);
DirectedSet load_poset(const std::filesystem::path& path);
json poset_to_json(const DirectedSet& d);

// {"poset":<description>,"fibers":{"p":["a",...]},"maps":{"p<q":{"a":"c"}}}
// with map keys covering a generating set of the order.
InverseSystem system_from_json(const json& j);
InverseSystem load_system(const std::filesystem::path& path);
// Self-contained dump: explicit poset, every off-diagonal comparable pair.
json system_to_json(const InverseSystem& sys);

// {"nodes":[...],"parent":{"child":"parent",...}}
Tree tree_from_json(const json& j);
Tree load_tree(const std::filesystem::path& path);

// {"poset":...,"groups":{"p":{"elements":[...],"mul":[[...]],"id":0}},
//  "homs":{"p<q":[...]}} with homs as index maps on the upper group.
FiniteGroupSystem group_system_from_json(const json& j);
FiniteGroupSystem load_group_system(const std::filesystem::path& path);

struct LoadedElement {
  std::shared_ptr<const GroupSystem> system;
  LimitElement element;
  std::filesystem::path system_path;
};

// {"system":<path>,"variant":"free"|"abelian","words":{"p":"a^2.b^-1",...}}
// with the system path resolved against base_dir (the element file's
// directory for load_element).
LoadedElement element_from_json(const json& j,
                                const std::filesystem::path& base_dir);
LoadedElement load_element(const std::filesystem::path& path);

enum class InputKind { poset, system, tree, group_system, element };
const char* input_kind_name(InputKind k);
// Shape-based classification of a parsed input file.
InputKind classify(const json& j);

// 64-bit FNV-1a over the raw bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

json thread_to_json(const InverseSystem& sys, const Thread& t);
json decomposition_to_json(const InverseSystem& sys, const Decomposition& d);

}  // namespace invlim::io
