#include "invlim/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace invlim::io {

namespace {

constexpr std::int64_t kMaxSymbolicPrefix = 512;

const json& need(const json& j, const char* key, const std::string& what) {
  if (!j.is_object())
    throw error(errc::input_error, what + " must be an object");
  auto it = j.find(key);
  if (it == j.end())
    throw error(errc::input_error, what + " lacks \"" + key + "\"");
  return *it;
}

std::string need_string(const json& j, const char* key,
                        const std::string& what) {
  const json& v = need(j, key, what);
  if (!v.is_string())
    throw error(errc::input_error,
                what + " field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::int64_t need_int(const json& j, const char* key, const std::string& what) {
  const json& v = need(j, key, what);
  if (!v.is_number_integer())
    throw error(errc::input_error,
                what + " field \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::vector<std::string> string_list(const json& v, const std::string& what) {
  if (!v.is_array())
    throw error(errc::input_error, what + " must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_string())
      throw error(errc::input_error, what + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// "s<k>" with k a decimal index; the symbolic chain answers for every such
// name, loaded or not.
std::int64_t symbolic_chain_rank(const ElemId& e) {
  if (e.size() < 2 || e[0] != 's')
    throw error(errc::input_error,
                "'" + e + "' is not a point of the symbolic chain");
  std::int64_t value = 0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i] < '0' || e[i] > '9' || value > (INT64_MAX - 9) / 10)
      throw error(errc::input_error,
                  "'" + e + "' is not a point of the symbolic chain");
    value = value * 10 + (e[i] - '0');
  }
  return value;
}

DirectedSet symbolic_chain(std::int64_t prefix) {
  if (prefix < 1 || prefix > kMaxSymbolicPrefix)
    throw error(errc::size_limit, "symbolic chain prefix must be in [1," +
                                      std::to_string(kMaxSymbolicPrefix) + "]");
  std::vector<ElemId> probe;
  probe.reserve(static_cast<std::size_t>(prefix));
  for (std::int64_t i = 0; i < prefix; ++i)
    probe.push_back("s" + std::to_string(i));
  auto leq = [](const ElemId& a, const ElemId& b) {
    return symbolic_chain_rank(a) <= symbolic_chain_rank(b);
  };
  auto bound = [](std::span<const ElemId> s) -> std::optional<ElemId> {
    std::int64_t top = 0;
    for (const ElemId& e : s) top = std::max(top, symbolic_chain_rank(e));
    return "s" + std::to_string(top);
  };
  return DirectedSet::symbolic(std::move(probe), leq, bound);
}

// Map keys name a comparable pair as "<lower><<upper>".
std::pair<std::string, std::string> split_pair_key(const std::string& key) {
  const std::size_t sep = key.find('<');
  if (sep == std::string::npos || sep == 0 || sep + 1 == key.size() ||
      key.find('<', sep + 1) != std::string::npos)
    throw error(errc::input_error,
                "map key '" + key + "' is not of the form p<q");
  return {key.substr(0, sep), key.substr(sep + 1)};
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw error(errc::input_error, "cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(errc::input_error,
                "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

DirectedSet poset_from_json(const json& j) {
  const std::string kind = need_string(j, "kind", "poset description");
  if (kind == "finite") {
    std::vector<ElemId> elements =
        string_list(need(j, "elements", "poset description"), "\"elements\"");
    std::vector<std::pair<ElemId, ElemId>> pairs;
    if (auto it = j.find("leq"); it != j.end()) {
      if (!it->is_array())
        throw error(errc::input_error, "\"leq\" must be an array of pairs");
      for (const json& p : *it) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() ||
            !p[1].is_string())
          throw error(errc::input_error,
                      "\"leq\" entries must be [lower, upper] string pairs");
        pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
      }
    }
    DirectedSet d = DirectedSet::from_pairs(std::move(elements), pairs);
    if (auto witness = undirected_witness(d))
      throw error(errc::not_directed, "no upper bound for {" + witness->first +
                                          ", " + witness->second + "}");
    return d;
  }
  if (kind == "builtin") {
    const std::string name = need_string(j, "name", "builtin poset");
    const std::int64_t param = need_int(j, "param", "builtin poset");
    if (name == "powerset") {
      if (param < 0 || param > 16)
        throw error(errc::size_limit, "powerset ground size must be in [0,16]");
      return DirectedSet::powerset(static_cast<int>(param));
    }
    if (name == "chain") return DirectedSet::chain(param);
    if (name == "symbolic-chain") return symbolic_chain(param);
    throw error(errc::input_error, "unknown builtin poset '" + name + "'");
  }
  throw error(errc::input_error, "unknown poset kind '" + kind + "'");
}

DirectedSet load_poset(const std::filesystem::path& path) {
  return poset_from_json(read_json_file(path));
}

json poset_to_json(const DirectedSet& d) {
  if (d.kind() != DirectedSet::Kind::finite)
    throw error(errc::symbolic_unsupported,
                "symbolic posets are oracle-backed and cannot be dumped");
  json out;
  out["kind"] = "finite";
  out["elements"] = d.elements();
  json pairs = json::array();
  const int n = static_cast<int>(d.size());
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q && d.leq(p, q))
        pairs.push_back({d.elements()[p], d.elements()[q]});
  out["leq"] = std::move(pairs);
  return out;
}

InverseSystem system_from_json(const json& j) {
  DirectedSet base = poset_from_json(need(j, "poset", "system file"));

  const json& jf = need(j, "fibers", "system file");
  if (!jf.is_object())
    throw error(errc::input_error, "\"fibers\" must be an object");
  std::vector<std::vector<FiberId>> fibers(base.size());
  for (const auto& [name, list] : jf.items()) {
    auto idx = base.find(name);
    if (!idx)
      throw error(errc::input_error,
                  "fiber list over unknown point '" + name + "'");
    fibers[static_cast<std::size_t>(*idx)] =
        string_list(list, "fiber list over '" + name + "'");
  }
  for (std::size_t e = 0; e < base.size(); ++e)
    if (fibers[e].empty() && !jf.contains(base.elements()[e]))
      throw error(errc::empty_fiber,
                  "no fiber list over '" + base.elements()[e] + "'");

  std::vector<CoveringMap> covering;
  if (auto it = j.find("maps"); it != j.end()) {
    if (!it->is_object())
      throw error(errc::input_error, "\"maps\" must be an object");
    for (const auto& [key, images] : it->items()) {
      auto [lower, upper] = split_pair_key(key);
      if (!images.is_object())
        throw error(errc::input_error,
                    "map '" + key + "' must be an object of images");
      CoveringMap cm;
      cm.lower = std::move(lower);
      cm.upper = std::move(upper);
      for (const auto& [from, to] : images.items()) {
        if (!to.is_string())
          throw error(errc::input_error,
                      "map '" + key + "' images must be strings");
        cm.images[from] = to.get<std::string>();
      }
      covering.push_back(std::move(cm));
    }
  }
  return InverseSystem::from_covering(std::move(base), std::move(fibers),
                                      covering);
}

InverseSystem load_system(const std::filesystem::path& path) {
  return system_from_json(read_json_file(path));
}

json system_to_json(const InverseSystem& sys) {
  json out;
  out["poset"] = poset_to_json(sys.base());
  json fibers = json::object();
  const int n = static_cast<int>(sys.base().size());
  for (int e = 0; e < n; ++e)
    fibers[sys.base().elements()[e]] = sys.fiber_names(e);
  out["fibers"] = std::move(fibers);
  json maps = json::object();
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) {
      if (p == q || !sys.base().leq(p, q)) continue;
      json images = json::object();
      for (int a = 0; a < sys.fiber_count(q); ++a)
        images[sys.fiber_names(q)[a]] =
            sys.fiber_names(p)[sys.map_index(p, q, a)];
      maps[sys.base().elements()[p] + "<" + sys.base().elements()[q]] =
          std::move(images);
    }
  out["maps"] = std::move(maps);
  return out;
}

Tree tree_from_json(const json& j) {
  std::vector<std::string> nodes =
      string_list(need(j, "nodes", "tree file"), "\"nodes\"");
  const json& jp = need(j, "parent", "tree file");
  if (!jp.is_object())
    throw error(errc::input_error, "\"parent\" must be an object");
  std::unordered_map<std::string, std::string> parent;
  for (const auto& [child, p] : jp.items()) {
    if (!p.is_string())
      throw error(errc::input_error, "parent of '" + child +
                                         "' must be a string");
    parent[child] = p.get<std::string>();
  }
  return Tree::from_parent_map(std::move(nodes), parent);
}

Tree load_tree(const std::filesystem::path& path) {
  return tree_from_json(read_json_file(path));
}

namespace {

CayleyGroup group_from_json(const json& j, const std::string& where) {
  CayleyGroup g;
  g.names = string_list(need(j, "elements", "group at '" + where + "'"),
                        "group element list");
  const json& jm = need(j, "mul", "group at '" + where + "'");
  if (!jm.is_array())
    throw error(errc::input_error,
                "\"mul\" at '" + where + "' must be an array of rows");
  for (const json& row : jm) {
    if (!row.is_array())
      throw error(errc::input_error,
                  "\"mul\" rows at '" + where + "' must be arrays");
    std::vector<int> r;
    r.reserve(row.size());
    for (const json& v : row) {
      if (!v.is_number_integer())
        throw error(errc::input_error,
                    "\"mul\" entries at '" + where + "' must be integers");
      r.push_back(v.get<int>());
    }
    g.mul.push_back(std::move(r));
  }
  g.identity = static_cast<int>(need_int(j, "id", "group at '" + where + "'"));
  return g;
}

}  // namespace

FiniteGroupSystem group_system_from_json(const json& j) {
  DirectedSet base = poset_from_json(need(j, "poset", "group system file"));
  if (base.kind() != DirectedSet::Kind::finite)
    throw error(errc::symbolic_unsupported,
                "group systems need a finite base");

  const json& jg = need(j, "groups", "group system file");
  if (!jg.is_object())
    throw error(errc::input_error, "\"groups\" must be an object");
  std::vector<CayleyGroup> groups(base.size());
  std::vector<bool> seen(base.size(), false);
  for (const auto& [name, body] : jg.items()) {
    auto idx = base.find(name);
    if (!idx)
      throw error(errc::input_error, "group over unknown point '" + name + "'");
    groups[static_cast<std::size_t>(*idx)] = group_from_json(body, name);
    seen[static_cast<std::size_t>(*idx)] = true;
  }
  for (std::size_t e = 0; e < base.size(); ++e)
    if (!seen[e])
      throw error(errc::input_error,
                  "no group over '" + base.elements()[e] + "'");

  std::vector<CoveringHom> covering;
  if (auto it = j.find("homs"); it != j.end()) {
    if (!it->is_object())
      throw error(errc::input_error, "\"homs\" must be an object");
    for (const auto& [key, images] : it->items()) {
      auto [lower, upper] = split_pair_key(key);
      if (!images.is_array())
        throw error(errc::input_error,
                    "hom '" + key + "' must be an array of indices");
      CoveringHom ch;
      ch.lower = std::move(lower);
      ch.upper = std::move(upper);
      for (const json& v : images) {
        if (!v.is_number_integer())
          throw error(errc::input_error,
                      "hom '" + key + "' entries must be integers");
        ch.images.push_back(v.get<int>());
      }
      covering.push_back(std::move(ch));
    }
  }
  return group_system_from_covering(std::move(base), std::move(groups),
                                    covering);
}

FiniteGroupSystem load_group_system(const std::filesystem::path& path) {
  return group_system_from_json(read_json_file(path));
}

LoadedElement element_from_json(const json& j,
                                const std::filesystem::path& base_dir) {
  std::filesystem::path system_path(need_string(j, "system", "element file"));
  if (system_path.is_relative()) system_path = base_dir / system_path;
  InverseSystem carrier = system_from_json(read_json_file(system_path));
  if (carrier.base().kind() != DirectedSet::Kind::finite)
    throw error(errc::symbolic_unsupported,
                "element files hold one value per point of a finite base");
  const Variant variant =
      variant_from_name(need_string(j, "variant", "element file"));
  auto sys = induced_system(
      std::make_shared<const InverseSystem>(std::move(carrier)), variant);

  const json& jw = need(j, "words", "element file");
  if (!jw.is_object())
    throw error(errc::input_error, "\"words\" must be an object");
  const DirectedSet& base = sys->carrier->base();
  std::vector<GroupValue> values;
  values.reserve(base.size());
  for (const ElemId& e : base.elements()) {
    auto it = jw.find(e);
    if (it == jw.end())
      throw error(errc::input_error, "no word over '" + e + "'");
    if (!it->is_string())
      throw error(errc::input_error, "word over '" + e + "' must be a string");
    values.push_back(gv_from_literal(variant, it->get<std::string>()));
  }
  for (const auto& [name, _] : jw.items())
    if (!base.find(name))
      throw error(errc::input_error, "word over unknown point '" + name + "'");

  LimitElement element = limit_element_eager(sys, std::move(values));
  return LoadedElement{std::move(sys), std::move(element),
                       std::move(system_path)};
}

LoadedElement load_element(const std::filesystem::path& path) {
  return element_from_json(read_json_file(path), path.parent_path());
}

const char* input_kind_name(InputKind k) {
  switch (k) {
    case InputKind::poset: return "poset";
    case InputKind::system: return "system";
    case InputKind::tree: return "tree";
    case InputKind::group_system: return "group-system";
    case InputKind::element: return "element";
  }
  return "unknown";
}

InputKind classify(const json& j) {
  if (!j.is_object())
    throw error(errc::input_error, "input file must be a JSON object");
  if (j.contains("kind")) return InputKind::poset;
  if (j.contains("nodes")) return InputKind::tree;
  if (j.contains("groups")) return InputKind::group_system;
  if (j.contains("fibers")) return InputKind::system;
  if (j.contains("words")) return InputKind::element;
  throw error(errc::input_error, "input file matches no known shape");
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw error(errc::input_error, "cannot read '" + path.string() + "'");
  std::uint64_t hash = 14695981039346656037ull;
  char c = 0;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << hash;
  return out.str();
}

json thread_to_json(const InverseSystem& sys, const Thread& t) {
  json out = json::object();
  if (t.is_dense()) {
    for (std::size_t e = 0; e < sys.base().size(); ++e)
      out[sys.base().elements()[e]] =
          sys.fiber_names(static_cast<int>(e))[t.at(static_cast<int>(e))];
  } else {
    for (const auto& [elem, fiber] : t.sparse_values()) out[elem] = fiber;
  }
  return out;
}

json decomposition_to_json(const InverseSystem& sys, const Decomposition& d) {
  json out;
  out["stabilizer"] = d.stabilizer;
  out["length"] = d.length;
  json terms = json::array();
  for (const Decomposition::Term& t : d.terms)
    terms.push_back(
        {{"thread", thread_to_json(sys, t.thread)}, {"exp", t.exp}});
  out["terms"] = std::move(terms);
  return out;
}

}  // namespace invlim::io
