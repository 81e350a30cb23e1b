#include "isgqd/spec_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "isgqd/error.hpp"

namespace isgqd {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kSpecInvalid, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

std::size_t count(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    invalid(where + ": \"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array of labels");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) invalid(where + ": labels must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::vector<Index>> index_table(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) invalid(where + ": expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Index>> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) invalid(where + ": every row needs " + std::to_string(n) + " entries");
    std::vector<Index> r;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() >= n) {
        invalid(where + ": entries must be indices below " + std::to_string(n));
      }
      r.push_back(v.get<Index>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

Perm perm(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an image list");
  Perm p;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) invalid(where + ": images must be non-negative integers");
    p.push_back(v.get<std::uint32_t>());
  }
  if (!is_permutation(p)) invalid(where + ": not a permutation");
  return p;
}

Index element_ref(const json& j, const std::vector<std::string>& labels, const std::string& where) {
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= labels.size()) invalid(where + ": index out of range");
    return static_cast<Index>(v);
  }
  if (j.is_string()) {
    const auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
    if (it == labels.end()) invalid(where + ": unknown label " + j.get<std::string>());
    return static_cast<Index>(it - labels.begin());
  }
  invalid(where + ": expected an index or a label");
}

InverseSemigroup table_spec(const json& j) {
  const auto labels = string_list(field(j, "elements", "table"), "table.elements");
  const auto mul = index_table(field(j, "mul", "table"), labels.size(), "table.mul");
  const Index zero = element_ref(field(j, "zero", "table"), labels, "table.zero");
  return InverseSemigroup::from_table(labels, mul, zero);
}

InverseSemigroup partial_bijection_spec(const json& j) {
  const std::size_t degree = count(j, "degree", "partial_bijections");
  const json& gens = field(j, "generators", "partial_bijections");
  if (!gens.is_array()) invalid("partial_bijections.generators: expected an array");
  std::vector<PartialPerm> maps;
  for (const auto& g : gens) {
    // 1-based images, 0 for points outside the domain.
    if (!g.is_array() || g.size() != degree) {
      invalid("partial_bijections.generators: every map needs " + std::to_string(degree) + " images");
    }
    PartialPerm m;
    for (const auto& v : g) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() > degree) {
        invalid("partial_bijections.generators: images must lie in 0.." + std::to_string(degree));
      }
      m.push_back(v.get<int>() - 1);
    }
    maps.push_back(std::move(m));
  }
  return partial_bijections(degree, maps);
}

InverseSemigroup clifford_spec(const json& j) {
  const json& lat = field(j, "lattice", "clifford");
  Semilattice lattice;
  lattice.labels = string_list(field(lat, "elements", "clifford.lattice"), "clifford.lattice.elements");
  lattice.meet = index_table(field(lat, "meet", "clifford.lattice"), lattice.labels.size(), "clifford.lattice.meet");
  std::vector<GroupTable> groups;
  if (j.contains("groups")) {
    const json& gs = j.at("groups");
    if (!gs.is_array() || gs.size() != lattice.labels.size()) invalid("clifford.groups: one group per lattice point");
    for (const auto& g : gs) groups.push_back(parse_group(g));
  } else {
    groups.assign(lattice.labels.size(), trivial_group());
  }
  CliffordHoms homs;
  if (j.contains("homs")) {
    if (!j.at("homs").is_array()) invalid("clifford.homs: expected an array");
    for (const auto& h : j.at("homs")) {
      const Index from = element_ref(field(h, "from", "clifford.homs"), lattice.labels, "clifford.homs.from");
      const Index to = element_ref(field(h, "to", "clifford.homs"), lattice.labels, "clifford.homs.to");
      std::vector<Index> images;
      const json& im = field(h, "images", "clifford.homs");
      if (!im.is_array()) invalid("clifford.homs.images: expected an array");
      for (const auto& v : im) {
        if (!v.is_number_integer() || v.get<long long>() < 0) invalid("clifford.homs.images: expected indices");
        images.push_back(v.get<Index>());
      }
      homs[{from, to}] = std::move(images);
    }
  }
  return clifford(lattice, groups, homs);
}

void tower_spec(const json& j, LoadedSpec& out) {
  const std::size_t radius = count(j, "radius", "tower");
  std::vector<std::pair<Perm, Perm>> levels;
  if (j.contains("search")) {
    const json& s = j.at("search");
    const auto seed = static_cast<std::uint64_t>(count(s, "seed", "tower.search"));
    const int min_radius = static_cast<int>(count(s, "min_radius", "tower.search"));
    levels = default_tower_levels(seed, min_radius).levels;
  } else {
    const json& ls = field(j, "levels", "tower");
    if (!ls.is_array() || ls.empty()) invalid("tower.levels: expected a non-empty array");
    for (const auto& l : ls) levels.emplace_back(perm(field(l, "a", "tower.levels"), "tower.levels.a"),
                                                 perm(field(l, "b", "tower.levels"), "tower.levels.b"));
  }
  out.tower = quotient_tower(levels, static_cast<int>(radius));
  std::size_t m = 0;
  if (j.contains("truncate")) {
    m = count(j, "truncate", "tower");
    if (m >= out.tower->levels.size()) invalid("tower.truncate: no such level");
  } else {
    while (m + 1 < out.tower->levels.size() && out.tower->levels[m + 1].elements) ++m;
  }
  out.truncated_at = m;
  out.semigroup.emplace(tower_truncation(*out.tower, m));
}

}  // namespace

GroupTable parse_group(const json& j) {
  const json& kind = field(j, "kind", "group");
  if (!kind.is_string()) invalid("group.kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "trivial") return trivial_group();
  if (k == "cyclic") return cyclic_group(count(j, "order", "group"));
  if (k == "integers") return integer_window(static_cast<long>(count(j, "radius", "group")));
  if (k == "permutations") {
    const json& gens = field(j, "generators", "group");
    if (!gens.is_array()) invalid("group.generators: expected an array");
    std::vector<Perm> ps;
    for (const auto& g : gens) ps.push_back(perm(g, "group.generators"));
    return group_from_permutations(ps);
  }
  if (k == "table") {
    auto labels = string_list(field(j, "elements", "group"), "group.elements");
    const auto mul = index_table(field(j, "mul", "group"), labels.size(), "group.mul");
    return group_from_table(std::move(labels), mul);
  }
  invalid("group.kind: unknown kind \"" + k + "\"");
}

LoadedSpec build_spec(const json& j) {
  if (!j.is_object()) invalid("top level: expected an object");
  if (j.contains("format_version") && j.at("format_version") != 1) invalid("format_version: only 1 is supported");
  const json& type = field(j, "type", "top level");
  if (!type.is_string()) invalid("type: expected a string");
  LoadedSpec out;
  out.type = type.get<std::string>();
  out.name = j.value("name", out.type);
  out.source = j;
  if (out.type == "table") {
    out.semigroup.emplace(table_spec(j));
  } else if (out.type == "partial_bijections") {
    out.semigroup.emplace(partial_bijection_spec(j));
  } else if (out.type == "brandt") {
    out.semigroup.emplace(brandt(parse_group(field(j, "group", "brandt")), count(j, "k", "brandt")));
  } else if (out.type == "clifford") {
    out.semigroup.emplace(clifford_spec(j));
  } else if (out.type == "symmetric_inverse") {
    out.semigroup.emplace(symmetric_inverse_monoid(count(j, "n", "symmetric_inverse")));
  } else if (out.type == "qdnotr") {
    const bool unit = j.contains("unit") ? j.at("unit").get<bool>() : true;
    out.semigroup.emplace(qdnotr_family(count(j, "k", "qdnotr"), unit));
  } else if (out.type == "tower") {
    tower_spec(j, out);
  } else {
    invalid("type: unknown type \"" + out.type + "\"");
  }
  return out;
}

LoadedSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    invalid("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column));
  }
  try {
    return build_spec(j);
  } catch (const json::exception& e) {
    invalid(std::string("wrong value type: ") + e.what());
  }
}

LoadedSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace isgqd
