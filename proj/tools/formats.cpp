#include "zerr/formats.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "zerr/errors.hpp"

namespace zerr::formats {
namespace {

using Json = nlohmann::ordered_json;

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Drop the "[json.exception.parse_error.N] " tag; keep "at line L, column C: ...".
    std::string message = e.what();
    if (const auto tag = message.find("] "); message.starts_with("[json") && tag != std::string::npos) {
      message.erase(0, tag + 2);
    }
    throw ParseError(message);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

[[noreturn]] void shape_error(const std::string& where, const std::string& expected) {
  throw ParseError(where + ": expected " + expected);
}

const Json& member(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) {
    shape_error(where, "an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  return *it;
}

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ParseError(where + ": unknown key \"" + key + "\"");
    }
  }
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) {
    shape_error(where, "a string");
  }
  return j.get<std::string>();
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) {
    shape_error(where, "a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<std::string> as_strings(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    shape_error(where, "an array of strings");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_string(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Ambiguity as_ambiguity(const Json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() != "infinite") {
      shape_error(where, "a positive integer or \"infinite\"");
    }
    return Ambiguity::infinite();
  }
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) {
    shape_error(where, "a positive integer or \"infinite\"");
  }
  return Ambiguity::finite(j.get<std::uint64_t>());
}

Json ambiguity_json(const Ambiguity& a) {
  return a.is_infinite() ? Json("infinite") : Json(a.value());
}

void require_valid(std::vector<std::string> violations) {
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

Channel channel_from(const Json& j, const std::string& where) {
  reject_unknown_keys(j, {"inputs", "outputs", "relation"}, where);
  Channel c;
  c.inputs = as_strings(member(j, "inputs", where), where + ".inputs");
  c.outputs = as_strings(member(j, "outputs", where), where + ".outputs");
  const auto& rel = member(j, "relation", where);
  if (!rel.is_object()) {
    shape_error(where + ".relation", "an object");
  }
  std::vector<std::string> violations;
  for (const auto& [key, _] : rel.items()) {
    if (std::find(c.inputs.begin(), c.inputs.end(), key) == c.inputs.end()) {
      violations.push_back("relation names undeclared input '" + key + "'");
    }
  }
  for (const auto& x : c.inputs) {
    auto it = rel.find(x);
    c.relation.push_back(it == rel.end() ? std::vector<std::string>{}
                                         : as_strings(*it, where + ".relation." + x));
  }
  auto more = validate_channel(c);
  violations.insert(violations.end(), more.begin(), more.end());
  require_valid(std::move(violations));
  return c;
}

Json channel_json(const Channel& c) {
  Json rel = Json::object();
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    rel[c.inputs[i]] = c.relation[i];
  }
  return Json{{"inputs", c.inputs}, {"outputs", c.outputs}, {"relation", rel}};
}

StructureSpec structure_from(const Json& j, const std::string& where) {
  StructureSpec s;
  if (j.is_object() && j.contains("threshold")) {
    reject_unknown_keys(j, {"threshold"}, where);
    const auto& th = j["threshold"];
    reject_unknown_keys(th, {"n", "t"}, where + ".threshold");
    s.n = as_count(member(th, "n", where + ".threshold"), where + ".threshold.n");
    s.t = as_count(member(th, "t", where + ".threshold"), where + ".threshold.t");
  } else {
    reject_unknown_keys(j, {"n", "sets"}, where);
    s.n = as_count(member(j, "n", where), where + ".n");
    const auto& sets = member(j, "sets", where);
    if (!sets.is_array()) {
      shape_error(where + ".sets", "an array of index arrays");
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const auto at = where + ".sets[" + std::to_string(i) + "]";
      if (!sets[i].is_array()) {
        shape_error(at, "an array of 1-based indices");
      }
      std::vector<std::size_t> set;
      for (std::size_t k = 0; k < sets[i].size(); ++k) {
        const auto idx = as_count(sets[i][k], at + "[" + std::to_string(k) + "]");
        if (idx == 0) {
          shape_error(at + "[" + std::to_string(k) + "]", "a 1-based index");
        }
        set.push_back(idx - 1);
      }
      s.sets.push_back(std::move(set));
    }
  }
  try {
    (void)s.build();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return s;
}

Json structure_json(const StructureSpec& s) {
  if (s.t) {
    return Json{{"threshold", Json{{"n", s.n}, {"t", *s.t}}}};
  }
  Json sets = Json::array();
  for (const auto& set : s.sets) {
    Json one = Json::array();
    for (auto j : set) {
      one.push_back(j + 1);
    }
    sets.push_back(one);
  }
  return Json{{"n", s.n}, {"sets", sets}};
}

}  // namespace

HonestSetStructure StructureSpec::build() const {
  if (t) {
    return threshold_structure(n, *t);
  }
  return HonestSetStructure(n, sets);
}

Channel parse_channel(const std::string& text) { return channel_from(parse_text(text), "channel"); }

std::string serialize_channel(const Channel& channel) { return dump(channel_json(channel)); }

StructureSpec parse_structure(const std::string& text) {
  return structure_from(parse_text(text), "structure");
}

std::string serialize_structure(const StructureSpec& structure) {
  return dump(structure_json(structure));
}

InstanceFile parse_instance(const std::string& text) {
  const auto j = parse_text(text);
  reject_unknown_keys(j, {"ambiguities", "structure"}, "instance");
  InstanceFile f;
  const auto& amb = member(j, "ambiguities", "instance");
  if (!amb.is_array()) {
    shape_error("instance.ambiguities", "an array");
  }
  for (std::size_t i = 0; i < amb.size(); ++i) {
    f.ambiguities.push_back(as_ambiguity(amb[i], "instance.ambiguities[" + std::to_string(i) + "]"));
  }
  if (j.contains("structure")) {
    f.structure = structure_from(j["structure"], "instance.structure");
    if (f.structure->n != f.ambiguities.size()) {
      throw ValidationError("structure covers " + std::to_string(f.structure->n) + " channels but " +
                             std::to_string(f.ambiguities.size()) + " ambiguities are given");
    }
  }
  return f;
}

std::string serialize_instance(const InstanceFile& instance) {
  Json amb = Json::array();
  for (const auto& a : instance.ambiguities) {
    amb.push_back(ambiguity_json(a));
  }
  Json j{{"ambiguities", amb}};
  if (instance.structure) {
    j["structure"] = structure_json(*instance.structure);
  }
  return dump(j);
}

NetworkFile parse_network(const std::string& text) {
  const auto j = parse_text(text);
  reject_unknown_keys(j, {"players", "sender", "receiver", "edges", "adversary"}, "network");
  NetworkFile f;
  auto& net = f.network;
  net.players = as_strings(member(j, "players", "network"), "network.players");
  net.sender = as_string(member(j, "sender", "network"), "network.sender");
  net.receiver = as_string(member(j, "receiver", "network"), "network.receiver");
  const auto& edges = member(j, "edges", "network");
  if (!edges.is_array()) {
    shape_error("network.edges", "an array");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto at = "network.edges[" + std::to_string(i) + "]";
    const auto& e = edges[i];
    reject_unknown_keys(e, {"id", "from", "to", "ambiguity", "channel"}, at);
    Edge edge{"", "", "", Ambiguity::infinite()};
    edge.id = as_string(member(e, "id", at), at + ".id");
    edge.from = as_string(member(e, "from", at), at + ".from");
    edge.to = as_string(member(e, "to", at), at + ".to");
    const bool has_amb = e.contains("ambiguity");
    if (has_amb == e.contains("channel")) {
      throw ParseError(at + ": exactly one of \"ambiguity\" and \"channel\" is required");
    }
    if (has_amb) {
      edge.label = as_ambiguity(e["ambiguity"], at + ".ambiguity");
    } else {
      edge.label = channel_from(e["channel"], at + ".channel");
    }
    net.edges.push_back(std::move(edge));
  }

  const auto& adv = member(j, "adversary", "network");
  if (adv.is_object() && adv.contains("threshold")) {
    reject_unknown_keys(adv, {"threshold"}, "network.adversary");
    f.adversary = ThresholdAdversary{as_count(adv["threshold"], "network.adversary.threshold")};
  } else {
    reject_unknown_keys(adv, {"sets"}, "network.adversary");
    const auto& sets = member(adv, "sets", "network.adversary");
    if (!sets.is_array()) {
      shape_error("network.adversary.sets", "an array of player arrays");
    }
    ExplicitAdversary ex;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      ex.sets.push_back(as_strings(sets[i], "network.adversary.sets[" + std::to_string(i) + "]"));
    }
    f.adversary = std::move(ex);
  }

  require_valid(validate_network(net));
  try {
    validate_adversary(net, f.adversary);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  return f;
}

std::string serialize_network(const NetworkFile& file) {
  const auto& net = file.network;
  Json edges = Json::array();
  for (const auto& e : net.edges) {
    Json je{{"id", e.id}, {"from", e.from}, {"to", e.to}};
    if (const auto* a = std::get_if<Ambiguity>(&e.label)) {
      je["ambiguity"] = ambiguity_json(*a);
    } else {
      je["channel"] = channel_json(std::get<Channel>(e.label));
    }
    edges.push_back(je);
  }
  Json adv;
  if (const auto* th = std::get_if<ThresholdAdversary>(&file.adversary)) {
    adv = Json{{"threshold", th->t}};
  } else {
    adv = Json{{"sets", std::get<ExplicitAdversary>(file.adversary).sets}};
  }
  return dump(Json{{"players", net.players},
                   {"sender", net.sender},
                   {"receiver", net.receiver},
                   {"edges", edges},
                   {"adversary", adv}});
}

ListCode parse_list_code(const std::string& text) {
  const auto j = parse_text(text);
  reject_unknown_keys(j, {"channel", "length", "list_size", "codewords"}, "code");
  ListCode code;
  code.base_channel = channel_from(member(j, "channel", "code"), "code.channel");
  code.length = as_count(member(j, "length", "code"), "code.length");
  code.list_size = as_count(member(j, "list_size", "code"), "code.list_size");
  const auto& words = member(j, "codewords", "code");
  if (!words.is_array()) {
    shape_error("code.codewords", "an array of input-symbol arrays");
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    code.codewords.push_back(as_strings(words[i], "code.codewords[" + std::to_string(i) + "]"));
  }

  std::vector<std::string> violations;
  if (code.list_size == 0) {
    violations.push_back("list_size must be at least 1");
  }
  const std::set<std::string> inputs(code.base_channel.inputs.begin(), code.base_channel.inputs.end());
  for (std::size_t i = 0; i < code.codewords.size(); ++i) {
    const auto& w = code.codewords[i];
    if (w.size() != code.length) {
      violations.push_back("codeword " + std::to_string(i + 1) + " has length " +
                           std::to_string(w.size()) + ", expected " + std::to_string(code.length));
    }
    for (const auto& token : w) {
      if (!inputs.contains(token)) {
        violations.push_back("codeword " + std::to_string(i + 1) + " uses undeclared input '" + token + "'");
      }
    }
  }
  require_valid(std::move(violations));
  return code;
}

std::string serialize_list_code(const ListCode& code) {
  return dump(Json{{"channel", channel_json(code.base_channel)},
                   {"length", code.length},
                   {"list_size", code.list_size},
                   {"codewords", code.codewords}});
}

}  // namespace zerr::formats
