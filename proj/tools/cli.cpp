#include "zerr/cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "zerr/adversim.hpp"
#include "zerr/channel.hpp"
#include "zerr/composition.hpp"
#include "zerr/errors.hpp"
#include "zerr/formats.hpp"
#include "zerr/listcodes.hpp"
#include "zerr/network.hpp"

namespace zerr::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int internal_error = 7;

struct Options {
  std::string format = "human";
  SearchBudget budget;
  std::size_t max_length = 4;
  std::uint64_t max_transcripts = 10'000'000;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

Json amb_json(const Ambiguity& a) { return a.is_infinite() ? Json("infinite") : Json(a.value()); }

template <class Range, class F>
std::string join(const Range& items, const std::string& sep, F render) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += render(item);
    first = false;
  }
  return out;
}

std::string brace(const std::set<Value>& values) {
  return "{" + join(values, ", ", [](Value v) { return std::to_string(v); }) + "}";
}

Json one_based(const std::vector<std::size_t>& indices) {
  Json out = Json::array();
  for (auto i : indices) out.push_back(i + 1);
  return out;
}

std::string one_based_text(const std::vector<std::size_t>& indices) {
  return join(indices, ", ", [](std::size_t i) { return std::to_string(i + 1); });
}

std::string allocation_text(const Allocation& allocation) {
  std::vector<std::size_t> idx(allocation.values.size());
  std::iota(idx.begin(), idx.end(), 0);
  return join(idx, ", ", [&](std::size_t i) {
    return "h" + std::to_string(i + 1) + "=" + std::to_string(allocation.values[i]);
  });
}

class Session {
 public:
  explicit Session(Options options) : options_(std::move(options)) {}

  const Options& options() const { return options_; }
  Json& results() { return results_; }
  void line(std::string text) { lines_.push_back(std::move(text)); }
  void warn(std::string text) { warnings_.push_back(std::move(text)); }
  void set_outcome(int code, std::string status) {
    code_ = code;
    status_ = std::move(status);
  }
  int code() const { return code_; }

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read '" + path + "'");
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    inputs_.push_back(Json{{"file", path}, {"sha256", sha256_hex(bytes)}});
    return bytes;
  }

  /// Reads and parses one file, prefixing parse errors with the path.
  template <class Parse>
  auto load(const std::string& path, Parse parse) {
    const auto text = read(path);
    try {
      return parse(text);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

  void fail(int code, std::string status, const std::string& message,
            const std::vector<std::string>& details = {}) {
    set_outcome(code, std::move(status));
    error_ = message;
    details_ = details;
  }

  void emit(const std::vector<std::string>& command, std::ostream& out, std::ostream& err) const {
    if (options_.format == "machine") {
      Json report{{"command", command}, {"status", status_}, {"inputs", inputs_}};
      if (error_) {
        report["error"] = *error_;
        if (!details_.empty()) report["violations"] = details_;
      } else {
        report["results"] = results_;
      }
      report["warnings"] = warnings_;
      out << report.dump(2) << "\n";
      return;
    }
    for (const auto& l : lines_) out << l << "\n";
    for (const auto& w : warnings_) out << "warning: " << w << "\n";
    if (error_) {
      err << "error: " << *error_ << "\n";
      for (const auto& d : details_) err << "  " << d << "\n";
    }
  }

 private:
  Options options_;
  Json inputs_ = Json::array();
  Json results_ = Json::object();
  std::vector<std::string> lines_;
  std::vector<std::string> warnings_;
  int code_ = ok;
  std::string status_ = "ok";
  std::optional<std::string> error_;
  std::vector<std::string> details_;
};

// ---- commands ----

void cmd_ambiguity(Session& s, const std::string& path) {
  const auto channel = s.load(path, formats::parse_channel);
  const auto r = ambiguity(channel, s.options().budget);
  auto& out = s.results();
  out["ambiguity"] = amb_json(r.value);
  s.line("ambiguity: " + r.value.to_string());
  if (r.value.is_finite()) {
    Json names = Json::array();
    for (auto i : r.witness_inputs) names.push_back(channel.inputs[i]);
    out["witness"] = Json{{"inputs", names}};
    s.line("witness: inputs " +
           join(r.witness_inputs, ", ", [&](std::size_t i) { return channel.inputs[i]; }) +
           " share no output");
  } else {
    const auto& y = channel.outputs[*r.common_output];
    out["witness"] = Json{{"common_output", y}};
    s.line("witness: every input can produce " + y);
  }
  if (const auto list = canonical_list_equivalent(channel)) {
    out["list_equivalent"] = Json{{"a", list->a}, {"d", list->d}};
    s.line("equivalent to List(" + std::to_string(list->a) + "," + std::to_string(list->d) + ")");
  } else {
    out["list_equivalent"] = nullptr;
  }
  out["nodes_explored"] = r.nodes_explored;
}

void cmd_achievable(Session& s, const std::string& source, const std::string& target, bool feedback) {
  const auto w0 = s.load(source, formats::parse_channel);
  const auto w1 = s.load(target, formats::parse_channel);
  const auto a0 = ambiguity(w0, s.options().budget).value;
  const auto a1 = ambiguity(w1, s.options().budget).value;
  const bool yes = a0 <= a1;
  auto& out = s.results();
  out["source"] = Json{{"file", source}, {"ambiguity", amb_json(a0)}};
  out["target"] = Json{{"file", target}, {"ambiguity", amb_json(a1)}};
  out["feedback"] = feedback;
  out["achievable"] = yes;
  out["note"] = "feedback does not change the verdict";
  s.line("A(source) = " + a0.to_string() + ", A(target) = " + a1.to_string());
  s.line(std::string("achievable: ") + (yes ? "yes" : "no"));
  s.line("note: feedback does not change the verdict");
  if (!yes) s.set_outcome(impossible, "impossible");
}

void cmd_listcode(Session& s, const std::string& path, std::uint64_t a, std::uint64_t d) {
  const auto channel = s.load(path, formats::parse_channel);
  const auto max_length = s.options().max_length;
  const auto r = find_list_code(channel, a, d, max_length, s.options().budget.max_nodes);
  auto& out = s.results();
  out["list_size"] = a;
  out["codewords"] = d;
  out["max_length"] = max_length;
  out["channel_ambiguity"] = amb_json(r.channel_ambiguity);
  switch (r.verdict) {
    case CodeSearchVerdict::impossible:
      out["verdict"] = "impossible";
      s.line("impossible: channel ambiguity " + r.channel_ambiguity.to_string() +
             " exceeds list size " + std::to_string(a));
      s.set_outcome(impossible, "impossible");
      return;
    case CodeSearchVerdict::not_found:
      out["verdict"] = "not_found";
      s.line("not found within length " + std::to_string(max_length));
      s.set_outcome(not_found, "not_found");
      return;
    case CodeSearchVerdict::found:
      break;
  }
  const auto& code = *r.code;
  const auto check = verify_list_code(code);
  out["verdict"] = "found";
  out["code"] = Json::parse(formats::serialize_list_code(code));
  out["verification"] = Json{{"ok", check.ok}};
  out["nodes_explored"] = r.nodes_explored;
  s.line("code found: length " + std::to_string(code.length) + ", " +
         std::to_string(code.codewords.size()) + " codewords, list size " + std::to_string(a));
  for (std::size_t i = 0; i < code.codewords.size(); ++i) {
    s.line("  codeword " + std::to_string(i + 1) + ": " +
           join(code.codewords[i], " ", [](const std::string& t) { return t; }));
  }
  if (check.ok) {
    s.line("verification: ok");
  } else {
    out["verification"]["output_sequence"] = check.output_sequence;
    out["verification"]["consistent_codewords"] = one_based(check.consistent_codewords);
    s.line("verification: FAILED");
    s.set_outcome(internal_error, "verification_failed");
  }
}

void cmd_serial(Session& s, const std::string& path) {
  const auto inst = s.load(path, formats::parse_instance);
  if (inst.structure) s.warn("structure is ignored by serial composition");
  const auto value = serial_ambiguity(inst.ambiguities);
  Json chain = Json::array();
  for (const auto& a : inst.ambiguities) chain.push_back(amb_json(a));
  s.results()["chain"] = chain;
  s.results()["ambiguity"] = amb_json(value);
  s.line("ambiguity: " + value.to_string());
}

const formats::StructureSpec& require_structure(const formats::InstanceFile& inst) {
  if (!inst.structure) {
    throw ValidationError("instance has no honest-set structure");
  }
  return *inst.structure;
}

void cmd_parallel(Session& s, const std::string& path) {
  const auto inst = s.load(path, formats::parse_instance);
  const auto structure = require_structure(inst).build();
  const auto r = parallel_ambiguity(inst.ambiguities, structure, s.options().budget.max_nodes);
  auto& out = s.results();
  out["ambiguity"] = amb_json(r.value);
  s.line("ambiguity: " + r.value.to_string());
  if (r.value.is_infinite()) {
    out["allocation"] = nullptr;
    out["unconstrained_set"] = *r.unconstrained_set + 1;
    s.line("honest set h" + std::to_string(*r.unconstrained_set + 1) +
           " has no finite-ambiguity channel");
    return;
  }
  out["allocation"] = r.allocation.values;
  s.line("allocation: " + allocation_text(r.allocation));
  const bool all_finite = std::all_of(inst.ambiguities.begin(), inst.ambiguities.end(),
                                      [](const Ambiguity& a) { return a.is_finite(); });
  if (all_finite) {
    const auto lp = lp_upper_bound(inst.ambiguities, structure);
    out["lp_upper_bound"] = lp.str();
    s.line("lp bound: " + lp.str());
  } else {
    out["lp_upper_bound"] = nullptr;
  }
  out["nodes_explored"] = r.nodes_explored;
}

void cmd_threshold(Session& s, const std::string& path) {
  const auto inst = s.load(path, formats::parse_instance);
  const auto& spec = require_structure(inst);
  if (!spec.t) {
    throw ValidationError("instance structure is not a threshold structure");
  }
  const auto r = threshold_ambiguity(ThresholdSpec{inst.ambiguities, *spec.t});
  auto& out = s.results();
  out["t"] = *spec.t;
  out["ambiguity"] = amb_json(r.value);
  out["witness"] = one_based(r.witness);
  s.line("ambiguity: " + r.value.to_string());
  if (!r.witness.empty()) s.line("minimizing channels: " + one_based_text(r.witness));
}

Json decomposition_json(const Network& net, const PathDecomposition& d, std::vector<std::string>* lines) {
  Json paths = Json::array();
  for (std::size_t i = 0; i < d.paths.size(); ++i) {
    Json ids = Json::array();
    for (auto e : d.paths[i]) ids.push_back(net.edges[e].id);
    const auto label = path_label(net, d.paths[i]);
    paths.push_back(Json{{"label", label}, {"edges", ids}, {"ambiguity", amb_json(d.path_ambiguities[i])}});
    if (lines) {
      lines->push_back("path " + std::to_string(i + 1) + ": " + label + " (ambiguity " +
                       d.path_ambiguities[i].to_string() + ")");
    }
  }
  Json honest = Json::array();
  for (const auto& h : d.honest_sets) honest.push_back(one_based(h));
  if (lines && !d.honest_sets.empty()) {
    lines->push_back("honest path sets: " + join(d.honest_sets, ", ", [](const auto& h) {
                       return "{" + one_based_text(h) + "}";
                     }));
  }
  return Json{{"paths", paths}, {"honest_sets", honest}, {"shared_edges", d.shared_edges}};
}

void cmd_network(Session& s, const std::string& path) {
  const auto file = s.load(path, formats::parse_network);
  const auto r = network_ambiguity(file.network, file.adversary);
  std::vector<std::string> lines;
  auto& out = s.results();
  out["decomposition"] = decomposition_json(file.network, r.decomposition, &lines);
  for (auto& l : lines) s.line(std::move(l));
  out["ambiguity"] = amb_json(r.value);
  s.line("ambiguity: " + r.value.to_string());
  if (r.value.is_finite()) {
    out["allocation"] = r.allocation.values;
    s.line("allocation: " + allocation_text(r.allocation));
  } else {
    out["allocation"] = nullptr;
  }
  for (const auto& w : r.warnings) s.warn(w);
}

struct SimInstance {
  std::vector<Ambiguity> ambiguities;
  HonestSetStructure structure;
  std::optional<std::size_t> t;
  std::string unit;  // "channel" or "path"
};

SimInstance load_simulation(Session& s, const std::string& path) {
  const auto text = s.read(path);
  const auto probe = Json::parse(text, nullptr, false);
  try {
    if (probe.is_object() && probe.contains("edges")) {
      const auto file = formats::parse_network(text);
      const auto r = network_ambiguity(file.network, file.adversary);
      for (const auto& w : r.warnings) s.warn(w);
      if (r.value.is_infinite()) {
        throw ValidationError("network ambiguity is infinite: nothing to simulate");
      }
      std::vector<std::string> lines;
      s.results()["decomposition"] = decomposition_json(file.network, r.decomposition, &lines);
      for (auto& l : lines) s.line(std::move(l));
      const auto& d = r.decomposition;
      return {d.path_ambiguities, HonestSetStructure(d.paths.size(), d.honest_sets), std::nullopt, "path"};
    }
    const auto inst = formats::parse_instance(text);
    const auto& spec = require_structure(inst);
    return {inst.ambiguities, spec.build(), spec.t, "channel"};
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<Value> decoys_after(Value truth, std::uint64_t count) {
  std::vector<Value> out;
  for (std::uint64_t i = 1; i <= count; ++i) out.push_back(truth + i);
  return out;
}

Json transcript_json(Session& s, const std::string& strategy, const std::string& unit,
                     const ParallelTranscript& t, const std::set<Value>& candidates,
                     bool indistinguishable, const StrategyOutcome& received) {
  Json channels = Json::array();
  s.line(strategy + " adversary (truth " + std::to_string(t.true_value) + "):");
  for (std::size_t j = 0; j < t.emitted.size(); ++j) {
    const bool corrupt = t.corrupted.contains(j);
    channels.push_back(Json{{"emitted", t.emitted[j]}, {"corrupt", corrupt}});
    s.line("  " + unit + " " + std::to_string(j + 1) + ": " + brace(t.emitted[j]) +
           (corrupt ? " corrupt" : " honest"));
  }
  s.line("  candidates " + brace(candidates) + ": " +
         (indistinguishable ? "indistinguishable" : "DISTINGUISHABLE"));
  s.line("  receiver list " + brace(received.receiver_list) + " (size " +
         std::to_string(received.list_size) + ", " +
         (received.contains_truth ? "contains truth" : "MISSES TRUTH") + ")");
  std::vector<std::size_t> corrupted(t.corrupted.begin(), t.corrupted.end());
  return Json{{"strategy", strategy},
              {"truth", t.true_value},
              {"channels", channels},
              {"corrupted", one_based(corrupted)},
              {"candidates", candidates},
              {"indistinguishable", indistinguishable},
              {"receiver_list", received.receiver_list},
              {"contains_truth", received.contains_truth}};
}

void cmd_simulate(Session& s, const std::string& path, Value truth, bool exhaustive) {
  const auto inst = load_simulation(s, path);
  const auto& amb = inst.ambiguities;
  const auto computed = parallel_ambiguity(amb, inst.structure, s.options().budget.max_nodes);
  if (computed.value.is_infinite()) {
    throw ValidationError("ambiguity is infinite: nothing to simulate");
  }
  const auto value = computed.value.value();
  auto& out = s.results();
  out["computed"] = value;

  bool sound = true;
  Json transcripts = Json::array();
  {
    const auto decoys = decoys_after(truth, value - 1);
    const auto t = adversary_general(inst.structure, amb, computed.allocation, truth, decoys);
    std::set<Value> candidates(decoys.begin(), decoys.end());
    candidates.insert(truth);
    const bool same = indistinguishability_check(t, inst.structure, amb, candidates);
    const auto received = receiver_general(t, amb, inst.structure);
    sound = sound && same && received.contains_truth && received.list_size <= value;
    transcripts.push_back(transcript_json(s, "general", inst.unit, t, candidates, same, received));
  }
  if (inst.t) {
    const ThresholdSpec spec{amb, *inst.t};
    const auto thr = threshold_ambiguity(spec);
    out["threshold"] = amb_json(thr.value);
    const auto decoys = decoys_after(truth, thr.value.value() - 1);
    const auto t = adversary_threshold(spec, truth, decoys);
    std::set<Value> candidates(decoys.begin(), decoys.end());
    candidates.insert(truth);
    const bool same = indistinguishability_check(t, inst.structure, amb, candidates);
    const auto received = receiver_threshold(t, spec, thr.witness);
    sound = sound && same && received.contains_truth && received.list_size <= thr.value.value();
    transcripts.push_back(transcript_json(s, "threshold", inst.unit, t, candidates, same, received));
  }
  out["transcripts"] = transcripts;

  if (!exhaustive) {
    out["empirical"] = nullptr;
    s.line("computed " + std::to_string(value) + ", empirical skipped");
  } else {
    const auto empirical =
        empirical_ambiguity(amb, inst.structure, value + 1, s.options().max_transcripts);
    out["empirical"] = empirical;
    const bool match = empirical == value;
    out["match"] = match;
    s.line("computed " + std::to_string(value) + ", empirical " + std::to_string(empirical) + ", " +
           (match ? "match" : "MISMATCH"));
    sound = sound && match;
  }
  if (!sound) s.set_outcome(internal_error, "inconsistent");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options options;
  CLI::App app{"Zero-error channel ambiguity toolkit", "zerr"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", options.format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  app.add_option("--max-subfamily", options.budget.max_subfamily, "Largest subfamily tried by the ambiguity search")
      ->capture_default_str();
  app.add_option("--max-nodes", options.budget.max_nodes, "Node budget for exhaustive searches")
      ->capture_default_str();
  app.add_option("--max-length", options.max_length, "Longest list code tried")->capture_default_str();
  app.add_option("--max-transcripts", options.max_transcripts, "Transcript budget for simulate")
      ->capture_default_str();

  std::function<void(Session&)> action;
  std::string file1, file2;

  auto* amb = app.add_subcommand("ambiguity", "Ambiguity of a channel");
  amb->add_option("channel", file1, "Channel file")->required();
  amb->callback([&] { action = [&](Session& s) { cmd_ambiguity(s, file1); }; });

  bool feedback = false;
  auto* ach = app.add_subcommand("achievable", "Whether the target can be simulated from the source");
  ach->add_option("source", file1, "Channel file")->required();
  ach->add_option("target", file2, "Channel file")->required();
  ach->add_flag("--feedback", feedback, "Allow feedback (never changes the verdict)");
  ach->callback([&] { action = [&](Session& s) { cmd_achievable(s, file1, file2, feedback); }; });

  std::uint64_t list_a = 0;
  std::uint64_t list_d = 0;
  auto* lc = app.add_subcommand("listcode", "Search for a code turning the channel into List(a,d)");
  lc->add_option("channel", file1, "Channel file")->required();
  lc->add_option("a", list_a, "List size")->required();
  lc->add_option("d", list_d, "Number of codewords")->required();
  lc->callback([&] { action = [&](Session& s) { cmd_listcode(s, file1, list_a, list_d); }; });

  auto* ser = app.add_subcommand("serial", "Ambiguity of channels in series");
  ser->add_option("instance", file1, "Instance file")->required();
  ser->callback([&] { action = [&](Session& s) { cmd_serial(s, file1); }; });

  auto* par = app.add_subcommand("parallel", "Ambiguity of parallel channels under an honest-set structure");
  par->add_option("instance", file1, "Instance file")->required();
  par->callback([&] { action = [&](Session& s) { cmd_parallel(s, file1); }; });

  auto* thr = app.add_subcommand("threshold", "Closed form for threshold structures");
  thr->add_option("instance", file1, "Instance file with a threshold structure")->required();
  thr->callback([&] { action = [&](Session& s) { cmd_threshold(s, file1); }; });

  auto* net = app.add_subcommand("network", "Ambiguity between sender and receiver of a network");
  net->add_option("network", file1, "Network file")->required();
  net->callback([&] { action = [&](Session& s) { cmd_network(s, file1); }; });

  Value truth = 0;
  bool exhaustive = true;
  auto* sim = app.add_subcommand("simulate", "Run both strategies and the exhaustive game");
  sim->add_option("file", file1, "Network or instance file")->required();
  sim->add_option("--truth", truth, "Sender's value")->capture_default_str();
  sim->add_flag("--exhaustive,!--no-exhaustive", exhaustive, "Compute the empirical game value");
  sim->callback([&] { action = [&](Session& s) { cmd_simulate(s, file1, truth, exhaustive); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  Session session(options);
  try {
    action(session);
  } catch (const IoError& e) {
    session.fail(usage, "io_error", e.what());
  } catch (const ParseError& e) {
    session.fail(parse_error, "parse_error", e.what());
  } catch (const ValidationError& e) {
    session.fail(validation_error, "validation_error", "invalid input", e.violations());
  } catch (const BudgetExceeded& e) {
    session.fail(budget_exceeded, "budget_exceeded", e.what());
  } catch (const std::invalid_argument& e) {
    session.fail(validation_error, "validation_error", e.what());
  } catch (const std::overflow_error& e) {
    session.fail(validation_error, "validation_error", e.what());
  } catch (const std::exception& e) {
    session.fail(internal_error, "internal_error", e.what());
  }
  session.emit(args, out, err);
  return session.code();
}

}  // namespace zerr::cli
