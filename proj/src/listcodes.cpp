#include "zerr/listcodes.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "zerr/errors.hpp"

namespace zerr {

OneShotListCode oneshot_list_decode(const Channel& channel, std::span<const std::size_t> witness) {
  const auto matrix = compile(channel);
  std::set<std::size_t> distinct(witness.begin(), witness.end());
  if (distinct.size() != witness.size()) {
    throw std::invalid_argument("witness repeats an input");
  }
  if (witness.empty()) {
    throw std::invalid_argument("witness is empty");
  }
  OutputSet common(matrix.num_outputs);
  common.set();
  for (auto x : witness) {
    if (x >= matrix.rows.size()) {
      throw std::invalid_argument("witness names input " + std::to_string(x) + " of only " +
                                  std::to_string(matrix.rows.size()));
    }
    common &= matrix.rows[x];
  }
  if (common.any()) {
    throw std::invalid_argument("witness inputs share output '" +
                                channel.outputs[common.find_first()] + "'");
  }

  OneShotListCode code;
  code.sender.assign(witness.begin(), witness.end());
  code.list_size = witness.size() - 1;
  code.receiver.resize(matrix.num_outputs);
  for (std::size_t v = 0; v < witness.size(); ++v) {
    const auto& row = matrix.rows[witness[v]];
    for (auto y = row.find_first(); y != OutputSet::npos; y = row.find_next(y)) {
      code.receiver[y].push_back(v + 1);
    }
  }
  return code;
}

ListSimulation::ListSimulation(ChannelMatrix target, ListChannelSpec carrier)
    : target_(std::move(target)), carrier_(carrier) {}

std::size_t ListSimulation::receive(std::span<const std::uint64_t> carrier_list) const {
  if (carrier_list.size() > carrier_.a) {
    throw std::invalid_argument("carrier list longer than its list size");
  }
  std::set<std::uint64_t> values(carrier_list.begin(), carrier_list.end());
  if (values.size() != carrier_list.size()) {
    throw std::invalid_argument("carrier list repeats a value");
  }
  OutputSet common(target_.num_outputs);
  common.set();
  bool any = false;
  for (auto v : values) {
    if (v < 1 || v > carrier_.d) {
      throw std::invalid_argument("carrier value " + std::to_string(v) + " outside 1.." +
                                  std::to_string(carrier_.d));
    }
    if (v > target_.rows.size()) {
      continue;
    }
    any = true;
    common &= target_.rows[v - 1];
  }
  if (!any) {
    throw std::invalid_argument("carrier list names no input of the target channel");
  }
  if (common.none()) {
    throw std::logic_error("listed inputs share no output; carrier list size exceeds ambiguity");
  }
  return common.find_first();
}

std::variant<ListSimulation, SimulationImpossible> simulate_channel_from_list(
    const Channel& target, const ListChannelSpec& carrier) {
  auto matrix = compile(target);
  if (carrier.a < 1 || carrier.a >= carrier.d) {
    throw std::invalid_argument("carrier needs 1 <= a < d");
  }
  if (carrier.d < matrix.rows.size()) {
    throw std::invalid_argument("carrier alphabet d=" + std::to_string(carrier.d) +
                                " is smaller than the target's " +
                                std::to_string(matrix.rows.size()) + " inputs");
  }
  const auto target_ambiguity = ambiguity(matrix).value;
  if (Ambiguity::finite(carrier.a) > target_ambiguity) {
    return SimulationImpossible{
        target_ambiguity, "carrier list size " + std::to_string(carrier.a) +
                              " exceeds the target's ambiguity " + target_ambiguity.to_string()};
  }
  return ListSimulation(std::move(matrix), carrier);
}

namespace {

struct IndexedCode {
  ChannelMatrix matrix;
  std::size_t length = 0;
  std::vector<std::vector<std::size_t>> words;
  std::uint64_t list_size = 0;
};

IndexedCode index_code(const ListCode& code) {
  IndexedCode out;
  out.matrix = compile(code.base_channel);
  out.length = code.length;
  out.list_size = code.list_size;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < code.base_channel.inputs.size(); ++i) {
    index.emplace(code.base_channel.inputs[i], i);
  }
  std::vector<std::string> violations;
  if (code.length == 0) {
    violations.push_back("code length must be at least 1");
  }
  if (code.codewords.empty()) {
    violations.push_back("code has no codewords");
  }
  std::set<std::vector<std::string>> seen;
  for (std::size_t c = 0; c < code.codewords.size(); ++c) {
    const auto& word = code.codewords[c];
    if (word.size() != code.length) {
      violations.push_back("codeword " + std::to_string(c) + " has length " +
                           std::to_string(word.size()) + ", expected " + std::to_string(code.length));
    }
    if (!seen.insert(word).second) {
      violations.push_back("codeword " + std::to_string(c) + " repeats an earlier codeword");
    }
    std::vector<std::size_t> indices;
    for (const auto& sym : word) {
      auto it = index.find(sym);
      if (it == index.end()) {
        violations.push_back("codeword " + std::to_string(c) + " uses unknown input '" + sym + "'");
      } else {
        indices.push_back(it->second);
      }
    }
    out.words.push_back(std::move(indices));
  }
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return out;
}

struct Failure {
  std::vector<std::size_t> outputs;
  std::vector<std::size_t> consistent;
};

// Walks the output sequences reachable from codeword `origin` in lexicographic
// order and returns the first one consistent with too many codewords.
std::optional<Failure> first_failure_from(const IndexedCode& code, std::size_t origin) {
  const auto& word = code.words[origin];
  const auto n = code.length;
  std::vector<std::size_t> y(n);
  for (std::size_t p = 0; p < n; ++p) {
    y[p] = code.matrix.rows[word[p]].find_first();
  }
  while (true) {
    std::vector<std::size_t> consistent;
    for (std::size_t c = 0; c < code.words.size(); ++c) {
      bool match = true;
      for (std::size_t p = 0; p < n && match; ++p) {
        match = code.matrix.rows[code.words[c][p]].test(y[p]);
      }
      if (match) {
        consistent.push_back(c);
      }
    }
    if (consistent.size() > code.list_size) {
      return Failure{y, std::move(consistent)};
    }
    // odometer over W(word[0]) x ... x W(word[n-1]), last position fastest
    std::size_t p = n;
    while (p > 0) {
      const auto& row = code.matrix.rows[word[p - 1]];
      const auto next = row.find_next(y[p - 1]);
      if (next != OutputSet::npos) {
        y[p - 1] = next;
        break;
      }
      y[p - 1] = row.find_first();
      --p;
    }
    if (p == 0) {
      return std::nullopt;
    }
  }
}

CodeVerification to_verification(const ListCode& code, const std::optional<Failure>& failure) {
  CodeVerification out;
  if (!failure) {
    return out;
  }
  out.ok = false;
  for (auto y : failure->outputs) {
    out.output_sequence.push_back(code.base_channel.outputs[y]);
  }
  out.consistent_codewords = failure->consistent;
  return out;
}

}  // namespace

CodeVerification verify_list_code_serial(const ListCode& code) {
  const auto indexed = index_code(code);
  for (std::size_t c = 0; c < indexed.words.size(); ++c) {
    if (auto failure = first_failure_from(indexed, c)) {
      return to_verification(code, failure);
    }
  }
  return {};
}

CodeVerification verify_list_code(const ListCode& code) {
  const auto indexed = index_code(code);
  const auto count = static_cast<std::int64_t>(indexed.words.size());
  std::vector<std::optional<Failure>> failures(indexed.words.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < count; ++c) {
    failures[static_cast<std::size_t>(c)] = first_failure_from(indexed, static_cast<std::size_t>(c));
  }
  for (const auto& failure : failures) {
    if (failure) {
      return to_verification(code, failure);
    }
  }
  return {};
}

namespace {

class CodeSearch {
 public:
  CodeSearch(const ChannelMatrix& matrix, std::size_t length, std::uint64_t a, std::uint64_t d,
             std::uint64_t max_nodes, std::uint64_t& nodes)
      : matrix_(matrix), length_(length), a_(a), d_(d), max_nodes_(max_nodes), nodes_(nodes) {
    const auto x = matrix.rows.size();
    std::uint64_t total = 1;
    for (std::size_t p = 0; p < length; ++p) {
      if (total > std::numeric_limits<std::uint64_t>::max() / x) {
        throw BudgetExceeded("list code search: word space overflows");
      }
      total *= x;
    }
    words_.reserve(total);
    for (std::uint64_t w = 0; w < total; ++w) {
      std::vector<std::size_t> word(length);
      auto rest = w;
      for (std::size_t p = length; p-- > 0;) {
        word[p] = rest % x;
        rest /= x;
      }
      words_.push_back(std::move(word));
    }
  }

  bool run() { return extend(0); }
  const std::vector<std::size_t>& chosen() const { return chosen_; }
  const std::vector<std::size_t>& word(std::size_t w) const { return words_[w]; }

 private:
  bool extend(std::size_t start) {
    if (chosen_.size() == d_) {
      return true;
    }
    const auto needed = d_ - chosen_.size();
    for (auto w = start; w + needed <= words_.size(); ++w) {
      if (++nodes_ > max_nodes_) {
        throw BudgetExceeded("list code search exceeded " + std::to_string(max_nodes_) + " nodes");
      }
      if (closes_adjacent_group(w)) {
        continue;
      }
      chosen_.push_back(w);
      if (extend(w + 1)) {
        return true;
      }
      chosen_.pop_back();
    }
    return false;
  }

  // Whether word w together with some a already chosen codewords has a common
  // output at every position (an output sequence consistent with a+1 codewords).
  bool closes_adjacent_group(std::size_t w) {
    if (chosen_.size() < a_) {
      return false;
    }
    std::vector<OutputSet> acc;
    acc.reserve(length_);
    for (std::size_t p = 0; p < length_; ++p) {
      acc.push_back(matrix_.rows[words_[w][p]]);
    }
    return adjacent_from(acc, 0, 0);
  }

  bool adjacent_from(const std::vector<OutputSet>& acc, std::size_t start, std::uint64_t taken) {
    if (taken == a_) {
      return true;
    }
    for (auto i = start; i + (a_ - taken) <= chosen_.size(); ++i) {
      const auto& other = words_[chosen_[i]];
      std::vector<OutputSet> next;
      next.reserve(length_);
      bool alive = true;
      for (std::size_t p = 0; p < length_ && alive; ++p) {
        next.push_back(acc[p] & matrix_.rows[other[p]]);
        alive = next.back().any();
      }
      if (alive && adjacent_from(next, i + 1, taken + 1)) {
        return true;
      }
    }
    return false;
  }

  const ChannelMatrix& matrix_;
  std::size_t length_;
  std::uint64_t a_;
  std::uint64_t d_;
  std::uint64_t max_nodes_;
  std::uint64_t& nodes_;
  std::vector<std::vector<std::size_t>> words_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

CodeSearchResult find_list_code(const Channel& channel, std::uint64_t a, std::uint64_t d,
                                std::size_t max_length, std::uint64_t max_nodes) {
  if (a < 1 || d <= a) {
    throw std::invalid_argument("list code needs d > a >= 1, got a=" + std::to_string(a) +
                                " d=" + std::to_string(d));
  }
  const auto matrix = compile(channel);
  CodeSearchResult result;
  result.channel_ambiguity = ambiguity(matrix).value;
  if (result.channel_ambiguity > Ambiguity::finite(a)) {
    result.verdict = CodeSearchVerdict::impossible;
    return result;
  }
  for (std::size_t n = 1; n <= max_length; ++n) {
    CodeSearch search(matrix, n, a, d, max_nodes, result.nodes_explored);
    if (!search.run()) {
      continue;
    }
    ListCode code;
    code.base_channel = channel;
    code.length = n;
    code.list_size = a;
    for (auto w : search.chosen()) {
      std::vector<std::string> word;
      for (auto x : search.word(w)) {
        word.push_back(channel.inputs[x]);
      }
      code.codewords.push_back(std::move(word));
    }
    result.verdict = CodeSearchVerdict::found;
    result.code = std::move(code);
    return result;
  }
  result.verdict = CodeSearchVerdict::not_found;
  return result;
}

}  // namespace zerr
