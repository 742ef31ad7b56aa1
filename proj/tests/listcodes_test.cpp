#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "zerr/errors.hpp"
#include "zerr/listcodes.hpp"

using namespace zerr;
using zerr::testing::random_channel;

namespace {

Channel identity_channel() { return Channel{{"0", "1"}, {"0", "1"}, {{"0"}, {"1"}}}; }

// Four inputs, every pair of output sets meets, no triple does.
Channel pairwise_channel() {
  return Channel{{"p", "q", "r", "s"},
                 {"pq", "pr", "ps", "qr", "qs", "rs"},
                 {{"pq", "pr", "ps"}, {"pq", "qr", "qs"}, {"pr", "qr", "rs"}, {"ps", "qs", "rs"}}};
}

std::set<std::string> row_set(const Channel& c, const std::string& x) {
  auto it = std::find(c.inputs.begin(), c.inputs.end(), x);
  const auto& row = c.relation[static_cast<std::size_t>(it - c.inputs.begin())];
  return {row.begin(), row.end()};
}

// Test-side criterion: no a+1 codewords share an output at every position.
bool group_criterion(const Channel& c, const std::vector<std::vector<std::string>>& words,
                     std::uint64_t a) {
  const auto d = words.size();
  if (d <= a) return true;
  std::vector<bool> mask(d, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(a + 1), true);
  do {
    bool adjacent_everywhere = true;
    for (std::size_t p = 0; p < words[0].size() && adjacent_everywhere; ++p) {
      std::optional<std::set<std::string>> common;
      for (std::size_t i = 0; i < d; ++i) {
        if (!mask[i]) continue;
        auto row = row_set(c, words[i][p]);
        if (!common) {
          common = row;
        } else {
          std::set<std::string> next;
          for (const auto& y : *common)
            if (row.contains(y)) next.insert(y);
          common = next;
        }
      }
      adjacent_everywhere = !common->empty();
    }
    if (adjacent_everywhere) return false;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return true;
}

// Naive minimal-length, lexicographically least code by scanning every
// d-combination of words in lexicographic order.
std::optional<std::vector<std::vector<std::string>>> naive_code(const Channel& c, std::uint64_t a,
                                                                std::uint64_t d,
                                                                std::size_t max_length) {
  const auto x = c.inputs.size();
  for (std::size_t n = 1; n <= max_length; ++n) {
    std::vector<std::vector<std::string>> words;
    std::size_t total = 1;
    for (std::size_t p = 0; p < n; ++p) total *= x;
    for (std::size_t w = 0; w < total; ++w) {
      std::vector<std::string> word(n);
      auto rest = w;
      for (std::size_t p = n; p-- > 0;) {
        word[p] = c.inputs[rest % x];
        rest /= x;
      }
      words.push_back(word);
    }
    if (words.size() < d) continue;
    std::vector<bool> mask(words.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(d), true);
    do {
      std::vector<std::vector<std::string>> pick;
      for (std::size_t i = 0; i < words.size(); ++i)
        if (mask[i]) pick.push_back(words[i]);
      if (group_criterion(c, pick, a)) return pick;
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("oneshot_list_decode examples") {
  auto perfect = oneshot_list_decode(make_list_channel({1, 2}), std::vector<std::size_t>{0, 1});
  CHECK(perfect.list_size == 1);
  CHECK(perfect.receiver == std::vector<std::vector<std::uint64_t>>{{1}, {2}});

  auto l23 = make_list_channel({2, 3});
  auto code = oneshot_list_decode(l23, std::vector<std::size_t>{0, 1, 2});
  for (const auto& list : code.receiver) {
    CHECK(list.size() == 2);
  }

  CHECK_THROWS_AS(oneshot_list_decode(l23, std::vector<std::size_t>{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(oneshot_list_decode(l23, std::vector<std::size_t>{0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(oneshot_list_decode(l23, std::vector<std::size_t>{0, 1, 7}), std::invalid_argument);
}

TEST_CASE("oneshot decoding is sound over every transcript") {
  auto check_all = [](const Channel& c, const std::vector<std::size_t>& witness) {
    auto code = oneshot_list_decode(c, witness);
    const auto m = compile(c);
    for (std::size_t v = 1; v <= witness.size(); ++v) {
      const auto& row = m.rows[code.sender[v - 1]];
      for (auto y = row.find_first(); y != OutputSet::npos; y = row.find_next(y)) {
        const auto& list = code.receiver[y];
        CHECK(std::find(list.begin(), list.end(), v) != list.end());
        CHECK(list.size() <= code.list_size);
      }
    }
  };
  auto pw = pairwise_channel();
  CHECK(ambiguity(pw).value == Ambiguity::finite(2));
  check_all(pw, {0, 1, 2});
  check_all(pw, {1, 2, 3});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_channel(rng, 2 + trial % 5, 5, 0.5);
    auto r = ambiguity(c);
    if (r.value.is_finite()) {
      check_all(c, r.witness_inputs);
    }
  }
}

TEST_CASE("simulate_channel_from_list examples") {
  auto l23 = make_list_channel({2, 3});
  auto sim = simulate_channel_from_list(l23, {2, 3});
  REQUIRE(std::holds_alternative<ListSimulation>(sim));
  const auto& protocol = std::get<ListSimulation>(sim);
  // All inputs x, all carrier lists of size 2 containing f(x).
  const auto m = compile(l23);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::uint64_t other = 1; other <= 3; ++other) {
      if (other == protocol.send(x)) continue;
      std::vector<std::uint64_t> list{protocol.send(x), other};
      std::sort(list.begin(), list.end());
      CHECK(m.rows[x].test(protocol.receive(list)));
    }
  }

  auto id = Channel{{"0", "1"}, {"0", "1"}, {{"0"}, {"1"}}};
  auto exact = std::get<ListSimulation>(simulate_channel_from_list(id, {1, 2}));
  CHECK(exact.receive(std::vector<std::uint64_t>{exact.send(0)}) == 0);
  CHECK(exact.receive(std::vector<std::uint64_t>{exact.send(1)}) == 1);

  CHECK_THROWS_AS(simulate_channel_from_list(l23, {1, 2}), std::invalid_argument);
}

TEST_CASE("carrier list size decides simulability") {
  auto target = make_list_channel({3, 4});  // ambiguity 3
  // Smaller lists carry more information: List_2 simulates a channel of ambiguity 3.
  auto easier = simulate_channel_from_list(target, {2, 10});
  REQUIRE(std::holds_alternative<ListSimulation>(easier));
  const auto& p = std::get<ListSimulation>(easier);
  const auto m = compile(target);
  for (std::size_t x = 0; x < 4; ++x) {
    for (std::uint64_t other = 1; other <= 10; ++other) {
      if (other == p.send(x)) continue;
      std::vector<std::uint64_t> list{p.send(x), other};
      CHECK(m.rows[x].test(p.receive(list)));
    }
  }
  auto harder = simulate_channel_from_list(make_list_channel({2, 3}), {3, 10});
  REQUIRE(std::holds_alternative<SimulationImpossible>(harder));
  CHECK(std::get<SimulationImpossible>(harder).target_ambiguity == Ambiguity::finite(2));
}

TEST_CASE("List carrier built from a channel simulates targets end to end") {
  std::mt19937_64 rng(8);
  int exercised = 0;
  for (int trial = 0; trial < 300 && exercised < 40; ++trial) {
    auto base = random_channel(rng, 3 + trial % 3, 4, 0.55);
    auto r = ambiguity(base);
    if (r.value.is_infinite()) continue;
    const auto a = r.value.value();
    auto target = random_channel(rng, 1 + trial % (a + 1), 3, 0.6);
    if (ambiguity(target).value < Ambiguity::finite(a)) continue;
    ++exercised;

    auto carrier = oneshot_list_decode(base, r.witness_inputs);
    auto protocol = std::get<ListSimulation>(simulate_channel_from_list(target, {a, a + 1}));
    const auto bm = compile(base);
    const auto tm = compile(target);
    for (std::size_t x = 0; x < target.inputs.size(); ++x) {
      const auto v = protocol.send(x);
      const auto& row = bm.rows[carrier.sender[v - 1]];
      for (auto y = row.find_first(); y != OutputSet::npos; y = row.find_next(y)) {
        CHECK(tm.rows[x].test(protocol.receive(carrier.receiver[y])));
      }
    }
  }
  CHECK(exercised >= 10);
}

TEST_CASE("find_list_code examples") {
  auto perfect = find_list_code(make_list_channel({1, 2}), 1, 4, 2);
  REQUIRE(perfect.verdict == CodeSearchVerdict::found);
  CHECK(perfect.code->length == 2);
  CHECK(perfect.code->codewords ==
        std::vector<std::vector<std::string>>{{"1", "1"}, {"1", "2"}, {"2", "1"}, {"2", "2"}});

  auto l23 = make_list_channel({2, 3});
  auto one = find_list_code(l23, 2, 3, 3);
  REQUIRE(one.verdict == CodeSearchVerdict::found);
  CHECK(one.code->length == 1);

  auto four = find_list_code(l23, 2, 4, 3);
  REQUIRE(four.verdict == CodeSearchVerdict::found);
  auto expected = naive_code(l23, 2, 4, 3);
  REQUIRE(expected.has_value());
  CHECK(four.code->codewords == *expected);
  CHECK(four.code->length == 2);
  CHECK(verify_list_code(*four.code).ok);

  CHECK(find_list_code(l23, 1, 2, 4).verdict == CodeSearchVerdict::impossible);
  CHECK(find_list_code(make_list_channel({1, 2}), 1, 5, 2).verdict == CodeSearchVerdict::not_found);
  CHECK_THROWS_AS(find_list_code(l23, 2, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(find_list_code(l23, 2, 9, 6, 1000), BudgetExceeded);
}

TEST_CASE("find_list_code agrees with naive combination scan") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    auto c = random_channel(rng, 2 + trial % 3, 4, 0.5);
    auto amb = ambiguity(c).value;
    for (std::uint64_t a = 1; a <= 2; ++a) {
      const auto d = a + 1 + trial % 2;
      auto got = find_list_code(c, a, d, 2);
      if (amb > Ambiguity::finite(a)) {
        CHECK(got.verdict == CodeSearchVerdict::impossible);
        continue;
      }
      auto expected = naive_code(c, a, d, 2);
      if (expected) {
        REQUIRE(got.verdict == CodeSearchVerdict::found);
        CHECK(got.code->codewords == *expected);
        CHECK(verify_list_code(*got.code).ok);
      } else {
        CHECK(got.verdict == CodeSearchVerdict::not_found);
      }
    }
  }
}

TEST_CASE("a list size below the ambiguity is impossible at every length") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 80; ++trial) {
    auto c = random_channel(rng, 2 + trial % 4, 4, 0.6);
    auto amb = ambiguity(c).value;
    if (amb.is_infinite() || amb.value() < 2) continue;
    const auto a = amb.value() - 1;
    for (std::uint64_t d = a + 1; d <= a + 3; ++d) {
      for (std::size_t n = 1; n <= 3; ++n) {
        CHECK(find_list_code(c, a, d, n).verdict == CodeSearchVerdict::impossible);
      }
    }
    // Exhaustive check at length 1 and 2 that no such code exists at all.
    CHECK_FALSE(naive_code(c, a, a + 1, 2).has_value());
  }
}

TEST_CASE("verify_list_code") {
  auto code = *find_list_code(make_list_channel({1, 2}), 1, 4, 2).code;
  CHECK(verify_list_code(code).ok);

  auto zero = code;
  zero.list_size = 0;
  auto v = verify_list_code(zero);
  CHECK_FALSE(v.ok);
  CHECK(v.output_sequence == std::vector<std::string>{"1", "1"});
  CHECK(v.consistent_codewords == std::vector<std::size_t>{0});

  ListCode bad{make_list_channel({2, 3}), 1, {{"1"}, {"2"}, {"3"}}, 1};
  v = verify_list_code(bad);
  CHECK_FALSE(v.ok);
  CHECK(v.consistent_codewords.size() == 2);
  CHECK(v.output_sequence == std::vector<std::string>{"1,2"});

  ListCode broken{make_list_channel({1, 2}), 2, {{"1"}, {"1", "9"}}, 1};
  CHECK_THROWS_AS(verify_list_code(broken), ValidationError);
}

TEST_CASE("verification kernel agrees with serial reference") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_channel(rng, 2 + trial % 3, 4, 0.5);
    ListCode code{c, 2, {}, static_cast<std::uint64_t>(1 + trial % 3)};
    std::set<std::vector<std::string>> words;
    std::uniform_int_distribution<std::size_t> pick(0, c.inputs.size() - 1);
    while (words.size() < std::min<std::size_t>(4, c.inputs.size() * c.inputs.size())) {
      words.insert({c.inputs[pick(rng)], c.inputs[pick(rng)]});
    }
    code.codewords.assign(words.begin(), words.end());
    auto p = verify_list_code(code);
    auto s = verify_list_code_serial(code);
    CHECK(p.ok == s.ok);
    CHECK(p.output_sequence == s.output_sequence);
    CHECK(p.consistent_codewords == s.consistent_codewords);
    CHECK(p.ok == group_criterion(c, code.codewords, code.list_size));
  }
}
