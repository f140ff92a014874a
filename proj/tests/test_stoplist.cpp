#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "wsd/stoplist.hpp"

using namespace wsd;
using wsd::testing::inst;

namespace {

// Lexelt with `n` training instances of equal length; `extra` is spliced
// into the first instances' left context one token each.
LexeltDataset lexelt(const std::string& name, std::size_t n, const std::vector<std::string>& extra = {}) {
  LexeltDataset ds;
  ds.lexelt = name;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string left = i < extra.size() ? extra[i] : "pad" + name + std::to_string(i);
    ds.train.push_back(inst(name, std::to_string(i), "s", left + " [" + name + "]"));
  }
  return ds;
}

}  // namespace

TEST_CASE("stoplist: aggregate count over five files reaches the threshold") {
  std::vector<LexeltDataset> data;
  for (int f = 0; f < 5; ++f) data.push_back(lexelt("w" + std::to_string(f), 4, {"the", "the", "the"}));
  const auto list = build_stoplist(data, 1);
  CHECK(list.contains("the"));  // 3 per file, 15 in aggregate
  CHECK(list.provenance.sampled_lexelts.size() == 5);
  CHECK(!list.contains("padw00"));
}

TEST_CASE("stoplist: boundary at min_count") {
  std::vector<LexeltDataset> data;
  // "nine" occurs 9 times in total, "ten" exactly 10 times.
  const std::vector<std::vector<std::string>> extras = {
      {"nine", "nine", "ten", "ten"}, {"nine", "nine", "ten", "ten"}, {"nine", "nine", "ten", "ten"},
      {"nine", "nine", "ten", "ten"}, {"nine", "ten", "ten", "pad"}};
  for (int f = 0; f < 5; ++f) data.push_back(lexelt("w" + std::to_string(f), 4, extras[f]));
  const auto list = build_stoplist(data, 3);
  CHECK(!list.contains("nine"));
  CHECK(list.contains("ten"));
}

TEST_CASE("stoplist: all training splits empty is an error") {
  std::vector<LexeltDataset> data(5);
  for (int f = 0; f < 5; ++f) data[f].lexelt = "w" + std::to_string(f);
  CHECK_THROWS_AS(build_stoplist(data, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_stoplist({}, 1), std::invalid_argument);
}

TEST_CASE("stoplist: training data with no frequent token gives an empty list") {
  std::vector<LexeltDataset> data;
  for (int f = 0; f < 5; ++f) data.push_back(lexelt("w" + std::to_string(f), 1));
  const auto list = build_stoplist(data, 1);
  CHECK(list.words.empty());
  CHECK(stoplist_id(list) == "none");
}

TEST_CASE("stoplist: fewer eligible files than the sample size uses them all") {
  std::vector<LexeltDataset> data;
  for (int f = 0; f < 3; ++f) data.push_back(lexelt("w" + std::to_string(f), 4));
  CHECK(build_stoplist(data, 9).provenance.sampled_lexelts.size() == 3);
}

TEST_CASE("stoplist: only lexelts of comparable size are sampled") {
  std::vector<LexeltDataset> data;
  for (int f = 0; f < 6; ++f) data.push_back(lexelt("w" + std::to_string(f), 10));
  data.push_back(lexelt("huge", 200));
  data.push_back(lexelt("tiny", 2));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto list = build_stoplist(data, seed);
    REQUIRE(list.provenance.sampled_lexelts.size() == 5);
    for (const auto& l : list.provenance.sampled_lexelts) CHECK((l != "huge" && l != "tiny"));
  }
}

TEST_CASE("stoplist: deterministic per seed and monotone in min_count") {
  std::vector<LexeltDataset> data;
  Rng rng(5);
  for (int f = 0; f < 9; ++f) {
    LexeltDataset ds;
    ds.lexelt = "w" + std::to_string(f);
    for (int i = 0; i < 20; ++i) {
      std::string text;
      for (int t = 0; t < 6; ++t) text += "v" + std::to_string(rng.below(30)) + " ";
      ds.train.push_back(inst(ds.lexelt, std::to_string(i), "s", text + "[x]"));
    }
    data.push_back(std::move(ds));
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = build_stoplist(data, seed);
    const auto b = build_stoplist(data, seed);
    CHECK(a.words == b.words);
    CHECK(a.provenance.sampled_lexelts == b.provenance.sampled_lexelts);
    StopListParams lower;
    lower.min_count = 5;
    const auto c = build_stoplist(data, seed, lower);
    for (const auto& w : a.words) CHECK(c.contains(w));
  }
}

TEST_CASE("stoplist: lookup folds case") {
  StopList list;
  list.words = {"the"};
  CHECK(is_stopped("the", list));
  CHECK(is_stopped("The", list));
  CHECK(!is_stopped("rate", StopList{}));
  CHECK(!is_stopped("rate", list));
}

TEST_CASE("stoplist: file round trip and stable id") {
  StopList list;
  list.words = {"of", "the", "and", "über"};
  std::ostringstream out;
  write_stoplist(list, out);
  CHECK(out.str() == "and\nof\nthe\nüber\n");
  std::istringstream in("# comment\nTHE\n  of \n\nand\nüber\n");
  const auto back = read_stoplist(in);
  CHECK(back.words == list.words);
  CHECK(stoplist_id(back) == stoplist_id(list));
  CHECK(stoplist_id(list).rfind("sl-", 0) == 0);
}
