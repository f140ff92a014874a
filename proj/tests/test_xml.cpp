#include <doctest.h>

#include "wsd/corpus.hpp"

using namespace wsd;

namespace {

XmlReadResult parse(std::string_view doc, Split split = Split::train) { return read_senseval_xml(doc, {}, split); }

}  // namespace

TEST_CASE("xml: minimal instance puts the head word at the target index") {
  const auto r = parse(R"(<corpus lang="english"><lexelt item="art.n">
<instance id="art.40001"><answer instance="art.40001" senseid="arts%1:06:00::"/>
<context><head>art</head> gallery</context></instance></lexelt></corpus>)");
  REQUIRE(r.lexelts.size() == 1);
  const auto& ds = r.lexelts[0];
  CHECK(ds.lexelt == "art.n");
  REQUIRE(ds.train.size() == 1);
  CHECK(ds.train[0].tokens == std::vector<Token>{"art", "gallery"});
  CHECK(ds.train[0].target_index == 0);
  CHECK(ds.train[0].gold_senses == std::vector<std::string>{"arts%1:06:00::"});
  CHECK(r.skipped == 0);
}

TEST_CASE("xml: empty document and document without instances") {
  CHECK(parse("").lexelts.empty());
  CHECK(parse("<corpus lang='en'></corpus>").lexelts.empty());
  CHECK(parse("<corpus><lexelt item='x.n'></lexelt></corpus>").lexelts.empty());
}

TEST_CASE("xml: two answers give two gold senses") {
  const auto r = parse(R"(<lexelt item="x.n"><instance id="1">
<answer instance="1" senseid="a"/><answer instance="1" senseid="b"/>
<context>some <head>x</head> here</context></instance></lexelt>)");
  REQUIRE(r.lexelts.size() == 1);
  CHECK(r.lexelts[0].train[0].gold_senses == std::vector<std::string>{"a", "b"});
}

TEST_CASE("xml: instances without a head are skipped and counted") {
  const auto r = parse(R"(<lexelt item="x.n">
<instance id="1"><answer instance="1" senseid="a"/><context>no head here</context></instance>
<instance id="2"><answer instance="2" senseid="a"/><context>a <head>x</head></context></instance>
<instance id="3"><answer instance="3" senseid="a"/><context>a <head> ... </head> b</context></instance>
</lexelt>)");
  REQUIRE(r.lexelts.size() == 1);
  CHECK(r.lexelts[0].train.size() == 1);
  CHECK(r.lexelts[0].train[0].id == "2");
  CHECK(r.skipped == 2);
}

TEST_CASE("xml: test split keeps unlabeled instances, training split skips them") {
  const std::string doc = R"(<lexelt item="x.n"><instance id="t1"><context>the <head>X</head>, fine</context></instance></lexelt>)";
  const auto test = parse(doc, Split::test);
  REQUIRE(test.lexelts.size() == 1);
  CHECK(test.lexelts[0].test.size() == 1);
  CHECK(test.lexelts[0].test[0].gold_senses.empty());
  CHECK(test.lexelts[0].test[0].tokens == std::vector<Token>{"the", "x", "fine"});
  CHECK(test.lexelts[0].test[0].target_index == 1);

  const auto train = parse(doc, Split::train);
  CHECK(train.lexelts.empty());
  CHECK(train.skipped == 1);
}

TEST_CASE("xml: entities, comments, extra markup and multi-word heads") {
  const auto r = parse(R"(<?xml version="1.0"?>
<!DOCTYPE corpus SYSTEM "lexical-sample.dtd">
<!-- a comment with <head>fake</head> inside -->
<corpus><lexelt item='sea.n'><instance id=s1 docsrc="bnc">
<answer instance="s1" senseid="s%1"/>
<context><s>Fish &amp; chips by the <head>Open Sea</head> &lt;end&gt; &#233;t&#xE9; &nbsp;</s></context>
</instance></lexelt></corpus>)");
  REQUIRE(r.lexelts.size() == 1);
  const auto& in = r.lexelts[0].train[0];
  CHECK(in.tokens == std::vector<Token>{"fish", "chips", "by", "the", "open_sea", "end", "été"});
  CHECK(in.tokens[in.target_index] == "open_sea");
}

TEST_CASE("xml: several lexelts in one document") {
  const auto r = parse(R"(<corpus>
<lexelt item="a.n"><instance id="1"><answer instance="1" senseid="s"/><context><head>a</head></context></instance></lexelt>
<lexelt item="b.v"><instance id="1"><answer instance="1" senseid="t"/><context><head>b</head></context></instance></lexelt>
</corpus>)");
  REQUIRE(r.lexelts.size() == 2);
  CHECK(r.lexelts[0].lexelt == "a.n");
  CHECK(r.lexelts[1].lexelt == "b.v");
}

TEST_CASE("xml: bad markup is a parse error") {
  CHECK_THROWS_AS(parse("<lexelt item='x'><instance id='1'><context><head>x</head>"), ParseError);
  CHECK_THROWS_AS(parse("<instance id='1'></instance>"), ParseError);
  CHECK_THROWS_AS(parse("<lexelt item='x'><instance id='1'><instance id='2'>"), ParseError);
  CHECK_THROWS_AS(parse("<lexelt item='x'><instance id='1'><context><head>x</context></instance></lexelt>"),
                  ParseError);
  CHECK_THROWS_AS(parse("<lexelt item='x'><instance id='1'><context>unterminated <head"), ParseError);
  CHECK_THROWS_AS(parse("<lexelt><instance id='1'></instance></lexelt>"), ParseError);
}

TEST_CASE("xml: duplicate instance ids are rejected") {
  CHECK_THROWS_AS(parse(R"(<lexelt item="x">
<instance id="1"><answer instance="1" senseid="a"/><context><head>x</head></context></instance>
<instance id="1"><answer instance="1" senseid="a"/><context><head>x</head></context></instance></lexelt>)"),
                  ValidationError);
}

TEST_CASE("xml: every produced instance satisfies the instance invariants") {
  const auto r = parse(R"(<lexelt item="x">
<instance id="1"><answer instance="1" senseid="a"/><context><head>x</head></context></instance>
<instance id="2"><answer instance="2" senseid="a"/><context>left , words <head>X</head></context></instance>
<instance id="3"><answer instance="3" senseid="b"/><context>... <head>x</head> ... right</context></instance>
</lexelt>)");
  REQUIRE(r.lexelts.size() == 1);
  CHECK_NOTHROW(validate(r.lexelts[0]));
  for (const auto& in : r.lexelts[0].train) {
    CHECK(in.target_index < in.tokens.size());
    CHECK(in.tokens[in.target_index] == "x");
  }
}
