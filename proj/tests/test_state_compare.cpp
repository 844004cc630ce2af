#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <string>
#include <vector>

#include "cclab/classify.hpp"
#include "cclab/corpus.hpp"
#include "cclab/state_compare.hpp"
#include "doctest.h"
#include "support/paths.hpp"
#include "support/temp_corpus.hpp"

using namespace cclab;

namespace {

ActivationRecord act(bool fired, bool equal) {
  ActivationRecord a;
  a.fired = fired;
  a.equal = equal;
  if (fired && !equal) a.label = LowLabel::LowFailing;
  else if (fired) a.label = LowLabel::LowCC;
  else if (equal) a.label = LowLabel::LowTruePassing;
  else a.label = LowLabel::Anomalous;
  return a;
}

Corpus load_sources(const std::string& tag, const std::string& buggy,
                    const std::string& fixed, const std::string& tests_json,
                    const std::string& defect_fn) {
  testsupport::ScratchVersion v;
  v.dir = "v1";
  v.buggy_src = buggy;
  v.fixed_src = fixed;
  v.version_json =
      "{ \"id\": \"v1\", \"buggy\": \"buggy.mini\", \"fixed\": \"fixed.mini\",\n"
      "  \"defect_fn\": \"" + defect_fn + "\", \"defect_sites\": [],\n"
      "  \"weak_labels\": [\"W1\"], \"strong_labels\": [\"S1\"], \"tests\": \"tests.json\" }\n";
  v.tests_json = tests_json;
  return load_corpus(testsupport::scratch_corpus(tag, {v}).string());
}

}  // namespace

TEST_CASE("category folding over activation labels") {
  using L = std::vector<ActivationRecord>;
  CHECK(categorize(L{act(true, true)}) == NullCategory::In);
  CHECK(categorize(L{act(true, false)}) == NullCategory::Out);
  CHECK(categorize(L{act(true, true), act(true, false)}) == NullCategory::InOut);
  CHECK(categorize(L{act(false, true)}) == NullCategory::In);  // nothing escaped
  CHECK(categorize(L{act(false, true), act(true, false)}) == NullCategory::Out);
  CHECK(categorize(L{act(false, false)}) == NullCategory::Anomalous);
  CHECK(categorize(L{act(true, true), act(false, false)}) == NullCategory::Anomalous);
  CHECK(std::string(to_string(NullCategory::InOut)) == "IN_OUT");
}

TEST_CASE("partial state captures last writes, nested callees, and the return") {
  const Corpus c = load_sources(
      "nested",
      "fn store(v) { let t = v * 2; return t; }\n"
      "fn work(n) {\n"
      "  let x = n;\n"
      "  x = store(n);\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let want = n * 3; } when (x != want);\n"
      "  return x;\n"
      "}\n"
      "fn main(a) { output(work(a)); }\n",
      "fn store(v) { let t = v * 3; return t; }\n"
      "fn work(n) {\n"
      "  let x = n;\n"
      "  x = store(n);\n"
      "  return x;\n"
      "}\n"
      "fn main(a) { output(work(a)); }\n",
      "[ { \"name\": \"t\", \"args\": [1] } ]\n", "work");
  const auto res = capture_states(c.versions[0], c.versions[0].buggy,
                                  c.versions[0].fixed, c.versions[0].tests[0]);
  REQUIRE(res.status == CaptureResult::Status::Ok);
  REQUIRE(res.n == 1);
  const ActivationRecord& a = res.activations[0];
  CHECK(a.index == 1);
  CHECK(a.fired);
  CHECK_FALSE(a.equal);
  CHECK(a.label == LowLabel::LowFailing);
  // The buggy activation wrote x twice (let, then assignment) and its
  // callee wrote store.t; the captured map holds the last value per
  // qualified name.
  REQUIRE(a.buggy.assigns.count("work.x") == 1);
  CHECK(a.buggy.assigns.at("work.x") == Value::integer(2));
  REQUIRE(a.buggy.assigns.count("store.t") == 1);
  CHECK(a.buggy.assigns.at("store.t") == Value::integer(2));
  REQUIRE(a.buggy.ret.has_value());
  CHECK(*a.buggy.ret == Value::integer(2));
  CHECK(a.fixed.assigns.at("work.x") == Value::integer(3));
  REQUIRE(a.fixed.ret.has_value());
  CHECK(*a.fixed.ret == Value::integer(3));
}

TEST_CASE("an entry-level defect function forms one pseudo-activation") {
  const Corpus bundled = load_corpus(testsupport::corpus_dir());
  const VersionPair* median = bundled.find_version("median");
  REQUIRE(median != nullptr);
  // t1 = (3,3,5) is the weak-CC test; its states are equal and no
  // check fires.
  const auto res = capture_states(*median, median->buggy, median->fixed,
                                  median->tests[0]);
  REQUIRE(res.status == CaptureResult::Status::Ok);
  REQUIRE(res.n == 1);
  CHECK_FALSE(res.activations[0].fired);
  CHECK(res.activations[0].equal);
  CHECK(res.activations[0].label == LowLabel::LowTruePassing);
}

TEST_CASE("activation-count disagreement is misaligned") {
  const Corpus c = load_sources(
      "misaligned",
      "fn leaf(v) {\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let want = v; } when (v != want);\n"
      "  return v;\n"
      "}\n"
      "fn main(a) { output(leaf(a) + leaf(a)); }\n",
      "fn leaf(v) { return v; }\n"
      "fn main(a) { output(leaf(a) + a); }\n",
      "[ { \"name\": \"t\", \"args\": [1] } ]\n", "leaf");
  const auto res = capture_states(c.versions[0], c.versions[0].buggy,
                                  c.versions[0].fixed, c.versions[0].tests[0]);
  CHECK(res.status == CaptureResult::Status::Misaligned);
  CHECK(res.n == 2);  // the left program activated the defect fn twice
}

TEST_CASE("re-entrant defect functions are not comparable") {
  const Corpus c = load_sources(
      "recursive",
      "fn down(n) {\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let want = n; } when (n != want);\n"
      "  if (0 < n) { return down(n - 1); }\n"
      "  return 0;\n"
      "}\n"
      "fn main(a) { output(down(a)); }\n",
      "fn down(n) { if (0 < n) { return down(n - 1); } return 0; }\n"
      "fn main(a) { output(down(a)); }\n",
      "[ { \"name\": \"t\", \"args\": [2] } ]\n", "down");
  const auto res = capture_states(c.versions[0], c.versions[0].buggy,
                                  c.versions[0].fixed, c.versions[0].tests[0]);
  CHECK(res.status == CaptureResult::Status::Recursive);
}

TEST_CASE("a runtime failure in either program is an error status") {
  const Corpus c = load_sources(
      "rt-error",
      "fn work(n) {\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let want = n; } when (n != want);\n"
      "  return n / 0;\n"
      "}\n"
      "fn main(a) { output(work(a)); }\n",
      "fn work(n) { return n; }\nfn main(a) { output(work(a)); }\n",
      "[ { \"name\": \"t\", \"args\": [1] } ]\n", "work");
  const auto res = capture_states(c.versions[0], c.versions[0].buggy,
                                  c.versions[0].fixed, c.versions[0].tests[0]);
  CHECK(res.status == CaptureResult::Status::Error);
}

TEST_CASE("bundled nullification categories match the frozen reference") {
  const Corpus corpus = load_corpus(testsupport::corpus_dir());
  const auto golden = testsupport::load_golden();
  for (const auto& e : golden.at("nullification")) {
    const VersionPair* vp = corpus.find_version(e.at("version"));
    REQUIRE(vp != nullptr);
    const TestCase* test = nullptr;
    for (const auto& t : vp->tests)
      if (t.name == e.at("test")) test = &t;
    REQUIRE(test != nullptr);
    const auto res = capture_states(*vp, vp->buggy, vp->fixed, *test);
    INFO(vp->id, "/", test->name);
    REQUIRE(res.status == CaptureResult::Status::Ok);
    CHECK(res.n == e.at("n").get<std::int64_t>());
    CHECK(std::string(to_string(categorize(res.activations))) ==
          e.at("category").get<std::string>());
    // Per-activation detail: fired/equal/label per index.
    REQUIRE(res.activations.size() == e.at("activations").size());
    for (std::size_t i = 0; i < res.activations.size(); ++i) {
      const auto& ga = e.at("activations")[i];
      CHECK(res.activations[i].fired == ga.at("fired").get<bool>());
      CHECK(res.activations[i].equal == ga.at("equal").get<bool>());
      CHECK(std::string(to_string(res.activations[i].label)) ==
            ga.at("label").get<std::string>());
    }
  }
}

TEST_CASE("self-comparison never labels an activation failing") {
  const Corpus corpus = load_corpus(testsupport::corpus_dir());
  const auto golden = testsupport::load_golden();
  int low_failing = 0;
  for (const auto& e : golden.at("nullification")) {
    const VersionPair* vp = corpus.find_version(e.at("version"));
    REQUIRE(vp != nullptr);
    for (const auto& t : vp->tests) {
      const auto res = capture_states(*vp, vp->buggy, vp->buggy, t);
      if (res.status != CaptureResult::Status::Ok) continue;
      for (const auto& a : res.activations) {
        CHECK(a.equal);
        if (a.label == LowLabel::LowFailing) ++low_failing;
      }
    }
  }
  CHECK(low_failing ==
        golden.at("self_comparison_low_failing").get<int>());
}
