#include "cclab/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "cclab/parse.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cclab {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

json read_json(const fs::path& path) {
  json j = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw CorpusError("malformed JSON in " + path.string());
  return j;
}

Program parse_file(const fs::path& path) {
  try {
    return parse_program(read_file(path));
  } catch (const ParseError& e) {
    // e.what() already carries "line:col:" when the position is known.
    throw CorpusError(path.string() + ": " + e.what());
  }
}

Value literal_value(const json& j, const fs::path& path) {
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  throw CorpusError(path.string() + ": literal must be an integer or boolean");
}

const json& require(const json& j, const char* key, const fs::path& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw CorpusError(path.string() + ": missing key '" + key + "'");
  }
  return *it;
}

std::vector<TestCase> load_tests(const fs::path& path) {
  json j = read_json(path);
  if (!j.is_array()) throw CorpusError(path.string() + ": expected an array");
  std::vector<TestCase> tests;
  std::set<std::string> seen;
  for (const json& tc : j) {
    TestCase t;
    t.name = require(tc, "name", path).get<std::string>();
    if (!seen.insert(t.name).second) {
      throw CorpusError(path.string() + ": duplicate test '" + t.name + "'");
    }
    for (const json& a : require(tc, "args", path)) {
      t.args.push_back(literal_value(a, path));
    }
    if (auto it = tc.find("expected_output"); it != tc.end()) {
      std::vector<Value> exp;
      for (const json& v : *it) exp.push_back(literal_value(v, path));
      t.expected = std::move(exp);
    }
    tests.push_back(std::move(t));
  }
  return tests;
}

VersionPair load_version(const fs::path& root, const std::string& rel) {
  fs::path vdir = root / rel;
  fs::path vpath = vdir / "version.json";
  json vj = read_json(vpath);

  VersionPair vp;
  vp.id = require(vj, "id", vpath).get<std::string>();
  vp.dir = rel;
  vp.buggy = parse_file(vdir / require(vj, "buggy", vpath).get<std::string>());
  vp.fixed = parse_file(vdir / require(vj, "fixed", vpath).get<std::string>());
  vp.defect_fn = require(vj, "defect_fn", vpath).get<std::string>();
  for (const json& s : require(vj, "defect_sites", vpath)) {
    vp.defect_sites.push_back(s.get<std::string>());
  }
  for (const json& w : require(vj, "weak_labels", vpath)) {
    vp.weak_labels.insert(w.get<std::string>());
  }
  for (const json& s : require(vj, "strong_labels", vpath)) {
    vp.strong_labels.insert(s.get<std::string>());
  }
  vp.tests = load_tests(vdir / require(vj, "tests", vpath).get<std::string>());

  // Structural consistency between the manifest and the programs.
  if (!vp.buggy.find_function(vp.defect_fn) || !vp.fixed.find_function(vp.defect_fn)) {
    throw CorpusError(vp.id + ": defect function '" + vp.defect_fn +
                      "' missing from buggy or fixed program");
  }
  std::set<std::string_view> ids, probes, checks;
  for_each_stmt(vp.buggy, [&](const Stmt& st, bool) {
    ids.insert(st.id);
    if (st.tag == Stmt::Tag::Probe) probes.insert(st.name);
    if (st.tag == Stmt::Tag::Check) checks.insert(st.name);
  });
  for (const std::string& s : vp.defect_sites) {
    if (!ids.count(s)) throw CorpusError(vp.id + ": defect site " + s + " missing");
  }
  for (const std::string& w : vp.weak_labels) {
    if (!probes.count(w)) throw CorpusError(vp.id + ": weak label " + w + " missing");
  }
  for (const std::string& s : vp.strong_labels) {
    if (!checks.count(s)) throw CorpusError(vp.id + ": strong label " + s + " missing");
  }
  bool fixed_clean = true;
  for_each_stmt(vp.fixed, [&](const Stmt& st, bool) {
    if (st.tag == Stmt::Tag::Probe || st.tag == Stmt::Tag::Check) fixed_clean = false;
  });
  if (!fixed_clean) {
    throw CorpusError(vp.id + ": fixed program contains probes or checks");
  }
  if (vp.tests.empty()) throw CorpusError(vp.id + ": no tests declared");
  return vp;
}

std::vector<DrrSpec> load_drr_specs(const fs::path& root, const std::string& rel) {
  fs::path spath = root / rel;
  json sj = read_json(spath);
  if (!sj.is_array()) throw CorpusError(spath.string() + ": expected an array");
  std::vector<DrrSpec> specs;
  for (const json& s : sj) {
    DrrSpec spec;
    spec.name = require(s, "name", spath).get<std::string>();
    spec.prog = parse_file(spath.parent_path() /
                           require(s, "program", spath).get<std::string>());
    for (const json& v : require(s, "domain", spath)) {
      spec.domain.push_back(v.get<std::int64_t>());
    }
    if (spec.domain.empty()) {
      throw CorpusError(spec.name + ": DRR spec declares an empty domain");
    }
    for (const json& v : require(s, "infected", spath)) {
      spec.infected.push_back(v.get<std::int64_t>());
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace

const VersionPair* Corpus::find_version(const std::string& id) const {
  for (const VersionPair& vp : versions) {
    if (vp.id == id) return &vp;
  }
  return nullptr;
}

Corpus load_corpus(const std::string& root_str) {
  fs::path root(root_str);
  fs::path mpath = root / "corpus.json";
  json manifest = read_json(mpath);

  Corpus corpus;
  std::set<std::string> seen_ids;
  for (const json& g : require(manifest, "groups", mpath)) {
    CorpusGroup group;
    group.name = require(g, "name", mpath).get<std::string>();
    for (const json& rel : require(g, "versions", mpath)) {
      VersionPair vp = load_version(root, rel.get<std::string>());
      if (!seen_ids.insert(vp.id).second) {
        throw CorpusError("duplicate version id '" + vp.id + "'");
      }
      group.version_ids.push_back(vp.id);
      corpus.versions.push_back(std::move(vp));
    }
    corpus.groups.push_back(std::move(group));
  }
  std::sort(corpus.versions.begin(), corpus.versions.end(),
            [](const VersionPair& a, const VersionPair& b) { return a.id < b.id; });

  if (auto it = manifest.find("drr_specs"); it != manifest.end()) {
    corpus.drr_specs = load_drr_specs(root, it->get<std::string>());
  }
  return corpus;
}

std::vector<ValidationIssue> validate_corpus(const Corpus& corpus,
                                             const RunLimits& limits) {
  std::vector<ValidationIssue> issues;
  for (const VersionPair& vp : corpus.versions) {
    bool observable = false;
    for (const TestCase& t : vp.tests) {
      Trace bt = run_program(vp.buggy, t.args, limits);
      Trace ft = run_program(vp.fixed, t.args, limits);
      if (bt.ok && ft.ok &&
          (bt.output != ft.output || bt.entry_return != ft.entry_return)) {
        observable = true;
      }
      if (!t.expected) continue;
      if (!ft.ok) {
        issues.push_back({vp.id, t.name, "validate",
                          "fixed program failed: " + ft.error});
      } else if (ft.output != *t.expected) {
        issues.push_back({vp.id, t.name, "validate",
                          "fixed output does not match declared expected output"});
      }
    }
    if (!observable) {
      issues.push_back({vp.id, "", "validate", "defect not observable by any test"});
    }
  }
  return issues;
}

}  // namespace cclab
