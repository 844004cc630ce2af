#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cclab/ast.hpp"
#include "cclab/interp.hpp"
#include "cclab/value.hpp"

namespace cclab {

// Raised for any problem that makes a corpus unusable: missing or
// malformed files, programs that fail to parse, or manifest entries
// that do not match the programs they describe.
class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TestCase {
  std::string name;
  std::vector<Value> args;
  // Declared output of the fixed program; absent when the test case
  // does not pin one.
  std::optional<std::vector<Value>> expected;
};

using LabelSet = std::set<std::string, std::less<>>;

struct VersionPair {
  std::string id;
  std::string dir;  // manifest-relative directory
  Program buggy;
  Program fixed;
  std::string defect_fn;
  std::vector<std::string> defect_sites;
  LabelSet weak_labels;
  LabelSet strong_labels;
  std::vector<TestCase> tests;
};

struct CorpusGroup {
  std::string name;
  std::vector<std::string> version_ids;  // manifest order
};

struct DrrSpec {
  std::string name;
  Program prog;
  std::vector<std::int64_t> domain;
  std::vector<std::int64_t> infected;
};

struct Corpus {
  std::vector<CorpusGroup> groups;        // manifest order
  std::vector<VersionPair> versions;      // sorted by id
  std::vector<DrrSpec> drr_specs;

  const VersionPair* find_version(const std::string& id) const;
};

// Reads `<root>/corpus.json` and everything it references.
// Throws CorpusError on any structural problem.
Corpus load_corpus(const std::string& root);

// A defect in the corpus data itself (as opposed to a subject
// failure while running an analysis): a fixed program whose output
// contradicts the declared expectation, or a version whose defect no
// bundled test can observe. These are reported, never fatal.
struct ValidationIssue {
  std::string version;
  std::string test;  // empty for version-level issues
  std::string phase;  // always "validate"
  std::string reason;
};

std::vector<ValidationIssue> validate_corpus(const Corpus& corpus,
                                             const RunLimits& limits = {});

}  // namespace cclab
