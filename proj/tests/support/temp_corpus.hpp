#pragma once

// Builders for throwaway corpora. Tests that exercise loader errors or
// runner exit codes write a corpus into a scratch directory and point
// the library at it.

#include <filesystem>
#include <string>
#include <vector>

#include "support/paths.hpp"

namespace testsupport {

struct ScratchVersion {
  std::string dir;  // manifest-relative
  std::string buggy_src;
  std::string fixed_src;
  std::string version_json;  // full version.json body
  std::string tests_json;    // full tests.json body
};

// Writes corpus.json plus one directory per version, all in a fresh
// scratch root, and returns that root.
inline std::filesystem::path scratch_corpus(const std::string& tag,
                                            const std::vector<ScratchVersion>& versions) {
  const auto root = fresh_dir(tag);
  std::string manifest = "{\n  \"groups\": [\n    { \"name\": \"g\", \"versions\": [";
  for (std::size_t i = 0; i < versions.size(); ++i) {
    if (i) manifest += ", ";
    manifest += "\"" + versions[i].dir + "\"";
  }
  manifest += "] }\n  ]\n}\n";
  write_file(root / "corpus.json", manifest);
  for (const auto& v : versions) {
    const auto dir = root / v.dir;
    write_file(dir / "buggy.mini", v.buggy_src);
    write_file(dir / "fixed.mini", v.fixed_src);
    write_file(dir / "version.json", v.version_json);
    write_file(dir / "tests.json", v.tests_json);
  }
  return root;
}

// A well-formed single-version corpus: defect `let y = n * 2` against
// the repaired `let y = n * 3`, observable at n=1.
inline ScratchVersion simple_version(const std::string& dir = "v1",
                                     const std::string& id = "v1") {
  ScratchVersion v;
  v.dir = dir;
  v.buggy_src =
      "fn main(n) {\n"
      "  let y = n * 2;\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let good = n * 3; } when (y != good);\n"
      "  output(y);\n"
      "}\n";
  v.fixed_src =
      "fn main(n) {\n"
      "  let y = n * 3;\n"
      "  output(y);\n"
      "}\n";
  v.version_json =
      "{ \"id\": \"" + id + "\", \"buggy\": \"buggy.mini\", \"fixed\": \"fixed.mini\",\n"
      "  \"defect_fn\": \"main\", \"defect_sites\": [\"L1\"],\n"
      "  \"weak_labels\": [\"W1\"], \"strong_labels\": [\"S1\"], \"tests\": \"tests.json\" }\n";
  v.tests_json =
      "[ { \"name\": \"z\", \"args\": [0], \"expected_output\": [0] },\n"
      "  { \"name\": \"one\", \"args\": [1], \"expected_output\": [3] } ]\n";
  return v;
}

// A version whose buggy program never terminates: the runner must
// report it and keep going.
inline ScratchVersion runaway_version(const std::string& dir = "v2",
                                      const std::string& id = "v2") {
  ScratchVersion v = simple_version(dir, id);
  v.buggy_src =
      "fn main(n) {\n"
      "  let y = n * 2;\n"
      "  probe \"W1\";\n"
      "  check \"S1\" { let good = n * 3; } when (y != good);\n"
      "  while (0 < 1) { y = y + 0; }\n"
      "  output(y);\n"
      "}\n";
  return v;
}

}  // namespace testsupport
