#include "cclab/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fs = std::filesystem;

namespace cclab {

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : path_(path) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    out_.open(p, std::ios::binary);  // binary: keep LF on every platform
    if (!out_) throw std::runtime_error("cannot write " + path);
  }

  ~CsvWriter() { out_.flush(); }

  CsvWriter& field(const std::string& s) {
    sep();
    out_ << csv_escape(s);
    return *this;
  }
  CsvWriter& field(std::string_view s) { return field(std::string(s)); }
  CsvWriter& field(const char* s) { return field(std::string(s)); }
  CsvWriter& field(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& field(bool v) {
    sep();
    out_ << (v ? "true" : "false");
    return *this;
  }
  CsvWriter& field(const Rational& r) { return field(render3(r)); }
  CsvWriter& num3(double v) { return field(render3(v)); }
  template <typename T>
  CsvWriter& field(const std::optional<T>& v) {
    if (v) return field(*v);
    sep();
    return *this;
  }
  CsvWriter& empty() {
    sep();
    return *this;
  }

  void endrow() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::string path_;
  std::ofstream out_;
  bool first_ = true;
};

void write_box_fields(CsvWriter& w, const BoxStats& bs) {
  w.field(bs.n)
      .num3(bs.min)
      .num3(bs.q1)
      .num3(bs.median)
      .num3(bs.q3)
      .num3(bs.max)
      .num3(bs.whisker_low)
      .num3(bs.whisker_high)
      .field(static_cast<std::int64_t>(bs.outliers.size()));
}

nlohmann::json value_json(const Value& v) {
  if (v.is_bool()) return v.b;
  return v.i;
}

nlohmann::json state_json(const PartialState& st, const char* prefix) {
  nlohmann::json j;
  nlohmann::json assigns = nlohmann::json::object();
  for (const auto& [key, val] : st.assigns) assigns[key] = value_json(val);
  j[std::string(prefix) + "_assigns"] = std::move(assigns);
  j[std::string(prefix) + "_return"] =
      st.ret ? value_json(*st.ret) : nlohmann::json(nullptr);
  return j;
}

void dump_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::string csv_escape(const std::string& field) {
  const bool needs_quote =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_classification_csv(const std::string& path,
                              const std::vector<ClassificationRecord>& records) {
  CsvWriter w(path);
  w.field("version").field("test").field("label").field("reach_count")
      .field("infect_count").field("oracle_pass").field("in_tbug");
  w.endrow();
  for (const ClassificationRecord& r : records) {
    w.field(r.version).field(r.test).field(to_string(r.label))
        .field(r.reach_count).field(r.infect_count).field(r.oracle_pass)
        .field(r.in_tbug);
    w.endrow();
  }
}

void write_prevalence_json(const std::string& path, const PrevalenceSummary& s) {
  using ojson = nlohmann::ordered_json;
  auto ratio = [](const std::optional<Rational>& r) -> ojson {
    if (!r) return nullptr;
    return render3(*r);
  };
  ojson j;
  j["counts"] = {{"fail", s.fail},
                 {"strong_cc", s.strong_cc},
                 {"weak_cc", s.weak_cc},
                 {"true_passing_in_tbug", s.true_passing_in_tbug},
                 {"true_passing", s.true_passing}};
  j["denominators"] = {{"t_bug", s.t_bug}, {"total", s.total}};
  j["ratios"] = {{"strong_over_fail", ratio(s.strong_over_fail())},
                 {"weak_over_fail", ratio(s.weak_over_fail())},
                 {"strong_over_tbug", ratio(s.strong_over_tbug())},
                 {"weak_over_tbug", ratio(s.weak_over_tbug())},
                 {"strong_over_total", ratio(s.strong_over_total())},
                 {"weak_over_total", ratio(s.weak_over_total())}};
  dump_json(path, j);
}

void write_levels_csv(const std::string& path,
                      const std::vector<LevelRecord>& levels) {
  CsvWriter w(path);
  w.field("version").field("test").field("level_count").field("level_freq");
  w.endrow();
  for (const LevelRecord& l : levels) {
    w.field(l.version).field(l.test).field(l.level_count).field(l.level_freq);
    w.endrow();
  }
}

namespace {

void bins_header(CsvWriter& w) {
  w.field("mode").field("scale").field("bin_index").field("lo").field("hi")
      .field("fail").field("strong").field("weak").field("strong_over_fail")
      .field("weak_over_fail").field("cc_over_fail");
  w.endrow();
}

}  // namespace

void write_level_bins_csv(const std::string& path,
                          const std::vector<LevelBin>& count_bins,
                          const std::vector<LevelBin>& freq_bins) {
  CsvWriter w(path);
  bins_header(w);
  auto rows = [&w](const char* mode, const std::vector<LevelBin>& bins) {
    for (const LevelBin& b : bins) {
      w.field(mode).field("linear").field(b.bin_index).field(b.lo).field(b.hi)
          .field(b.fail).field(b.strong).field(b.weak)
          .field(b.strong_over_fail()).field(b.weak_over_fail())
          .field(b.cc_over_fail());
      w.endrow();
    }
  };
  rows("count", count_bins);
  rows("freq", freq_bins);
}

void write_level_bins_log_csv(const std::string& path,
                              const std::vector<LogLevelBin>& count_bins,
                              const std::vector<LogLevelBin>& freq_bins) {
  CsvWriter w(path);
  bins_header(w);
  auto rows = [&w](const char* mode, const std::vector<LogLevelBin>& bins) {
    for (const LogLevelBin& b : bins) {
      w.field(mode).field("log").field(b.bin_index);
      w.num3(b.lo).num3(b.hi);
      w.field(b.fail).field(b.strong).field(b.weak)
          .field(b.strong_over_fail()).field(b.weak_over_fail())
          .field(b.cc_over_fail());
      w.endrow();
    }
  };
  rows("count", count_bins);
  rows("freq", freq_bins);
}

void write_level_box_csv(const std::string& path,
                         const std::vector<LevelBoxRow>& rows) {
  CsvWriter w(path);
  w.field("group").field("measure").field("n").field("min").field("q1")
      .field("median").field("q3").field("max").field("whisker_low")
      .field("whisker_high").field("outlier_count");
  w.endrow();
  for (const LevelBoxRow& r : rows) {
    w.field(r.group).field(r.measure);
    write_box_fields(w, r.stats);
    w.endrow();
  }
}

void write_propagation_csv(const std::string& path,
                           const std::vector<PropagationRow>& rows) {
  CsvWriter w(path);
  w.field("version").field("test").field("label").field("kind").field("unique")
      .field("total");
  w.endrow();
  for (const PropagationRow& r : rows) {
    w.field(r.version).field(r.test).field(to_string(r.label))
        .field(to_string(r.kind)).field(r.unique).field(r.total);
    w.endrow();
  }
}

void write_propagation_box_csv(const std::string& path,
                               const std::vector<PropagationBoxRow>& rows) {
  CsvWriter w(path);
  w.field("label").field("kind").field("counter").field("n").field("min")
      .field("q1").field("median").field("q3").field("max")
      .field("whisker_low").field("whisker_high").field("outlier_count");
  w.endrow();
  for (const PropagationBoxRow& r : rows) {
    w.field(to_string(r.label)).field(to_string(r.kind)).field(r.counter);
    if (r.stats) {
      write_box_fields(w, *r.stats);
    } else {
      w.field(std::int64_t{0});
      for (int i = 0; i < 8; ++i) w.empty();
    }
    w.endrow();
  }
}

void write_nullification_csv(const std::string& path,
                             const std::vector<NullificationRow>& rows) {
  CsvWriter w(path);
  w.field("version").field("test").field("N").field("category");
  w.endrow();
  for (const NullificationRow& r : rows) {
    w.field(r.version).field(r.test).field(r.n).field(to_string(r.category));
    w.endrow();
  }
}

void write_nullification_summary_csv(
    const std::string& path, const std::vector<NullificationSummaryRow>& rows) {
  CsvWriter w(path);
  w.field("version").field("t_cchigh").field("avg_n").field("in").field("out")
      .field("in_out").field("anomalous").field("misaligned");
  w.endrow();
  for (const NullificationSummaryRow& r : rows) {
    w.field(r.version).field(r.t_cchigh).field(r.avg_n).field(r.in)
        .field(r.out).field(r.in_out).field(r.anomalous).field(r.misaligned);
    w.endrow();
  }
}

void write_states_json(const std::string& dir, const NullificationRow& row) {
  for (const ActivationRecord& a : row.activations) {
    nlohmann::json j;
    j["i"] = a.index;
    j["fired"] = a.fired;
    j["equal"] = a.equal;
    j["label"] = to_string(a.label);
    j.update(state_json(a.buggy, "buggy"));
    j.update(state_json(a.fixed, "fixed"));
    dump_json(fs::path(dir) / row.version / row.test /
                  (std::to_string(a.index) + ".json"),
              j);
  }
}

void write_drr_csv(const std::string& path, const std::vector<DrrResult>& rows) {
  CsvWriter w(path);
  w.field("spec").field("domain_size").field("range_size").field("drr")
      .field("masking_rate");
  w.endrow();
  for (const DrrResult& r : rows) {
    w.field(r.spec).field(r.domain_size).field(r.range_size).field(r.drr)
        .field(r.masking_rate);
    w.endrow();
  }
}

void write_suspiciousness_csv(const std::string& path,
                              const std::vector<SuspiciousnessRow>& rows) {
  CsvWriter w(path);
  w.field("version").field("variant").field("metric").field("stmt")
      .field("score").field("defect_rank");
  w.endrow();
  for (const SuspiciousnessRow& r : rows) {
    w.field(r.version).field(to_string(r.variant)).field(to_string(r.metric))
        .field(r.stmt);
    w.num3(r.score);
    w.field(r.defect_rank);
    w.endrow();
  }
}

void write_outcomes_csv(const std::string& path,
                        const std::vector<OutcomeRow>& rows) {
  CsvWriter w(path);
  w.field("version").field("variant").field("outcome_index").field("tests")
      .field("truncated");
  w.endrow();
  for (const OutcomeRow& r : rows) {
    for (std::size_t i = 0; i < r.outcomes.items.size(); ++i) {
      std::string joined;
      for (std::size_t k = 0; k < r.outcomes.items[i].size(); ++k) {
        if (k > 0) joined += ' ';
        joined += r.outcomes.items[i][k];
      }
      w.field(r.version).field(to_string(r.variant))
          .field(static_cast<std::int64_t>(i)).field(joined)
          .field(r.outcomes.truncated);
      w.endrow();
    }
  }
}

void write_corpus_stats_csv(const std::string& path,
                            const std::vector<CorpusStatsRow>& rows) {
  CsvWriter w(path);
  w.field("group").field("versions").field("t_min").field("t_max")
      .field("t_avg").field("t_sum").field("tbug_min").field("tbug_max")
      .field("tbug_avg").field("tbug_sum");
  w.endrow();
  for (const CorpusStatsRow& r : rows) {
    w.field(r.group).field(r.versions).field(r.t_min).field(r.t_max)
        .field(r.t_avg).field(r.t_sum).field(r.tbug_min).field(r.tbug_max)
        .field(r.tbug_avg).field(r.tbug_sum);
    w.endrow();
  }
}

void write_subject_errors_csv(const std::string& path,
                              const std::vector<SubjectError>& errors) {
  CsvWriter w(path);
  w.field("version").field("test").field("phase").field("reason");
  w.endrow();
  for (const SubjectError& e : errors) {
    w.field(e.version).field(e.test).field(e.phase).field(e.reason);
    w.endrow();
  }
}

}  // namespace cclab
