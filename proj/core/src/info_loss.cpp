#include "cclab/info_loss.hpp"

#include <algorithm>
#include <utility>

#include "cclab/interp.hpp"

namespace cclab {

namespace {

struct EvalFailure {
  std::string reason;
};

Value evaluate(const DrrSpec& spec, std::int64_t v, const RunLimits& limits) {
  Trace tr = run_program(spec.prog, {Value::integer(v)}, limits);
  if (!tr.ok) {
    throw EvalFailure{"evaluation failed on input " + std::to_string(v) + ": " +
                      tr.error};
  }
  if (!tr.entry_return) {
    throw EvalFailure{"no return value on input " + std::to_string(v)};
  }
  return *tr.entry_return;
}

}  // namespace

DrrOutcome drr_result(const DrrSpec& spec, const RunLimits& limits) {
  DrrOutcome out;
  try {
    // Output -> list of domain values producing it, in domain order.
    std::vector<std::pair<Value, std::vector<std::int64_t>>> image;
    auto slot_of = [&image](const Value& v) -> std::vector<std::int64_t>& {
      for (auto& [key, inputs] : image) {
        if (key == v) return inputs;
      }
      image.emplace_back(v, std::vector<std::int64_t>{});
      return image.back().second;
    };
    for (std::int64_t v : spec.domain) {
      slot_of(evaluate(spec, v, limits)).push_back(v);
    }

    DrrResult res;
    res.spec = spec.name;
    res.domain_size = static_cast<std::int64_t>(spec.domain.size());
    res.range_size = static_cast<std::int64_t>(image.size());
    res.drr = Rational(res.domain_size, res.range_size);
    std::int64_t masked = 0;
    for (std::int64_t v : spec.infected) {
      Value outv = evaluate(spec, v, limits);
      DrrResult::Mask m;
      for (std::int64_t x : slot_of(outv)) {
        if (x != v) m.colliders.push_back(x);
      }
      std::sort(m.colliders.begin(), m.colliders.end());
      m.masked = !m.colliders.empty();
      if (m.masked) ++masked;
      res.masks[v] = std::move(m);
    }
    if (!spec.infected.empty()) {
      res.masking_rate =
          Rational(masked, static_cast<std::int64_t>(spec.infected.size()));
    }
    out.result = std::move(res);
  } catch (const EvalFailure& e) {
    out.error = DrrOutcome::Error{spec.name, e.reason};
  }
  return out;
}

}  // namespace cclab
