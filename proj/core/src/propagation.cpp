#include "cclab/propagation.hpp"

#include <set>
#include <string_view>

namespace cclab {

PropagationProfile profile_from(const Trace& trace, std::int64_t after_seq) {
  PropagationProfile prof;
  std::array<std::set<std::string_view>, kProfileKindCount> seen;
  for (const Event& e : trace.events) {
    if (e.type != Event::Type::StmtExec || e.seq <= after_seq) continue;
    seen[0].insert(e.sid);
    ++prof.by_kind[0].total;
    for (std::size_t k = 1; k < kProfileKindCount; ++k) {
      if (e.kinds.has(static_cast<ProfileKind>(k))) {
        seen[k].insert(e.sid);
        ++prof.by_kind[k].total;
      }
    }
  }
  for (std::size_t k = 0; k < kProfileKindCount; ++k) {
    prof.by_kind[k].unique = static_cast<std::int64_t>(seen[k].size());
  }
  return prof;
}

std::optional<PropagationProfile> profile_trace(const Trace& trace) {
  for (const Event& e : trace.events) {
    if (e.type == Event::Type::CheckFired) return profile_from(trace, e.seq);
  }
  return std::nullopt;
}

}  // namespace cclab
