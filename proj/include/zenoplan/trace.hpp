#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zenoplan/objectives.hpp"

namespace zenoplan {

/// One per-generation record of an evolutionary run. `t` is deterministic
/// virtual time (embedded-planner work units over a fixed rate), so a rerun
/// with the same seed reproduces the trace byte for byte. `points` are the
/// objective values of the feasible individuals in the population.
struct TraceSnapshot {
    Rat t;
    std::uint64_t evals;
    Rat best_fitness;
    std::vector<ObjectivePoint> points;
};

struct RunTrace {
    std::vector<TraceSnapshot> snapshots;
};

/// JSON-lines serialization, one snapshot per line:
///   {"t":1.25,"evals":120,"best":8,"points":[[8,12],[16,8]]}
/// Numbers are exact decimal text (Rat::to_string), so reading them back
/// loses nothing. `header` lines are written first, prefixed with '#'; the
/// reader skips '#' lines.
void write_trace_jsonl(std::ostream& os, const RunTrace& trace,
                       const std::vector<std::string>& header = {});
RunTrace read_trace_jsonl(std::istream& is);

} // namespace zenoplan
