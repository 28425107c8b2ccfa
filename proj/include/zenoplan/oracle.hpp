#pragma once

#include <cstdint>
#include <stdexcept>

#include "zenoplan/multizeno.hpp"
#include "zenoplan/objectives.hpp"

namespace zenoplan {

struct OracleLimits {
    std::uint64_t max_nodes = 40'000'000; // DFS step cap before giving up (~1 minute)
};

class OracleTimeout : public std::runtime_error {
public:
    explicit OracleTimeout(const std::string& what) : std::runtime_error(what) {}
};

/// Exact Pareto front of a two-plane instance. Canonical specs return the
/// stored reference table (validated against the search oracle by tests);
/// anything else is computed by pattern_oracle_front and may throw
/// OracleTimeout at scales the exhaustive search cannot finish.
ParetoFront exact_front(const ZenoSpec& spec, const OracleLimits& limits = {});

/// Independent search oracle: enumerates per-passenger routing patterns
/// (which central city each passenger transits) and, per pattern, exhausts
/// all two-plane leg schedules - loaded legs, empty repositioning legs,
/// relay pickups, waiting - with memoized dominance pruning. Collects every
/// (makespan, cost) outcome and keeps the nondominated set. Terminates at
/// desk scale up to six passengers; nine need the composition below.
ParetoFront pattern_oracle_front(const ZenoSpec& spec, const OracleLimits& limits = {});

/// Bunch-composition oracle: exhausts all three-passenger schedules that
/// leave both planes at the far hub, then enumerates every composition of
/// such bunches joined by per-plane return legs. Each composed point is
/// achievable by construction (see composed_shuttle_plan); the enumeration
/// reproduces the full search oracle exactly at three and six passengers.
ParetoFront bunch_composition_front(const ZenoSpec& spec, const OracleLimits& limits = {});

/// Stored reference front for canonical specs (tax2 = 2, passengers 3/6/9);
/// empty result when the spec is not one of the stored instances.
ParetoFront stored_reference_front(const ZenoSpec& spec);

} // namespace zenoplan
