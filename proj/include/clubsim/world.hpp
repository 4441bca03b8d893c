#pragma once

#include <span>

#include "clubsim/config.hpp"
#include "clubsim/error.hpp"
#include "clubsim/types.hpp"

namespace clubsim {

/// Builds the step-0 world: every region at its calibrated values, nobody in
/// a club, all counters zero. Throws ValidationError naming the offending
/// region and field.
WorldState new_world(std::span<const RegionParams> params, const ClimateState& climate_init,
                     const SimConfig& config);

ValidationReport validate(const ClimateState& climate);

/// Checks every type invariant of a snapshot: fractions in [0, 1], K >= 0,
/// L > 0, group ids in [0, N], counter symmetry and consistency with the
/// membership they were last updated from.
ValidationReport validate(const WorldSnapshot& snapshot);

ValidationReport validate(const WorldState& world);

}  // namespace clubsim
