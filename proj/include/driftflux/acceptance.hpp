#pragma once

#include <iosfwd>

namespace driftflux {

/// Runs the full verification suite (stationary fixed point, energy
/// dissipation, Y-band, uniform convergence, decay-rate fits, oracle
/// cross-validation, exact Q-update, potential closed form, flux identity,
/// validator codes), printing one pass/fail line per criterion.
/// Returns the number of failed criteria.
int run_acceptance(std::ostream& out);

}  // namespace driftflux
