#pragma once

/**
 * verify — the cross-oracle verification suite.
 *
 * Every check pits an independent route against a closed form at a pinned
 * tolerance: Gauss-Laguerre quadrature against the moment formulas, spectral
 * propagation against the analytic mode, finite differences against
 * Hamilton's equations, random boosts against mass invariance. One
 * CheckResult per criterion; the CLI `verify` subcommand and the acceptance
 * test binary both run this list.
 */

#include <iosfwd>
#include <string>
#include <vector>

namespace twistbeam::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CheckResult> run_acceptance();

/// Run the suite, print one pass/fail line per criterion, return the number
/// of failures.
int print_acceptance_table(std::ostream& os);

} // namespace twistbeam::verify
