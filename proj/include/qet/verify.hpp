#pragma once

#include <string>
#include <vector>

#include "qet/scenario.hpp"

namespace qet {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

// Runtime cross-checks of the engine against independent routes for the
// fields of `s`: position-space input energy, Monte Carlo overlap, ratio
// identity over the sweep, Wick vs truncated Fock, measurement identities and
// energy conservation of the evolved frames.
std::vector<CheckResult> run_verification(const Scenario& s, unsigned workers = 1);

}  // namespace qet
