#pragma once

#include <string>
#include <vector>

namespace pinncontact::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast invariant and oracle checks (complementarity function, Hooke's law,
/// output transforms, initialisation, gradient against finite differences,
/// analytical constants). Takes a few seconds.
std::vector<CheckResult> run_verification();

} // namespace pinncontact::harness
