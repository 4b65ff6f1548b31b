#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topo {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::vector<std::string> lines;
};

// Self-check suites behind the `validate` CLI command. Each prints one line
// per check; the suite passes only if every check does.
SuiteResult validate_oracle(uint64_t seed);
SuiteResult validate_assignment(uint64_t seed);
SuiteResult validate_lemma2(uint64_t seed);
SuiteResult validate_lemma3(uint64_t seed);
SuiteResult validate_perf(uint64_t seed);

std::vector<SuiteResult> validate_all(uint64_t seed);

}  // namespace topo
