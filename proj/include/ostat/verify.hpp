#pragma once

#include "ostat/montecarlo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ostat {

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    bool pass = false;
    std::vector<CheckResult> checks;
    // Primary experiment behind the suite, when there is one, for the
    // summary document.
    std::optional<ExperimentConfig> config;
    std::optional<ExperimentResult> result;
};

// Overrides for a named suite; zero/empty fields keep the suite default.
struct SuiteOptions {
    SeedSpec seed;
    int workers = 0;
    std::size_t n = 0;
    std::size_t trials = 0;
    double t = 0.0;
    double T = 0.0;
    std::optional<std::size_t> omega;
};

// Named verification suites:
//   lemma2   - simultaneous additive-band coverage vs its nominal bound
//   lemma1   - simultaneous ratio-band coverage vs its nominal bound
//   theorem2 - trimmed vs full sup deviation
//   theorem4 - sup-deviation rate across scales for the normal law
//   metric   - theta_p metric axioms on random triples
//   sampler  - spacings sampler moments + sort-oracle equivalence
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

std::vector<std::string> suite_names();

} // namespace ostat
