#pragma once

#include "ostat/envelopes.hpp"
#include "ostat/montecarlo.hpp"
#include "ostat/sampler.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ostat {

// Shortest round-trip decimal form of a double; infinities serialize as
// "inf"/"-inf". Deterministic across runs and platforms.
std::string format_double(double v);

// Header exactly: index,q,x_star,lower,upper
std::string envelope_to_csv(const Envelope& env);

// Header: index,value
std::string sample_to_csv(const SortedSample& sample);

// Header: n,median_sup_dev,ratio
std::string rate_table_to_csv(const std::vector<RateRow>& rows);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
nlohmann::ordered_json band_spec_to_json(const BandSpec& spec);

// {"config":..., "coverage": {...}|null, "deviation": {...}}
nlohmann::ordered_json summary_json(const ExperimentConfig& config,
                                    const ExperimentResult& result);

// One line per trial: {"trial":k,"sup_dev":x,"trimmed_sup_dev":y|null,
// "covered":b|null}
std::string trial_records_to_jsonl(const std::vector<TrialRecord>& records);

// Writes via a temp file and rename, so readers never observe a partial
// file. Throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace ostat
