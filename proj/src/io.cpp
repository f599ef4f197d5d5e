#include "ostat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ostat {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string envelope_to_csv(const Envelope& env) {
    std::string out = "index,q,x_star,lower,upper\n";
    for (std::size_t i = 1; i <= env.n; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(env.n + 1);
        out += std::to_string(i);
        out += ',';
        out += format_double(q);
        out += ',';
        out += format_double(env.reference[i - 1]);
        out += ',';
        out += format_double(env.lower[i - 1]);
        out += ',';
        out += format_double(env.upper[i - 1]);
        out += '\n';
    }
    return out;
}

std::string sample_to_csv(const SortedSample& sample) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(sample.values[i]);
        out += '\n';
    }
    return out;
}

std::string rate_table_to_csv(const std::vector<RateRow>& rows) {
    std::string out = "n,median_sup_dev,ratio\n";
    for (const auto& row : rows) {
        out += std::to_string(row.n);
        out += ',';
        out += format_double(row.median_sup_dev);
        out += ',';
        out += format_double(row.ratio);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json band_spec_to_json(const BandSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = band_kind_name(spec.kind);
    switch (spec.kind) {
        case BandKind::Ratio: j["T"] = spec.T; break;
        case BandKind::Additive: j["t"] = spec.t; break;
        case BandKind::SupLogConcave:
            j["p"] = spec.p;
            j["c"] = spec.c;
            if (spec.c_prob) j["c_prob"] = *spec.c_prob;
            if (spec.q_param) j["q"] = *spec.q_param;
            break;
        case BandKind::SupUniformWidth:
            j["k"] = spec.k;
            j["T"] = spec.T;
            break;
    }
    return j;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["dist"] = config.model.name();
    j["n"] = config.n;
    j["trials"] = config.trials;
    j["seed"] = config.seed.master_seed;
    j["trial_offset"] = config.seed.trial_index;
    j["band"] = config.band ? band_spec_to_json(*config.band) : nlohmann::ordered_json(nullptr);
    j["trim"] = config.trim ? nlohmann::ordered_json(*config.trim) : nlohmann::ordered_json(nullptr);
    return j;
}

nlohmann::ordered_json summary_json(const ExperimentConfig& config,
                                    const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    if (result.coverage) {
        const CoverageReport& cov = *result.coverage;
        j["coverage"] = {{"trials", cov.trials},
                         {"hits", cov.hits},
                         {"empirical", cov.empirical},
                         {"wilson99", {cov.wilson99.first, cov.wilson99.second}},
                         {"nominal", cov.nominal}};
    } else {
        j["coverage"] = nullptr;
    }
    const DeviationSummary& dev = result.deviation;
    j["deviation"] = {{"median", dev.median},
                      {"q90", dev.q90},
                      {"q99", dev.q99},
                      {"mean", dev.mean},
                      {"max", dev.max}};
    return j;
}

std::string trial_records_to_jsonl(const std::vector<TrialRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        nlohmann::ordered_json j;
        j["trial"] = rec.trial;
        j["sup_dev"] = rec.sup_dev;
        j["trimmed_sup_dev"] =
            rec.trimmed_sup_dev ? nlohmann::ordered_json(*rec.trimmed_sup_dev) : nullptr;
        j["covered"] = rec.covered ? nlohmann::ordered_json(*rec.covered) : nullptr;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + target.string() + ": " +
                                 ec.message());
    }
}

} // namespace ostat
