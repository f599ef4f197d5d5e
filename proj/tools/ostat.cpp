// ostat: construct order-statistic envelopes, sample sorted data in linear
// time, and run reproducible Monte Carlo verification suites.
//
// Exit status: 0 success (verify: suite passed), 1 configuration error,
// 2 runtime/numerical error (verify: suite failed).

#include "ostat/envelopes.hpp"
#include "ostat/io.hpp"
#include "ostat/montecarlo.hpp"
#include "ostat/sampler.hpp"
#include "ostat/verify.hpp"
#include "ostat/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct DistOpts {
    std::string dist = "uniform";
    double mean = 0.0;
    double sd = 1.0;
    double rate = 1.0;
    double loc = 0.0;
    double scale = 1.0;
    double p = 2.0;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--dist", dist, "uniform|normal|exponential|laplace|genexp")
            ->check(CLI::IsMember({"uniform", "normal", "exponential", "laplace", "genexp"}));
        cmd->add_option("--mean", mean, "normal mean");
        cmd->add_option("--sd", sd, "normal standard deviation");
        cmd->add_option("--rate", rate, "exponential rate");
        cmd->add_option("--loc", loc, "laplace location");
        cmd->add_option("--scale", scale, "laplace scale");
        cmd->add_option("--p", p, "genexp exponent (also theta/rate exponent)");
    }

    ostat::DistributionModel build() const {
        if (dist == "uniform") return ostat::DistributionModel::uniform01();
        if (dist == "normal") return ostat::DistributionModel::normal(mean, sd);
        if (dist == "exponential") return ostat::DistributionModel::exponential(rate);
        if (dist == "laplace") return ostat::DistributionModel::laplace(loc, scale);
        if (dist == "genexp") return ostat::DistributionModel::gen_exp(p);
        throw std::invalid_argument("unknown distribution '" + dist + "'");
    }
};

// Seed precedence: --seed flag, then config file, then OSTAT_SEED, then 0.
std::uint64_t resolve_seed(const CLI::App* cmd, std::uint64_t flag_value, bool config_had_seed) {
    if (cmd->count("--seed") > 0) return flag_value;
    if (config_had_seed) return flag_value;  // overlay already stored it in the variable
    if (const char* env = std::getenv("OSTAT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("OSTAT_SEED is not an unsigned integer: " +
                                        std::string(env));
        }
    }
    return 0;
}

// Loads --config JSON (if present in argv) so its values become defaults that
// explicit flags then override.
ordered_json load_config_json(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    }
    if (path.empty()) return ordered_json::object();
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file " + path);
    ordered_json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    return j;
}

template <typename T>
void overlay(const ordered_json& j, const char* key, T& var) {
    if (j.contains(key)) var = j.at(key).get<T>();
}

void require_writable(const std::string& path) {
    if (path.empty()) return;
    std::ofstream probe(path, std::ios::app);
    if (!probe) throw std::invalid_argument("output path is not writable: " + path);
}

void write_manifest(const std::string& command, const ordered_json& config,
                    std::uint64_t master_seed, const std::vector<std::string>& outputs,
                    const std::string& started, const std::string& finished) {
    ordered_json m;
    m["tool"] = "ostat";
    m["version"] = ostat::kVersion;
    m["command"] = command;
    m["config"] = config;
    m["master_seed"] = master_seed;
    m["started_utc"] = started;
    m["finished_utc"] = finished;
    m["outputs"] = outputs;
    for (const auto& out : outputs)
        ostat::write_file_atomic(out + ".manifest.json", m.dump(2) + "\n");
}

// ---- subcommand payloads -------------------------------------------------

struct SimulateOpts {
    DistOpts dist;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::string out;
};

int run_simulate(const SimulateOpts& o, const ordered_json& file_config) {
    const std::string started = utc_timestamp();
    const auto model = o.dist.build();
    require_writable(o.out);
    ostat::RandomStream stream(ostat::SeedSpec{o.seed, o.trial});
    const auto sample = ostat::sample_order_stats(model, o.n, stream);
    const std::string csv = ostat::sample_to_csv(sample);
    if (o.out.empty()) {
        std::cout << csv;
        return 0;
    }
    ostat::write_file_atomic(o.out, csv);
    ordered_json cfg;
    cfg["dist"] = model.name();
    cfg["n"] = o.n;
    cfg["seed"] = o.seed;
    cfg["trial_index"] = o.trial;
    cfg["file_config"] = file_config;
    write_manifest("simulate", cfg, o.seed, {o.out}, started, utc_timestamp());
    std::cout << "wrote " << o.out << " (" << o.n << " sorted values from " << model.name()
              << ")\n";
    return 0;
}

struct EnvelopeOpts {
    DistOpts dist;
    std::size_t n = 0;
    std::string band = "additive";
    double T = 0.0;
    double t = 0.0;
    double c = 0.0;
    double k = 0.0;
    double c_prob = -1.0;
    double q_param = -1.0;
    std::uint64_t seed = 0;
    std::string out;
};

ostat::BandSpec band_spec_from(const EnvelopeOpts& o) {
    ostat::BandSpec spec;
    if (o.band == "ratio") {
        spec.kind = ostat::BandKind::Ratio;
        if (o.T <= 0.0) throw std::invalid_argument("ratio band requires --T > 1");
        spec.T = o.T;
    } else if (o.band == "additive") {
        spec.kind = ostat::BandKind::Additive;
        if (o.t <= 0.0) throw std::invalid_argument("additive band requires --t in (0,1)");
        spec.t = o.t;
    } else if (o.band == "sup-logconcave") {
        spec.kind = ostat::BandKind::SupLogConcave;
        if (o.c <= 0.0)
            throw std::invalid_argument("sup-logconcave band requires --c (see 'calibrate')");
        spec.p = o.dist.p;
        spec.c = o.c;
        if (o.c_prob >= 0.0) spec.c_prob = o.c_prob;
        if (o.q_param >= 0.0) spec.q_param = o.q_param;
    } else if (o.band == "sup-uniform") {
        spec.kind = ostat::BandKind::SupUniformWidth;
        if (o.k <= 0.0 || o.T <= 1.0)
            throw std::invalid_argument("sup-uniform band requires --k > 0 and --T > 1");
        spec.k = o.k;
        spec.T = o.T;
    } else {
        throw std::invalid_argument("unknown band kind '" + o.band + "'");
    }
    return spec;
}

int run_envelope(const EnvelopeOpts& o, const ordered_json& file_config) {
    const std::string started = utc_timestamp();
    const auto model = o.dist.build();
    const auto spec = band_spec_from(o);
    require_writable(o.out);
    const auto env = ostat::make_band(model, o.n, spec);
    const std::string csv = ostat::envelope_to_csv(env);
    if (o.out.empty()) {
        std::cout << csv;
        return 0;
    }
    ostat::write_file_atomic(o.out, csv);
    ordered_json cfg;
    cfg["dist"] = model.name();
    cfg["n"] = o.n;
    cfg["band"] = ostat::band_spec_to_json(spec);
    cfg["nominal_coverage"] = env.nominal_coverage;
    cfg["file_config"] = file_config;
    write_manifest("envelope", cfg, o.seed, {o.out}, started, utc_timestamp());
    std::cout << "wrote " << o.out << " (nominal coverage " << env.nominal_coverage << ")\n";
    return 0;
}

struct VerifyOpts {
    std::string suite;
    std::size_t n = 0;
    std::size_t trials = 0;
    double t = 0.0;
    double T = 0.0;
    std::int64_t omega = -1;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out;
    std::string jsonl;
};

int run_verify(const VerifyOpts& o, const ordered_json& file_config) {
    const std::string started = utc_timestamp();
    require_writable(o.out);
    require_writable(o.jsonl);
    ostat::SuiteOptions opts;
    opts.seed.master_seed = o.seed;
    opts.workers = o.workers;
    opts.n = o.n;
    opts.trials = o.trials;
    opts.t = o.t;
    opts.T = o.T;
    if (o.omega >= 0) opts.omega = static_cast<std::size_t>(o.omega);

    const ostat::SuiteResult suite = ostat::run_suite(o.suite, opts);
    for (const auto& check : suite.checks)
        std::cout << (check.pass ? "PASS" : "FAIL") << "  [" << suite.suite << "] " << check.name
                  << ": " << check.detail << "\n";
    std::cout << "suite " << suite.suite << ": " << (suite.pass ? "PASS" : "FAIL") << "\n";

    ordered_json report;
    report["suite"] = suite.suite;
    report["pass"] = suite.pass;
    report["checks"] = ordered_json::array();
    for (const auto& check : suite.checks)
        report["checks"].push_back({{"name", check.name},
                                    {"pass", check.pass},
                                    {"observed", check.observed},
                                    {"threshold", check.threshold},
                                    {"detail", check.detail}});
    report["summary"] = (suite.config && suite.result)
                            ? ostat::summary_json(*suite.config, *suite.result)
                            : ordered_json(nullptr);

    std::vector<std::string> outputs;
    if (!o.out.empty()) {
        ostat::write_file_atomic(o.out, report.dump(2) + "\n");
        outputs.push_back(o.out);
    }
    if (!o.jsonl.empty()) {
        if (!suite.result)
            throw std::invalid_argument("--jsonl is only available for experiment suites "
                                        "(lemma1|lemma2|theorem2)");
        ostat::write_file_atomic(o.jsonl, ostat::trial_records_to_jsonl(suite.result->records));
        outputs.push_back(o.jsonl);
    }
    if (!outputs.empty()) {
        ordered_json cfg;
        cfg["suite"] = o.suite;
        cfg["n"] = o.n;
        cfg["trials"] = o.trials;
        cfg["t"] = o.t;
        cfg["T"] = o.T;
        cfg["omega"] = o.omega;
        cfg["file_config"] = file_config;
        write_manifest("verify", cfg, o.seed, outputs, started, utc_timestamp());
    }
    return suite.pass ? 0 : 2;
}

struct CalibrateOpts {
    DistOpts dist;
    std::size_t n_cal = 1000;
    std::size_t trials = 500;
    double target_quantile = 0.9;
    double q_param = 1.0;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out;
};

int run_calibrate(const CalibrateOpts& o, const ordered_json& file_config) {
    const std::string started = utc_timestamp();
    const auto model = o.dist.build();
    require_writable(o.out);
    const double c = ostat::calibrate_constant(model, o.dist.p, o.n_cal, o.trials,
                                               o.target_quantile, ostat::SeedSpec{o.seed, 0},
                                               o.workers);
    // Failure-probability constant matched at the calibration scale:
    // 1 - target_quantile = c_prob * (log n_cal)^(-q).
    const double c_prob =
        (1.0 - o.target_quantile) * std::pow(std::log(static_cast<double>(o.n_cal)), o.q_param);
    ordered_json j;
    j["dist"] = model.name();
    j["p"] = o.dist.p;
    j["n_cal"] = o.n_cal;
    j["trials"] = o.trials;
    j["target_quantile"] = o.target_quantile;
    j["q"] = o.q_param;
    j["seed"] = o.seed;
    j["c"] = c;
    j["c_prob"] = c_prob;
    j["rate_at_n_cal"] = ostat::logconcave_rate(o.n_cal, o.dist.p);
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
        return 0;
    }
    ostat::write_file_atomic(o.out, text);
    ordered_json cfg = j;
    cfg["file_config"] = file_config;
    write_manifest("calibrate", cfg, o.seed, {o.out}, started, utc_timestamp());
    std::cout << "wrote " << o.out << " (c " << c << ", c_prob " << c_prob << ")\n";
    return 0;
}

struct RateOpts {
    DistOpts dist;
    std::vector<std::size_t> n_list{1000, 10000, 100000};
    std::size_t trials = 200;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out;
};

int run_rate(const RateOpts& o, const ordered_json& file_config) {
    const std::string started = utc_timestamp();
    const auto model = o.dist.build();
    require_writable(o.out);
    const auto rows = ostat::rate_scaling_experiment(model, o.dist.p, o.n_list, o.trials,
                                                     ostat::SeedSpec{o.seed, 0}, o.workers);
    const std::string csv = ostat::rate_table_to_csv(rows);
    if (o.out.empty()) {
        std::cout << csv;
        return 0;
    }
    ostat::write_file_atomic(o.out, csv);
    ordered_json cfg;
    cfg["dist"] = model.name();
    cfg["p"] = o.dist.p;
    cfg["n_list"] = o.n_list;
    cfg["trials"] = o.trials;
    cfg["seed"] = o.seed;
    cfg["file_config"] = file_config;
    write_manifest("rate", cfg, o.seed, {o.out}, started, utc_timestamp());
    std::cout << "wrote " << o.out << " (" << rows.size() << " scales)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-statistic envelopes and Monte Carlo verification"};
    app.set_version_flag("--version", ostat::kVersion);
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON file mirroring the flags; flags override it")
        ->expected(1);
    // The value is consumed by the pre-scan; subcommands just need to accept
    // the flag.
    auto add_config_flag = [&config_path](CLI::App* cmd) {
        cmd->add_option("--config", config_path,
                        "JSON file mirroring the flags; flags override it");
    };

    ordered_json file_config;
    try {
        file_config = load_config_json(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    SimulateOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate", "emit one sorted sample as CSV");
    add_config_flag(sim_cmd);
    sim.dist.add_options(sim_cmd);
    sim_cmd->add_option("--n", sim.n, "sample size");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--trial-index", sim.trial, "stream index under the master seed");
    sim_cmd->add_option("--out", sim.out, "output CSV path (stdout if omitted)");

    EnvelopeOpts env;
    auto* env_cmd = app.add_subcommand("envelope", "emit a per-index envelope as CSV");
    add_config_flag(env_cmd);
    env.dist.add_options(env_cmd);
    env_cmd->add_option("--n", env.n, "sample size");
    env_cmd->add_option("--band", env.band, "ratio|additive|sup-logconcave|sup-uniform");
    env_cmd->add_option("--T", env.T, "ratio/sup-uniform band parameter T > 1");
    env_cmd->add_option("--t", env.t, "additive band half-width t in (0,1)");
    env_cmd->add_option("--c", env.c, "sup-logconcave width constant");
    env_cmd->add_option("--c-prob", env.c_prob, "sup-logconcave probability constant");
    env_cmd->add_option("--q", env.q_param, "sup-logconcave probability exponent");
    env_cmd->add_option("--k", env.k, "sup-uniform width constant");
    env_cmd->add_option("--seed", env.seed, "recorded in the manifest");
    env_cmd->add_option("--out", env.out, "output CSV path (stdout if omitted)");

    VerifyOpts ver;
    auto* ver_cmd = app.add_subcommand("verify", "run a named verification suite");
    add_config_flag(ver_cmd);
    ver_cmd->add_option("--suite", ver.suite, "lemma1|lemma2|theorem2|theorem4|metric|sampler")
        ->check(CLI::IsMember(ostat::suite_names()));
    ver_cmd->add_option("--n", ver.n, "override suite sample size");
    ver_cmd->add_option("--trials", ver.trials, "override suite trial count");
    ver_cmd->add_option("--t", ver.t, "override additive band t");
    ver_cmd->add_option("--T", ver.T, "override ratio band T");
    ver_cmd->add_option("--omega", ver.omega, "override trim omega");
    ver_cmd->add_option("--seed", ver.seed, "master seed");
    ver_cmd->add_option("--workers", ver.workers, "worker threads (0 = hardware)");
    ver_cmd->add_option("--out", ver.out, "report JSON path");
    ver_cmd->add_option("--jsonl", ver.jsonl, "per-trial JSONL path");

    CalibrateOpts cal;
    auto* cal_cmd = app.add_subcommand("calibrate", "calibrate sup-band constants as JSON");
    add_config_flag(cal_cmd);
    cal.dist.add_options(cal_cmd);
    cal_cmd->add_option("--n-cal", cal.n_cal, "calibration sample size");
    cal_cmd->add_option("--trials", cal.trials, "calibration trials (>= 100)");
    cal_cmd->add_option("--target-quantile", cal.target_quantile, "sup-deviation quantile");
    cal_cmd->add_option("--q", cal.q_param, "probability exponent q");
    cal_cmd->add_option("--seed", cal.seed, "master seed");
    cal_cmd->add_option("--workers", cal.workers, "worker threads");
    cal_cmd->add_option("--out", cal.out, "output JSON path (stdout if omitted)");

    RateOpts rate;
    auto* rate_cmd = app.add_subcommand("rate", "sup-deviation scaling table as CSV");
    add_config_flag(rate_cmd);
    rate.dist.add_options(rate_cmd);
    rate_cmd->add_option("--n-list", rate.n_list, "sample sizes")->delimiter(',');
    rate_cmd->add_option("--trials", rate.trials, "trials per scale");
    rate_cmd->add_option("--seed", rate.seed, "master seed");
    rate_cmd->add_option("--workers", rate.workers, "worker threads");
    rate_cmd->add_option("--out", rate.out, "output CSV path (stdout if omitted)");

    // Config-file values act as defaults; flags given on the command line win
    // because CLI11 assigns them during parse.
    bool config_had_seed = file_config.contains("seed");
    try {
        for (auto* opts : {&sim.dist, &env.dist, &cal.dist, &rate.dist}) {
            overlay(file_config, "dist", opts->dist);
            overlay(file_config, "mean", opts->mean);
            overlay(file_config, "sd", opts->sd);
            overlay(file_config, "rate", opts->rate);
            overlay(file_config, "loc", opts->loc);
            overlay(file_config, "scale", opts->scale);
            overlay(file_config, "p", opts->p);
        }
        overlay(file_config, "n", sim.n);
        overlay(file_config, "seed", sim.seed);
        overlay(file_config, "trial_index", sim.trial);
        overlay(file_config, "out", sim.out);
        overlay(file_config, "n", env.n);
        overlay(file_config, "band", env.band);
        overlay(file_config, "T", env.T);
        overlay(file_config, "t", env.t);
        overlay(file_config, "c", env.c);
        overlay(file_config, "k", env.k);
        overlay(file_config, "seed", env.seed);
        overlay(file_config, "out", env.out);
        overlay(file_config, "suite", ver.suite);
        overlay(file_config, "n", ver.n);
        overlay(file_config, "trials", ver.trials);
        overlay(file_config, "t", ver.t);
        overlay(file_config, "T", ver.T);
        overlay(file_config, "omega", ver.omega);
        overlay(file_config, "seed", ver.seed);
        overlay(file_config, "workers", ver.workers);
        overlay(file_config, "out", ver.out);
        overlay(file_config, "jsonl", ver.jsonl);
        overlay(file_config, "n_cal", cal.n_cal);
        overlay(file_config, "trials", cal.trials);
        overlay(file_config, "target_quantile", cal.target_quantile);
        overlay(file_config, "q", cal.q_param);
        overlay(file_config, "seed", cal.seed);
        overlay(file_config, "workers", cal.workers);
        overlay(file_config, "out", cal.out);
        overlay(file_config, "n_list", rate.n_list);
        overlay(file_config, "trials", rate.trials);
        overlay(file_config, "seed", rate.seed);
        overlay(file_config, "workers", rate.workers);
        overlay(file_config, "out", rate.out);
    } catch (const std::exception& e) {
        std::cerr << "error: bad config value: " << e.what() << "\n";
        return 1;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 1;
    }

    try {
        if (sim_cmd->parsed()) {
            if (sim.n == 0) throw std::invalid_argument("--n is required (flag or config file)");
            sim.seed = resolve_seed(sim_cmd, sim.seed, config_had_seed);
            return run_simulate(sim, file_config);
        }
        if (env_cmd->parsed()) {
            if (env.n == 0) throw std::invalid_argument("--n is required (flag or config file)");
            env.seed = resolve_seed(env_cmd, env.seed, config_had_seed);
            return run_envelope(env, file_config);
        }
        if (ver_cmd->parsed()) {
            if (ver.suite.empty())
                throw std::invalid_argument("--suite is required (flag or config file)");
            ver.seed = resolve_seed(ver_cmd, ver.seed, config_had_seed);
            return run_verify(ver, file_config);
        }
        if (cal_cmd->parsed()) {
            cal.seed = resolve_seed(cal_cmd, cal.seed, config_had_seed);
            return run_calibrate(cal, file_config);
        }
        if (rate_cmd->parsed()) {
            rate.seed = resolve_seed(rate_cmd, rate.seed, config_had_seed);
            return run_rate(rate, file_config);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
