// End-to-end checks of the command line tool. The binary path comes from the
// OSTAT_CLI environment variable (set by ctest); tests are skipped when it is
// absent.

#include <json.hpp>

#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("OSTAT_CLI"); }

#define REQUIRE_CLI()                                      \
    if (!cli_path()) {                                     \
        MESSAGE("OSTAT_CLI not set; skipping CLI test");   \
        return;                                            \
    }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() /
              ("ostat_cli_test_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string operator/(const char* name) const { return (dir / name).string(); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("envelope golden row and byte stability") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string out = tmp / "env.csv";
    REQUIRE(run_cli("envelope --dist uniform --n 9 --band additive --t 0.2 --out " + out) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("index,q,x_star,lower,upper\n", 0) == 0);
    CHECK(csv.find("\n5,0.5,0.5,0.3,0.7\n") != std::string::npos);

    const std::string out2 = tmp / "env2.csv";
    REQUIRE(run_cli("envelope --dist uniform --n 9 --band additive --t 0.2 --out " + out2) == 0);
    CHECK(slurp(out2) == csv);

    // manifest accompanies the output and names it
    const std::string manifest = slurp(out + ".manifest.json");
    const auto j = nlohmann::json::parse(manifest);
    CHECK(j.at("tool") == "ostat");
    CHECK(j.at("command") == "envelope");
    CHECK(j.at("outputs").at(0) == out);
    CHECK(j.contains("started_utc"));
    CHECK(j.contains("finished_utc"));
}

TEST_CASE("simulate is reproducible byte for byte") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string a = tmp / "a.csv", b = tmp / "b.csv";
    REQUIRE(run_cli("simulate --dist normal --n 10 --seed 1 --out " + a) == 0);
    REQUIRE(run_cli("simulate --dist normal --n 10 --seed 1 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    const std::string c = tmp / "c.csv";
    REQUIRE(run_cli("simulate --dist normal --n 10 --seed 2 --out " + c) == 0);
    CHECK(slurp(c) != slurp(a));
}

TEST_CASE("seed precedence: flag over environment over default") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string base = tmp / "base.csv", env = tmp / "env.csv", flag = tmp / "flag.csv";
    REQUIRE(run_cli("simulate --dist exponential --n 6 --seed 99 --out " + base) == 0);
    const std::string env_cmd = "OSTAT_SEED=99 " + std::string(cli_path()) +
                                " simulate --dist exponential --n 6 --out " + env +
                                " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    CHECK(slurp(env) == slurp(base));
    const std::string flag_cmd = "OSTAT_SEED=7 " + std::string(cli_path()) +
                                 " simulate --dist exponential --n 6 --seed 99 --out " + flag +
                                 " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(flag_cmd.c_str())) == 0);
    CHECK(slurp(flag) == slurp(base));
}

TEST_CASE("config file supplies defaults, flags win") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string cfg = tmp / "cfg.json";
    {
        std::ofstream os(cfg);
        os << R"({"dist":"laplace","loc":1.0,"scale":2.0,"n":8,"seed":5})";
    }
    const std::string a = tmp / "a.csv", b = tmp / "b.csv", c = tmp / "c.csv";
    REQUIRE(run_cli("simulate --config " + cfg + " --out " + a) == 0);
    REQUIRE(run_cli("simulate --dist laplace --loc 1.0 --scale 2.0 --n 8 --seed 5 --out " + b) ==
            0);
    CHECK(slurp(a) == slurp(b));
    REQUIRE(run_cli("simulate --config " + cfg + " --n 3 --out " + c) == 0);
    CHECK(slurp(c) != slurp(a));
}

TEST_CASE("verify runs a small suite and writes report, jsonl, manifest") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string report = tmp / "report.json", jsonl = tmp / "trials.jsonl";
    REQUIRE(run_cli("verify --suite lemma2 --n 500 --trials 300 --seed 4 --out " + report +
                    " --jsonl " + jsonl) == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(j.at("suite") == "lemma2");
    CHECK(j.at("pass") == true);
    CHECK(j.at("summary").at("config").at("n") == 500);
    CHECK(j.at("summary").at("coverage").at("trials") == 300);
    CHECK(j.at("summary").at("coverage").contains("wilson99"));
    CHECK(j.at("summary").at("deviation").contains("q90"));

    // pinned trial record schema
    std::ifstream is(jsonl);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(is, line)) {
        const auto rec = nlohmann::json::parse(line);
        CHECK(rec.size() == 4);
        CHECK(rec.contains("trial"));
        CHECK(rec.contains("sup_dev"));
        CHECK(rec.contains("trimmed_sup_dev"));
        CHECK(rec.contains("covered"));
        CHECK(rec.at("trimmed_sup_dev").is_null());
        CHECK(rec.at("covered").is_boolean());
        ++lines;
    }
    CHECK(lines == 300);
    CHECK(fs::exists(report + ".manifest.json"));
    CHECK(fs::exists(jsonl + ".manifest.json"));
}

TEST_CASE("verify output is byte-identical across worker counts") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string w1 = tmp / "w1.json", w4 = tmp / "w4.json";
    const std::string j1 = tmp / "w1.jsonl", j4 = tmp / "w4.jsonl";
    REQUIRE(run_cli("verify --suite lemma2 --n 400 --trials 200 --seed 11 --workers 1 --out " +
                    w1 + " --jsonl " + j1) == 0);
    REQUIRE(run_cli("verify --suite lemma2 --n 400 --trials 200 --seed 11 --workers 4 --out " +
                    w4 + " --jsonl " + j4) == 0);
    CHECK(slurp(w1) == slurp(w4));
    CHECK(slurp(j1) == slurp(j4));
}

TEST_CASE("error reporting and exit codes") {
    REQUIRE_CLI();
    TempDir tmp;
    CHECK(run_cli("envelope --dist uniform --n 9 --band additive --t 0.2 --no-such-flag") == 1);
    CHECK(run_cli("envelope --dist cauchy --n 9 --band additive --t 0.2") == 1);
    CHECK(run_cli("envelope --dist uniform --n 9 --band ratio") == 1);        // missing T
    CHECK(run_cli("envelope --dist uniform --band additive --t 0.2") == 1);   // missing n
    CHECK(run_cli("envelope --dist uniform --n 9 --band additive --t 0.2 --out /nope/x.csv") == 1);
    CHECK(run_cli("verify --suite unknown") == 1);
    CHECK(run_cli("simulate --dist genexp --p 0.2 --n 4") == 1);  // invalid family parameter
}

TEST_CASE("rate and calibrate emit their documents") {
    REQUIRE_CLI();
    TempDir tmp;
    const std::string rate = tmp / "rate.csv", cal = tmp / "cal.json";
    REQUIRE(run_cli("rate --dist normal --p 2 --n-list 1000,10000 --trials 40 --seed 3 --out " +
                    rate) == 0);
    const std::string csv = slurp(rate);
    CHECK(csv.rfind("n,median_sup_dev,ratio\n", 0) == 0);
    CHECK(csv.find("\n1000,") != std::string::npos);
    CHECK(csv.find("\n10000,") != std::string::npos);

    REQUIRE(run_cli("calibrate --dist normal --p 2 --n-cal 1000 --trials 150 "
                    "--target-quantile 0.9 --q 1 --seed 3 --out " + cal) == 0);
    const auto j = nlohmann::json::parse(slurp(cal));
    CHECK(j.at("c").get<double>() > 0.0);
    CHECK(j.at("c_prob").get<double>() ==
          doctest::Approx(0.1 * std::log(1000.0)).epsilon(1e-9));
    CHECK(fs::exists(cal + ".manifest.json"));
}

} // TEST_SUITE
