#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = expfit::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// Scratch directory shared by the test cases in this file.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / "expfit-cli-tests";
        fs::create_directories(dir);
    }
    ~Scratch() { std::error_code ec; fs::remove_all(dir, ec); }
    fs::path write(const std::string& name, const std::string& content) const {
        fs::path p = dir / name;
        std::ofstream f(p, std::ios::binary);
        f << content;
        return p;
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    }
};

std::string noisy_exp_csv() {
    std::ostringstream os;
    os << "t,T\n" << std::setprecision(17);
    const double ts[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
    for (int i = 0; i < 8; ++i) {
        double T = 3.0 * std::exp(-0.8 * ts[i]) + 1.0;
        if (i < 4) T += (i % 2 == 0) ? 0.01 : -0.01;
        os << ts[i] << ',' << T << '\n';
    }
    return os.str();
}

json parse_without_timing(const std::string& text) {
    json j = json::parse(text);
    j.erase("timing");
    return j;
}

} // namespace

TEST_CASE("fit-minimax emits a full report and is deterministic") {
    Scratch s;
    fs::path input = s.write("noisy.csv", noisy_exp_csv());

    auto r1 = run_cli({"fit-minimax", input.string()});
    REQUIRE(r1.code == 0);
    json j = json::parse(r1.out);
    CHECK(j["command"] == "fit-minimax");
    CHECK(j["taxonomy"]["tag"] == "interior_exponential");
    CHECK(j["model"]["kind"] == "exponential");
    CHECK(std::abs(j["model"]["a"].get<double>() - 3.0) < 1e-8);
    CHECK(std::abs(j["model"]["k"].get<double>() + 0.8) < 1e-8);
    CHECK(std::abs(j["model"]["b"].get<double>() - 1.0) < 1e-8);
    CHECK(std::abs(j["error"].get<double>() - 0.01) < 1e-8);
    CHECK(j["certificate"]["indices"].size() >= 4);
    CHECK(j["band"]["upper"].size() == 8);
    CHECK(j["band"]["lower"].size() == 8);
    CHECK(j["diagnostics"].contains("k_search"));
    CHECK(j["diagnostics"].contains("k_quartet"));
    CHECK(j.contains("quartet"));
    CHECK(j["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(j.contains("timing"));

    auto r2 = run_cli({"fit-minimax", input.string()});
    REQUIRE(r2.code == 0);
    CHECK(parse_without_timing(r1.out).dump() == parse_without_timing(r2.out).dump());

    // The digest follows the bytes, not the parse.
    fs::path changed = s.write("noisy2.csv", noisy_exp_csv() + "5.0,1.5\n");
    auto r3 = run_cli({"fit-minimax", changed.string()});
    REQUIRE(r3.code == 0);
    CHECK(json::parse(r3.out)["input_digest"] != j["input_digest"]);
}

TEST_CASE("fit-minimax writes report and plot files on request") {
    Scratch s;
    fs::path input = s.write("noisy.csv", noisy_exp_csv());
    fs::path out = s.dir / "report.json";
    fs::path plot = s.dir / "plot.dat";

    auto r = run_cli({"fit-minimax", input.string(), "--out", out.string(),
                      "--plot", plot.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    json j = json::parse(Scratch::slurp(out));
    CHECK(j["command"] == "fit-minimax");

    std::istringstream p(Scratch::slurp(plot));
    std::string header;
    std::getline(p, header);
    CHECK(header == "# t T fit residual extremal upper lower");
    std::size_t rows = 0, extremal = 0;
    std::string line;
    while (std::getline(p, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream ls(line);
        double t, T, fit, res, up, lo;
        int ex;
        ls >> t >> T >> fit >> res >> ex >> up >> lo;
        REQUIRE(!ls.fail());
        CHECK(std::abs(T - fit - res) < 1e-12);
        CHECK(up >= lo);
        extremal += static_cast<std::size_t>(ex);
    }
    CHECK(rows == 8);
    CHECK(extremal >= 4);
}

TEST_CASE("fit-line and classify report closed-form structure") {
    Scratch s;
    fs::path line_file = s.write("line.csv", "0,1\n1,1.5\n2,2\n3,2.5\n");
    auto r = run_cli({"fit-line", line_file.string()});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["model"]["kind"] == "line");
    CHECK(std::abs(j["model"]["slope"].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(j["model"]["intercept"].get<double>() - 1.0) < 1e-12);
    CHECK(j["error"].get<double>() < 1e-12);

    fs::path limit_file = s.write("limit.csv", "1,3\n2,0\n3,1\n4,2\n");
    auto c = run_cli({"classify", limit_file.string()});
    REQUIRE(c.code == 0);
    json cj = json::parse(c.out);
    CHECK(cj["taxonomy"]["tag"] == "limit_neg_inf");
    CHECK(cj["taxonomy"]["reflect_t"] == false);
    CHECK(cj["taxonomy"]["negate_T"] == false);
    CHECK(cj["taxonomy"]["witness"].size() == 3);

    auto f = run_cli({"fit-minimax", limit_file.string()});
    REQUIRE(f.code == 0);
    json fj = json::parse(f.out);
    CHECK(fj["model"]["kind"] == "limit_vector");
    REQUIRE(fj["model"]["values"].size() == 4);
    CHECK(std::abs(fj["model"]["values"][0].get<double>() - 2.0) < 1e-12);
    CHECK(std::abs(fj["error"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("fit-quartet reports the closed-form solve") {
    Scratch s;
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < 4; ++i) {
        double T = 2.0 * std::exp(-0.7 * i) + 0.5 + ((i % 2 == 0) ? 0.1 : -0.1);
        os << i << ',' << T << '\n';
    }
    fs::path input = s.write("quartet.csv", os.str());
    auto r = run_cli({"fit-quartet", input.string()});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(std::abs(j["model"]["a"].get<double>() - 2.0) < 1e-10);
    CHECK(std::abs(j["model"]["k"].get<double>() + 0.7) < 1e-10);
    CHECK(std::abs(j["model"]["b"].get<double>() - 0.5) < 1e-10);
    CHECK(std::abs(j["error"].get<double>() - 0.1) < 1e-10);
    CHECK(j["quartet"] == json::array({0, 1, 2, 3}));
}

TEST_CASE("band evaluates a supplied model or fits one") {
    Scratch s;
    fs::path input = s.write("tri.csv", "0,2\n1,0.9\n2,0.5\n");

    auto fixed = run_cli({"band", input.string(), "--a", "1.5", "--k", "-1",
                          "--b", "0.4"});
    REQUIRE(fixed.code == 0);
    json j = json::parse(fixed.out);
    CHECK(j["model"]["kind"] == "exponential");
    REQUIRE(j["band"]["upper"].size() == 3);
    const double err = j["error"].get<double>();
    for (std::size_t i = 0; i < 3; ++i) {
        const double up = j["band"]["upper"][i].get<double>();
        const double lo = j["band"]["lower"][i].get<double>();
        CHECK(std::abs((up - lo) - 2.0 * err) < 1e-12);
    }

    auto fitted = run_cli({"band", input.string()});
    REQUIRE(fitted.code == 0);
    CHECK(json::parse(fitted.out).contains("taxonomy"));

    // A zero scale or rate degrades to the constant a + b.
    auto flat = run_cli({"band", input.string(), "--a", "0", "--k", "-1",
                         "--b", "0.4"});
    REQUIRE(flat.code == 0);
    CHECK(json::parse(flat.out)["model"]["kind"] == "constant");
}

TEST_CASE("exit codes separate input errors from numeric failures") {
    Scratch s;
    fs::path good = s.write("ok.csv", "0,1\n1,2\n2,4\n");

    CHECK(run_cli({"fit-minimax", (s.dir / "missing.csv").string()}).code == 2);
    CHECK(run_cli({"fit-minimax"}).code == 2);                    // input required
    CHECK(run_cli({"fit-minimax", good.string(), "--bogus"}).code == 2);
    CHECK(run_cli({}).code == 2);                                 // subcommand required
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"fit-minimax", "--help"}).code == 0);

    fs::path one = s.write("one.csv", "0,1\n");
    CHECK(run_cli({"fit-minimax", one.string()}).code == 2);
    fs::path three = s.write("three.csv", "0,1\n1,2\n2,3\n");
    CHECK(run_cli({"fit-quartet", three.string()}).code == 2);

    CHECK(run_cli({"band", good.string(), "--a", "1.0"}).code == 2);
    auto overflow = run_cli({"band", good.string(), "--a", "1", "--k", "-800",
                             "--b", "0"});
    CHECK(overflow.code == 3);
    CHECK(!overflow.err.empty());

    CHECK(run_cli({"fit-minimax", good.string(), "--norm", "l2"}).code == 2);
    CHECK(run_cli({"fit-tac", good.string(), "--model", "exp", "--norm", "max"}).code == 2);
    CHECK(run_cli({"fit-tac", good.string(), "--model", "nope"}).code == 2);
    CHECK(run_cli({"fit-tac", good.string(), "--model", "exp",
                   "--grid", "q=0:1:5"}).code == 2);              // unknown axis
    CHECK(run_cli({"fit-tac", good.string(), "--model", "exp",
                   "--grid", "d=0..1"}).code == 2);               // malformed spec
}

TEST_CASE("simulators are seed-deterministic and honour EXPFIT_SEED") {
    auto base = run_cli({"simulate-demand", "--seed", "7"});
    REQUIRE(base.code == 0);
    CHECK(base.out.rfind("C,Q\n", 0) == 0);
    CHECK(run_cli({"simulate-demand", "--seed", "7"}).out == base.out);
    CHECK(run_cli({"simulate-demand", "--seed", "8"}).out != base.out);

    std::size_t rows = 0;
    bool first_row_checked = false;
    std::istringstream is(base.out);
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (!first_row_checked) {
            CHECK(line.rfind("0,", 0) == 0); // prices start at zero
            first_row_checked = true;
        }
        ++rows;
    }
    CHECK(rows == 15);

    ::setenv("EXPFIT_SEED", "7", 1);
    CHECK(run_cli({"simulate-demand"}).out == base.out);
    ::setenv("EXPFIT_SEED", "not-a-number", 1);
    CHECK(run_cli({"simulate-demand"}).code == 2);
    ::unsetenv("EXPFIT_SEED");
}

TEST_CASE("simulate-expar emits the deterministic skeleton by default") {
    auto r = run_cli({"simulate-expar", "--count", "4"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::vector<double> vals;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) vals.push_back(std::stod(line));
    REQUIRE(vals.size() == 4);
    CHECK(vals[0] == 2.75);
    CHECK(vals[1] == 3.1);
    CHECK(std::abs(vals[2] - 3.3710747564260197) < 1e-12);

    // Zero noise ignores the seed entirely.
    CHECK(run_cli({"simulate-expar", "--count", "4", "--seed", "99"}).out == r.out);
    // Nonzero noise is reproducible per seed.
    auto n1 = run_cli({"simulate-expar", "--count", "10", "--noise", "0.05", "--seed", "3"});
    auto n2 = run_cli({"simulate-expar", "--count", "10", "--noise", "0.05", "--seed", "3"});
    auto n3 = run_cli({"simulate-expar", "--count", "10", "--noise", "0.05", "--seed", "4"});
    CHECK(n1.out == n2.out);
    CHECK(n1.out != n3.out);
}

TEST_CASE("fit-tac recovers a noiseless demand curve end to end") {
    Scratch s;
    fs::path data = s.dir / "demand.csv";
    auto sim = run_cli({"simulate-demand", "--noise", "0", "--out", data.string()});
    REQUIRE(sim.code == 0);

    auto r = run_cli({"fit-tac", data.string(), "--model", "demand"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["pattern"] == "demand");
    CHECK(std::abs(j["params"]["Q0"].get<double>() - 48.0) < 0.05);
    CHECK(std::abs(j["params"]["k"].get<double>() - 3.42) < 0.005);
    CHECK(std::abs(j["params"]["alpha"].get<double>() - 0.006) < 1e-4);
    CHECK(j["rss"].get<double>() < 1e-8);
    CHECK(j["details"]["levels"].get<int>() >= 1);
    REQUIRE(j["grid"].size() == 1);
    CHECK(j["grid"][0]["name"] == "d");
}

TEST_CASE("fit-tac exp pattern discards the degenerate zero-rate node") {
    Scratch s;
    std::ostringstream os;
    os << std::setprecision(17);
    for (int i = 0; i < 12; ++i) {
        double t = 0.5 * i;
        os << t << ',' << 2.0 * std::exp(-0.3 * t) + 1.0 << '\n';
    }
    fs::path input = s.write("expcurve.csv", os.str());
    fs::path plot = s.dir / "exp.dat";
    auto r = run_cli({"fit-tac", input.string(), "--model", "exp",
                      "--plot", plot.string()});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["pattern"] == "exp");
    CHECK(std::abs(j["params"]["a"].get<double>() - 2.0) < 1e-5);
    CHECK(std::abs(j["params"]["d"].get<double>() + 0.3) < 1e-5);
    CHECK(std::abs(j["params"]["b"].get<double>() - 1.0) < 1e-5);
    CHECK(j["rss"].get<double>() < 1e-10);
    CHECK(j["details"]["rank_deficient_nodes"].get<long>() >= 1);

    std::istringstream p(Scratch::slurp(plot));
    std::string header;
    std::getline(p, header);
    CHECK(header == "# x y fit residual");
}

TEST_CASE("fit-tac expar accepts a plain series with a header") {
    Scratch s;
    auto sim = run_cli({"simulate-expar", "--count", "100"});
    REQUIRE(sim.code == 0);
    fs::path series = s.write("series.txt", "x\n" + sim.out);

    auto r = run_cli({"fit-tac", series.string(), "--model", "expar",
                      "--grid", "gamma=0.5:2:15", "--grid", "z1=1:4:15",
                      "--grid", "z2=2:5:15"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["pattern"] == "expar");
    CHECK(j["rss"].get<double>() < 1e-6);
    CHECK(std::abs(j["params"]["c1"].get<double>() - 1.65) < 0.05);
    REQUIRE(j["grid"].size() == 3);
    CHECK(j["grid"][0]["points"] == 15);
}
