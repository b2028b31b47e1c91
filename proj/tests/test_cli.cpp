#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mixhypo/audit.hpp"
#include "mixhypo/family.hpp"
#include "test_util.hpp"

namespace {

const std::string kCli = MIXHYPO_CLI_PATH;
const std::string kTmp = MIXHYPO_TEST_TMP;
const std::string kGolden = MIXHYPO_GOLDEN_DIR;

std::string path(const std::string& name) { return kTmp + "/" + name; }

// Run the binary through the shell; returns the exit code.
int run(const std::string& args) {
    std::string cmd = kCli + " " + args;
    int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> ls;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) ls.push_back(l);
    return ls;
}

std::vector<double> fields_of(const std::string& csv_line) {
    std::vector<double> out;
    std::istringstream in(csv_line);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(std::strtod(cell.c_str(), nullptr));
    return out;
}

std::vector<double> values_of(const std::string& text) {
    std::vector<double> out;
    for (const auto& l : lines_of(text)) out.push_back(std::strtod(l.c_str(), nullptr));
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval: golden file, byte-determinism, header") {
    std::string a = path("eval_a.csv"), b = path("eval_b.csv");
    std::string args = "eval --family MHW --shared 1 --vector 1,0.5 "
                       "--t-min 0.5 --t-max 2.5 --points 5 --output ";
    REQUIRE(run(args + a) == 0);
    REQUIRE(run(args + b) == 0);
    std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text == slurp(kGolden + "/eval_mhw.csv"));
    auto ls = lines_of(text);
    REQUIRE(ls.size() == 6);
    CHECK(ls[0] == "t,pdf,cdf,reliability,hazard");
}

TEST_CASE("eval: the hand-derived row at t = ln 2") {
    std::string out = path("eval_ln2.csv");
    REQUIRE(run("eval --family MHW --shared 1 --vector 1,0.5 "
                "--t-min 0.6931471805599453 --t-max 1 --points 2 --output " + out) == 0);
    auto ls = lines_of(slurp(out));
    REQUIRE(ls.size() == 3);
    auto row = fields_of(ls[1]);
    REQUIRE(row.size() == 5);
    CHECK(abs_close(row[0], 0.69314718055994531, 1e-15));
    CHECK(abs_close(row[1], 0.5, 1e-12));   // pdf
    CHECK(abs_close(row[2], 0.25, 1e-12));  // cdf
    CHECK(abs_close(row[3], 0.75, 1e-12));  // reliability
    CHECK(abs_close(row[4], 0.66666666666666667, 1e-12));  // hazard
}

TEST_CASE("eval: defaults span quantiles 0.001 to 0.999 with 512 points") {
    std::string out = path("eval_default.csv");
    REQUIRE(run("eval --family MHW --shared 1 --vector 1,0.5 --output " + out) == 0);
    auto ls = lines_of(slurp(out));
    REQUIRE(ls.size() == 513);
    mixhypo::SignedMixture m =
        mixhypo::make_family({mixhypo::Family::MHW, 1.0, {1.0, 0.5}, 1e-6});
    CHECK(rel_close(fields_of(ls[1])[0], mixhypo::mix_quantile(m, 0.001), 1e-9));
    CHECK(rel_close(fields_of(ls[512])[0], mixhypo::mix_quantile(m, 0.999), 1e-9));
}

TEST_CASE("eval: single-component family reproduces the textbook exponential") {
    std::string out = path("eval_exp.csv");
    REQUIRE(run("eval --family MHW --shared 1 --vector 2 "
                "--t-min 0.5 --t-max 1.5 --points 3 --output " + out) == 0);
    auto row = fields_of(lines_of(slurp(out))[2]);  // t = 1, Exp(rate 1/2)
    CHECK(abs_close(row[0], 1.0, 1e-15));
    CHECK(abs_close(row[1], 0.30326532985631671, 1e-12));
    CHECK(abs_close(row[2], 0.39346934028736658, 1e-12));
}

TEST_CASE("eval: hazard prints inf once the reliability underflows") {
    std::string out = path("eval_tail.csv");
    REQUIRE(run("eval --family MHW --shared 1 --vector 1,0.5 "
                "--t-min 750 --t-max 800 --points 2 --output " + out) == 0);
    auto row = fields_of(lines_of(slurp(out))[1]);
    CHECK(row[2] == 1.0);  // cdf saturated
    CHECK(std::isinf(row[4]));
}

TEST_CASE("eval: coincident parameters exit 3 with a separation message") {
    std::string err = path("eval_sep.err");
    int code = run("eval --family MHW --shared 1 --vector 1,1 --output " +
                   path("eval_sep.csv") + " 2> " + err);
    CHECK(code == 3);
    CHECK(slurp(err).find("separation") != std::string::npos);
}

TEST_CASE("eval: config errors exit 2") {
    CHECK(run("eval --family MHW --shared 1 --vector 1,0.5 --points 1 --output " +
              path("p1.csv") + " 2> /dev/null") == 2);
    CHECK(run("eval --family NOPE --shared 1 --vector 1,0.5 --output " +
              path("nope.csv") + " 2> /dev/null") == 2);
    CHECK(run("eval --shared 1 --vector 1,0.5 --output " + path("nofam.csv") +
              " 2> /dev/null") == 2);
}

TEST_CASE("sample: determinism, golden file, seed required") {
    std::string a = path("sample_a.txt"), b = path("sample_b.txt");
    std::string args = "sample --family MHW --shared 1 --vector 1,0.5 "
                       "--count 10 --seed 42 --output ";
    REQUIRE(run(args + a) == 0);
    REQUIRE(run(args + b) == 0);
    std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text == slurp(kGolden + "/sample_mhw.txt"));
    CHECK(lines_of(text).size() == 10);

    CHECK(run("sample --family MHW --shared 1 --vector 1,0.5 --count 10 --output " +
              path("noseed.txt") + " 2> /dev/null") == 2);
    CHECK(run("sample --family MHW --shared 1 --vector 1,0.5 --count 0 --seed 1 --output " +
              path("zero.txt") + " 2> /dev/null") == 2);
}

TEST_CASE("sample: MHT variates respect the support lower bound") {
    std::string out = path("sample_mht.txt");
    REQUIRE(run("sample --family MHT --shared 1 --vector 1,2 --count 500 --seed 3 --output " +
                out) == 0);
    auto xs = values_of(slurp(out));
    REQUIRE(xs.size() == 500);
    for (double x : xs) REQUIRE(x >= 1.0);
}

TEST_CASE("sample: pipeline KS against the library cdf") {
    std::string out = path("sample_ks.txt");
    REQUIRE(run("sample --family MHW --shared 1 --vector 1,0.5 "
                "--count 100000 --seed 777 --output " + out) == 0);
    auto xs = values_of(slurp(out));
    REQUIRE(xs.size() == 100000);
    mixhypo::SignedMixture m =
        mixhypo::make_family({mixhypo::Family::MHW, 1.0, {1.0, 0.5}, 1e-6});
    double d = mixhypo::ks_distance(xs, [&](double t) { return mixhypo::mix_cdf(m, t); });
    CHECK(d < 1.63 / std::sqrt(100000.0));
}

TEST_CASE("fit: end-to-end recovery from sampled data") {
    std::string data = path("fit_data.txt"), out1 = path("fit1.json"), out2 = path("fit2.json");
    REQUIRE(run("sample --family MHT --shared 1 --vector 1,3 --count 10000 --seed 555 "
                "--output " + data) == 0);
    std::string args = "fit --data " + data +
                       " --method mle --family MHT --n-components 2 --restarts 2 --seed 7 "
                       "--output ";
    REQUIRE(run(args + out1 + " 2> /dev/null") == 0);
    REQUIRE(run(args + out2 + " 2> /dev/null") == 0);
    CHECK(slurp(out1) == slurp(out2));  // pure function of (config, seed)

    auto j = nlohmann::json::parse(slurp(out1));
    CHECK(j.at("method") == "mle");
    CHECK(j.at("family") == "MHT");
    CHECK(j.at("converged") == true);
    CHECK(j.at("sample_size") == 10000);
    CHECK(rel_close(j.at("shared").get<double>(), 1.0, 0.10));
    std::vector<double> v = j.at("vector").get<std::vector<double>>();
    REQUIRE(v.size() == 2);
    CHECK(rel_close(v[0], 1.0, 0.10));
    CHECK(rel_close(v[1], 3.0, 0.10));
    CHECK(j.at("grad_norm").get<double>() <=
          1e-4 * std::abs(j.at("objective").get<double>()));
}

TEST_CASE("fit: starved optimizer exits 4 but still reports") {
    std::string data = path("fit_data4.txt"), out = path("fit4.json");
    REQUIRE(run("sample --family MHT --shared 1 --vector 1,3 --count 1000 --seed 556 "
                "--output " + data) == 0);
    int code = run("fit --data " + data +
                   " --method mle --family MHT --n-components 2 --restarts 0 --max-iter 1 "
                   "--seed 7 --output " + out + " 2> /dev/null");
    CHECK(code == 4);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("converged") == false);
}

TEST_CASE("fit: data file errors") {
    std::string bad = path("bad.txt");
    spit(bad, "1.0\n2.0\nabc\n");
    CHECK(run("fit --data " + bad + " --method mle --family MHW --n-components 1 --output " +
              path("bad.json") + " 2> /dev/null") == 2);

    std::string tiny = path("tiny.txt");
    spit(tiny, "1.0\n2.0\n3.0\n");
    CHECK(run("fit --data " + tiny + " --method mle --family MHW --n-components 3 --output " +
              path("tiny.json") + " 2> /dev/null") == 5);
}

TEST_CASE("fit: comments and blank lines in data; bounds via config") {
    std::string data = path("fit_mom.txt");
    spit(data, "# hand-picked sample\n0.5\n1.5\n\n2.5\n0.25\n# tail\n1.0\n0.75\n");
    std::string out = path("fit_mom.json");
    std::string cfg = path("fit_mom_cfg.json");
    spit(cfg, R"({"data": ")" + data + R"(", "method": "mom", "family": "MHW",
                  "n_components": 1, "bounds": [[1.0, 1.0], [0.001, 1000.0]],
                  "output": ")" + out + R"("})");
    REQUIRE(run("fit -c " + cfg) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("shared") == 1.0);  // pinned by the bounds
    // shape-1 Weibull MOM: scale equals the sample mean
    CHECK(rel_close(j.at("vector")[0].get<double>(), 6.5 / 6.0, 1e-10));
}

TEST_CASE("check: family filter") {
    std::string out = path("check_mhe.json");
    REQUIRE(run("check --family MHE --grid 8 --output " + out + " 2> /dev/null") == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("counts").at("match") == 5);
    CHECK(j.at("counts").at("erratum") == 0);
    CHECK(j.at("counts").at("failed") == 0);
    for (const auto& c : j.at("checks")) {
        std::string name = c.at("name").get<std::string>();
        CHECK(name.rfind("mhe/", 0) == 0);
    }
}

TEST_CASE("check: full audit matches the pinned verdict counts") {
    std::string out = path("check_full.json");
    REQUIRE(run("check --output " + out + " 2> /dev/null") == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("counts").at("match") == 33);
    CHECK(j.at("counts").at("erratum") == 14);
    CHECK(j.at("counts").at("skipped") == 5);
    CHECK(j.at("counts").at("failed") == 0);
    CHECK(j.at("seed") == 20250603);

    auto verdict_of = [&](const std::string& name) -> std::string {
        for (const auto& c : j.at("checks")) {
            if (c.at("name") == name) return c.at("verdict").get<std::string>();
        }
        return "absent";
    };
    CHECK(verdict_of("mhw/corollary/cdf") == "ERRATUM");
    CHECK(verdict_of("mhw/corollary/moment") == "ERRATUM");
    CHECK(verdict_of("mhg/definition/cdf") == "ERRATUM");
    CHECK(verdict_of("mht/corollary/cdf") == "ERRATUM");
    CHECK(verdict_of("mhe/corollary/cdf") == "MATCH");
}

TEST_CASE("check: invalid tolerance exits 2") {
    CHECK(run("check --tolerance -1 --output " + path("ct.json") + " 2> /dev/null") == 2);
}

TEST_CASE("config file: values load, flags override, unknown keys rejected") {
    std::string cfg = path("cfg.json");
    spit(cfg, R"({"family": "MHW", "shared": 1.0, "vector": [1.0, 0.5],
                  "count": 5, "seed": 1})");
    std::string out = path("cfg_out.txt");
    REQUIRE(run("sample -c " + cfg + " --count 3 --output " + out) == 0);
    CHECK(lines_of(slurp(out)).size() == 3);  // flag wins over the file's 5

    std::string badcfg = path("bad_cfg.json");
    spit(badcfg, R"({"familly": "MHW"})");
    CHECK(run("sample -c " + badcfg + " --count 3 --seed 1 --output " + out +
              " 2> /dev/null") == 2);
}

TEST_CASE("MIXHYPO_LOG controls diagnostics") {
    std::string err = path("log.err");
    std::string args = "eval --family MHW --shared 1 --vector 1,0.5 --points 16 --output " +
                       path("log.csv");
    REQUIRE(std::system(("MIXHYPO_LOG=debug " + kCli + " " + args + " 2> " + err).c_str()) == 0);
    CHECK_FALSE(slurp(err).empty());
    REQUIRE(std::system((kCli + " " + args + " 2> " + err).c_str()) == 0);
    CHECK(slurp(err).empty());
}

}  // TEST_SUITE
