#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "clsc/formulation.hpp"
#include "clsc/instance.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = [] {
    fs::path p = fs::temp_directory_path() / "clsc_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}();

// run the CLI binary; returns the exit code, captures stdout+stderr
int run(const std::string& args, std::string* output = nullptr) {
    const fs::path log = kWork / "run.log";
    const std::string cmd = std::string(CLSC_CLI_PATH) + " " + args + " > " +
                            log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::ostringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// independent great-circle formula (spherical law of cosines)
double oracle_km(double lat1, double lon1, double lat2, double lon2) {
    const double rad = std::acos(-1.0) / 180.0;
    const double p1 = lat1 * rad, p2 = lat2 * rad, dl = (lon2 - lon1) * rad;
    const double y = std::sqrt(std::pow(std::cos(p2) * std::sin(dl), 2) +
                               std::pow(std::cos(p1) * std::sin(p2) -
                                            std::sin(p1) * std::cos(p2) * std::cos(dl),
                                        2));
    const double x = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    return 6371.0088 * std::atan2(y, x);
}

std::vector<std::vector<double>> parse_matrix_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));  // header
    std::vector<std::vector<double>> out;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // row id
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

TEST_CASE("generate is deterministic and writes a valid instance") {
    const fs::path a = kWork / "gen_a.json", b = kWork / "gen_b.json";
    CHECK(run("generate --seed 5 --hospitals 3 --sites 3 --disposal 2 --out " + a.string()) == 0);
    CHECK(run("generate --seed 5 --hospitals 3 --sites 3 --disposal 2 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    const clsc::Instance inst = clsc::load_instance_file(a.string());
    CHECK(inst.hospitals.size() == 3);
    CHECK(inst.sites.size() == 3);
    CHECK(inst.disposal_sites.size() == 2);
}

TEST_CASE("generate honours parameter overrides") {
    const fs::path p = kWork / "gen_over.json";
    CHECK(run("generate --seed 6 --hospitals 2 --sites 2 --disposal 1 "
              "--alpha 0.5 --beta 0.7 --price 3.25 --budget 900000 --out " +
              p.string()) == 0);
    const clsc::Instance inst = clsc::load_instance_file(p.string());
    CHECK(inst.params.alpha == 0.5);
    CHECK(inst.params.beta == 0.7);
    CHECK(inst.params.price == 3.25);
    CHECK(inst.params.budget == 900000.0);
}

TEST_CASE("argument errors exit with code 2") {
    CHECK(run("solve --instance missing.json") == 2);  // --out is required
    CHECK(run("frobnicate") == 2);                     // unknown subcommand
    CHECK(run("") == 2);                               // a subcommand is required
    const fs::path inst = kWork / "gen_a.json";
    const fs::path out = kWork / "obj_bad.json";
    CHECK(run("solve --instance " + inst.string() + " --objective Z9 --out " + out.string()) ==
          2);
}

TEST_CASE("missing input file exits with code 1") {
    CHECK(run("distances --instance " + (kWork / "no_such.json").string() + " --out " +
              (kWork / "d").string()) == 1);
}

TEST_CASE("distances match an independent great-circle computation") {
    const fs::path inst_path = kWork / "gen_a.json";
    const fs::path prefix = kWork / "dist";
    CHECK(run("distances --instance " + inst_path.string() + " --out " + prefix.string()) == 0);
    const clsc::Instance inst = clsc::load_instance_file(inst_path.string());
    const auto hs = parse_matrix_csv(kWork / "dist_hospital_site.csv");
    const auto ss = parse_matrix_csv(kWork / "dist_site_site.csv");
    REQUIRE(hs.size() == inst.hospitals.size());
    REQUIRE(ss.size() == inst.sites.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        REQUIRE(hs[i].size() == inst.sites.size());
        for (std::size_t j = 0; j < hs[i].size(); ++j) {
            const double want = oracle_km(inst.hospitals[i].lat, inst.hospitals[i].lon,
                                          inst.sites[j].lat, inst.sites[j].lon);
            CHECK(hs[i][j] == doctest::Approx(want).epsilon(1e-3));
        }
    }
    for (std::size_t j = 0; j < ss.size(); ++j) {
        CHECK(ss[j][j] == 0.0);
        for (std::size_t k = 0; k < ss[j].size(); ++k) CHECK(ss[j][k] == ss[k][j]);
    }
}

TEST_CASE("distances pass an explicit override through verbatim") {
    clsc::Instance inst = clsc::load_instance_file((kWork / "gen_over.json").string());
    clsc::DistanceOverride ov;
    ov.hospital_site = {{10.0, 20.0}, {30.0, 40.0}};
    ov.site_site = {{0.0, 7.5}, {7.5, 0.0}};
    inst.distance_override = ov;
    const fs::path p = kWork / "override.json";
    clsc::save_instance_file(inst, p.string());
    CHECK(run("distances --instance " + p.string() + " --out " + (kWork / "ov").string()) == 0);
    const auto hs = parse_matrix_csv(kWork / "ov_hospital_site.csv");
    const auto ss = parse_matrix_csv(kWork / "ov_site_site.csv");
    CHECK(hs == ov.hospital_site);
    CHECK(ss == ov.site_site);
}

TEST_CASE("solve writes a report that compare can consume") {
    const fs::path inst = kWork / "gen_a.json";
    const fs::path sol = kWork / "solve_z1.json";
    CHECK(run("solve --instance " + inst.string() + " --objective Z1 --out " + sol.string()) ==
          0);
    const json doc = json::parse(slurp(sol));
    CHECK(doc["status"] == "Optimal");
    CHECK(doc["objective"].contains("z1"));
    const double collected = doc["flows"]["collected"].get<double>();
    const double reprocessed = doc["flows"]["reprocessed"].get<double>();
    const double disposed = doc["flows"]["disposed"].get<double>();
    CHECK(collected == doctest::Approx(reprocessed + disposed));
    CHECK(doc["points"].size() == 1);

    const fs::path rep = kWork / "compare.json";
    std::string shown;
    CHECK(run("compare --instance " + inst.string() + " --point " + sol.string() + " --out " +
                  rep.string(),
              &shown) == 0);
    CHECK(shown.find("Circular Economy") != std::string::npos);
    const json rdoc = json::parse(slurp(rep));
    CHECK(rdoc["circular"]["z1"].get<double>() ==
          doctest::Approx(doc["objective"]["z1"].get<double>()));
    CHECK(rdoc["linear"]["z3_low"].get<long>() == 20);
    CHECK(rdoc["linear"]["z3_high"].get<long>() == 30);
}

TEST_CASE("solve reports infeasibility with exit code 3") {
    const fs::path tiny = kWork / "tiny_budget.json";
    CHECK(run("generate --seed 7 --hospitals 2 --sites 2 --disposal 1 --budget 1 --out " +
              tiny.string()) == 0);
    const fs::path sol = kWork / "solve_infeasible.json";
    CHECK(run("solve --instance " + tiny.string() + " --out " + sol.string()) == 3);
    CHECK(json::parse(slurp(sol))["status"] == "Infeasible");

    // unreachable job bound on a feasible instance
    const fs::path sol2 = kWork / "solve_eps3.json";
    CHECK(run("solve --instance " + (kWork / "gen_a.json").string() +
              " --eps3 1000000000 --out " + sol2.string()) == 3);
}

TEST_CASE("solve can dump the model in LP text format") {
    const fs::path lp = kWork / "model.lp";
    const fs::path sol = kWork / "solve_dump.json";
    CHECK(run("solve --instance " + (kWork / "gen_over.json").string() + " --out " +
              sol.string() + " --dump-lp " + lp.string()) == 0);
    const std::string text = slurp(lp);
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Binaries") != std::string::npos);
}

TEST_CASE("pareto runs are deterministic and internally consistent") {
    const fs::path inst = kWork / "gen_over.json";
    const fs::path csv1 = kWork / "front1.csv", csv2 = kWork / "front2.csv";
    const fs::path js = kWork / "front.json";
    CHECK(run("pareto --instance " + inst.string() + " --n2 2 --n3 2 --out-csv " +
              csv1.string() + " --out-json " + js.string()) == 0);
    CHECK(run("pareto --instance " + inst.string() + " --n2 2 --n3 2 --out-csv " +
              csv2.string()) == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    std::istringstream head(slurp(csv1));
    std::string header;
    std::getline(head, header);
    CHECK(header == "eps2,eps3,z1,z2,z3,open_collection,open_reprocessing");
    const json front = json::parse(slurp(js));
    CHECK(front["points"].size() >= 1);
}
