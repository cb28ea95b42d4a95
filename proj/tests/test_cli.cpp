#include <gtest/gtest.h>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "support/oracles.hpp"
#include "tldn/commands.hpp"
#include "tldn/dn_document.hpp"
#include "tldn/touchstone.hpp"

using namespace tldn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tldn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0 ? 1 : 0;
    return n;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tldn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string loadgen(std::size_t n, const std::string& name, const std::string& seed = "7",
                        const std::string& coupling = "0.6", const std::string& span = "2e8",
                        const std::string& points = "21") {
        const auto r = run_cli({"loadgen", "--n", std::to_string(n), "--f0", "1e9", "--span", span, "--points",
                                points, "--seed", seed, "--coupling", coupling, "--out", path(name)});
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    fs::path dir_;
};

std::size_t table_rows(const std::string& text) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        n += line.size() > 2 && line.rfind("TL", 0) == 0 && std::isdigit(static_cast<unsigned char>(line[2])) ? 1 : 0;
    }
    return n;
}

}  // namespace

TEST_F(CliTest, SynthesizeAndVerifyTwoPort) {
    const auto load = loadgen(2, "load.s2p");
    const auto syn = run_cli({"synthesize", "--load", load, "--f0", "1e9", "--z0-max", "1e300", "--out", path("dn.json")});
    ASSERT_EQ(syn.code, 0) << syn.err;
    EXPECT_EQ(table_rows(syn.out), 10u);
    EXPECT_NE(syn.out.find("theta (degree)"), std::string::npos);

    const auto ver = run_cli({"verify", "--load", load, "--dn", path("dn.json")});
    EXPECT_EQ(ver.code, 0) << ver.err;
    EXPECT_NE(ver.out.find("PASS"), std::string::npos);
    EXPECT_EQ(count_lines_starting(ver.out, "S"), 4u);
}

TEST_F(CliTest, ThreePortTableHasTwentyOneRows) {
    const auto load = loadgen(3, "load.s3p", "3", "0.9");
    const auto syn = run_cli({"synthesize", "--load", load, "--f0", "1e9", "--v", "random:4", "--z0-max", "1e300",
                              "--out", path("dn.json")});
    ASSERT_EQ(syn.code, 0) << syn.err;
    EXPECT_EQ(table_rows(syn.out), 21u);
    EXPECT_EQ(read_document(path("dn.json")).branches.size(), 21u);
}

TEST_F(CliTest, VerifyOnPerturbedLoadIsAboveThreshold) {
    const auto load = loadgen(2, "load.s2p");
    ASSERT_EQ(run_cli({"synthesize", "--load", load, "--f0", "1e9", "--out", path("dn.json")}).code, 0);
    NetworkData data = touchstone::parse_file(load);
    const auto k = static_cast<std::size_t>(find_frequency(data, 1e9));
    data.matrices[k].set(0, 0, data.matrices[k](0, 0) + Complex{0.05, 0.0});
    touchstone::write_file(path("bumped.s2p"), data, DataFormat::RI);
    const auto ver = run_cli({"verify", "--load", path("bumped.s2p"), "--dn", path("dn.json")});
    EXPECT_EQ(ver.code, 5);
    EXPECT_NE(ver.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, LoadgenIsDeterministicAndPassive) {
    const auto a = loadgen(3, "a.s3p", "42", "0.8", "4e8", "41");
    const auto b = loadgen(3, "b.s3p", "42", "0.8", "4e8", "41");
    EXPECT_EQ(slurp(a), slurp(b));
    const NetworkData net = touchstone::parse_file(a);
    EXPECT_EQ(net.frequencies.size(), 41u);
    EXPECT_GE(find_frequency(net, 1e9), 0);
    for (const auto& s : net.matrices) {
        EXPECT_LE(svd(s).sigma.front(), 0.8 + 1e-8);
        EXPECT_LE(symmetry_defect(s), 1e-9);
    }
    const auto z = loadgen(2, "z.s2p", "1", "0");
    for (const auto& s : touchstone::parse_file(z).matrices) EXPECT_EQ(max_abs(s), 0.0);
}

TEST_F(CliTest, SweepWritesTouchstoneAndCsv) {
    const auto load = loadgen(2, "load.s2p");
    ASSERT_EQ(run_cli({"synthesize", "--load", load, "--f0", "1e9", "--v", "random:1", "--out", path("dn.json")}).code, 0);
    const auto r = run_cli({"sweep", "--load", load, "--dn", path("dn.json"), "--out", path("comp.s2p"), "--csv",
                            path("comp.csv"), "--threads", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(touchstone::parse_file(path("comp.s2p")).frequencies.size(), 21u);
    std::istringstream csv(slurp(path("comp.csv")));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "freq_hz,S11_db,S12_db,S21_db,S22_db");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line); ++rows) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4) << line;
    }
    EXPECT_EQ(rows, 21u);
}

TEST_F(CliTest, SweepFlagsResonantPoints) {
    // The ±20% grid reaches 0.8·f0 where 225° lines become half-wave.
    const auto load = loadgen(2, "load.s2p", "7", "0.6", "4e8", "5");
    ASSERT_EQ(run_cli({"synthesize", "--load", load, "--f0", "1e9", "--out", path("dn.json")}).code, 0);
    const auto r = run_cli({"sweep", "--load", load, "--dn", path("dn.json"), "--out", path("comp.s2p"), "--csv",
                            path("comp.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(path("comp.csv"));
    EXPECT_NE(csv.find(",flags\n"), std::string::npos);
    EXPECT_NE(csv.find("perturbed"), std::string::npos);
}

TEST_F(CliTest, ExportNetlistAndCsv) {
    const auto load = loadgen(2, "load.s2p");
    ASSERT_EQ(run_cli({"synthesize", "--load", load, "--f0", "1e9", "--z0-max", "1e300", "--out", path("dn.json")}).code, 0);
    const auto net = run_cli({"export", "--dn", path("dn.json"), "--format", "netlist"});
    ASSERT_EQ(net.code, 0) << net.err;
    EXPECT_EQ(count_lines_starting(net.out, "TL_"), 10u);
    EXPECT_NE(net.out.find("TL_11 1 0 "), std::string::npos);
    EXPECT_NE(net.out.find("\n.end\n"), std::string::npos);

    ASSERT_EQ(run_cli({"export", "--dn", path("dn.json"), "--format", "csv", "--out", path("dn.csv")}).code, 0);
    const DNDocument doc = read_document(path("dn.json"));
    std::istringstream csv(slurp(path("dn.csv")));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "branch,i,j,z0_ohm,theta_deg");
    for (const auto& b : doc.branches) {
        ASSERT_TRUE(std::getline(csv, line));
        std::istringstream row(line);
        std::string name, i, j, z0, th;
        std::getline(row, name, ',');
        std::getline(row, i, ',');
        std::getline(row, j, ',');
        std::getline(row, z0, ',');
        std::getline(row, th, ',');
        EXPECT_EQ(std::stoul(i), b.i);
        EXPECT_EQ(std::stoul(j), b.j);
        EXPECT_EQ(std::stod(z0), b.z0_ohm);
        EXPECT_EQ(std::stod(th), b.theta_deg);
    }
}

TEST_F(CliTest, PrunedBranchesAreCommentsInNetlist) {
    const auto load = loadgen(2, "load.s2p");
    const auto syn = run_cli({"synthesize", "--load", load, "--f0", "1e9", "--z0-max", "60", "--out", path("dn.json")});
    ASSERT_EQ(syn.code, 0) << syn.err;
    const DNDocument doc = read_document(path("dn.json"));
    ASSERT_FALSE(doc.pruned.empty());
    EXPECT_EQ(table_rows(syn.out), 10u);
    EXPECT_NE(syn.out.find("(pruned"), std::string::npos);
    const auto net = run_cli({"export", "--dn", path("dn.json"), "--format", "netlist"});
    EXPECT_EQ(count_lines_starting(net.out, "TL_"), doc.branches.size());
    EXPECT_EQ(count_lines_starting(net.out, "* pruned"), doc.pruned.size());
}

TEST_F(CliTest, DocumentRoundTrip) {
    const auto load = loadgen(2, "load.s2p");
    ASSERT_EQ(run_cli({"synthesize", "--load", load, "--f0", "1e9", "--v", "random:9", "--out", path("dn.json")}).code, 0);
    const DNDocument a = read_document(path("dn.json"));
    EXPECT_EQ(a.v_spec.kind, "random");
    ASSERT_TRUE(a.v_spec.seed);
    EXPECT_EQ(*a.v_spec.seed, 9u);
    const DNDocument b = from_json(to_json(a));
    EXPECT_EQ(to_json(a), to_json(b));
}

TEST_F(CliTest, InputErrorsExitTwoWithJsonLine) {
    auto r = run_cli({"synthesize", "--load", path("missing.s2p"), "--f0", "1e9", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 2);
    const auto j = nlohmann::json::parse(r.err);
    EXPECT_EQ(j.at("error"), "io_error");
    EXPECT_TRUE(j.contains("message"));

    const auto load = loadgen(2, "load.s2p");
    r = run_cli({"synthesize", "--load", load, "--f0", "1.003e9", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "f0_not_on_grid");

    r = run_cli({"synthesize", "--load", load, "--f0", "1e9", "--v", "sideways", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 2);

    r = run_cli({});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "usage_error");

    std::ofstream(path("bad.s1p")) << "# Hz Y RI R 50\n1 0 0\n";
    r = run_cli({"synthesize", "--load", path("bad.s1p"), "--f0", "1", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "unsupported_parameter");
}

TEST_F(CliTest, SynthesisFailureExitsThree) {
    std::ofstream(path("matched.s1p")) << "# Hz S RI R 50\n1000 0 0\n";
    const auto r = run_cli({"synthesize", "--load", path("matched.s1p"), "--f0", "1000", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "conversion_singularity");
    EXPECT_EQ(run_cli({"synthesize", "--load", path("matched.s1p"), "--f0", "1000", "--v", "random:2", "--out",
                       path("dn.json")})
                  .code,
              0);
}

TEST_F(CliTest, ValidationFailuresExitFour) {
    std::ofstream(path("active.s1p")) << "# Hz S RI R 50\n1000 1.5 0\n";
    auto r = run_cli({"synthesize", "--load", path("active.s1p"), "--f0", "1000", "--out", path("dn.json")});
    EXPECT_EQ(r.code, 4);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "passivity_error");

    const auto two = loadgen(2, "two.s2p");
    const auto three = loadgen(3, "three.s3p");
    ASSERT_EQ(run_cli({"synthesize", "--load", two, "--f0", "1e9", "--out", path("dn.json")}).code, 0);
    r = run_cli({"verify", "--load", three, "--dn", path("dn.json")});
    EXPECT_EQ(r.code, 4);
    EXPECT_EQ(nlohmann::json::parse(r.err).at("error"), "dimension_error");
}

TEST_F(CliTest, HelpExitsZero) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("synthesize"), std::string::npos);
}
