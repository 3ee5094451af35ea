#include "sqcav/cli.hpp"

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <sstream>

using namespace sqcav;
namespace fs = std::filesystem;

namespace {

const std::string config_dir = SQCAV_CONFIG_DIR;

struct Run {
    int code = -1;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("sqcav_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

io::json parse_json(const std::string& s) { return io::json::parse(s); }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

} // namespace

TEST(ParseComplex, Forms) {
    EXPECT_EQ(cli::parse_complex("0.5"), Complex(0.5, 0.0));
    EXPECT_EQ(cli::parse_complex("-2j"), Complex(0.0, -2.0));
    EXPECT_EQ(cli::parse_complex("1+2j"), Complex(1.0, 2.0));
    EXPECT_EQ(cli::parse_complex(" 1e-1-3.5j "), Complex(0.1, -3.5));
    for (const char* bad : {"", "j", "1+", "1+2", "abc", "1+2jj", "1 2"}) {
        EXPECT_THROW(cli::parse_complex(bad), ParseError) << bad;
    }
}

TEST(ParseTarget, Kinds) {
    const auto f = cli::parse_target("fock:4");
    EXPECT_EQ(f.kind, cli::TargetSpec::Kind::Fock);
    EXPECT_EQ(f.fock, 4);
    const auto b = cli::parse_target("binary:0.6,0.8j");
    EXPECT_EQ(b.kind, cli::TargetSpec::Kind::Binary);
    ASSERT_EQ(b.coefficients.size(), 2u);
    EXPECT_EQ(b.coefficients[1], Complex(0.0, 0.8));
    EXPECT_EQ(cli::parse_target("coeffs:1,0,1").coefficients.size(), 3u);
    for (const char* bad : {"fock", "fock:-1", "fock:2x", "binary:1", "binary:1,2,3", "gauss:1", "coeffs:1,q"}) {
        EXPECT_THROW(cli::parse_target(bad), ParseError) << bad;
    }
}

TEST(Config, ParsesKeysAndComments) {
    const auto c = parse_config("# comment\n\ncavity.Q = 1e6  # trailing\ndevice.S_um2=25\nrun.n_max = 9\n");
    EXPECT_DOUBLE_EQ(c.cavity.Q, 1e6);
    EXPECT_DOUBLE_EQ(c.device.S, 25e-12);
    ASSERT_TRUE(c.n_max.has_value());
    EXPECT_EQ(*c.n_max, 9);
    EXPECT_DOUBLE_EQ(c.device.Cg, default_config().device.Cg);
}

TEST(Config, RejectsMalformed) {
    EXPECT_THROW(parse_config("device.bogus = 1\n"), ParseError);
    EXPECT_THROW(parse_config("cavity.Q\n"), ParseError);
    EXPECT_THROW(parse_config("cavity.Q = fast\n"), ParseError);
    EXPECT_THROW(parse_config("run.n_max = 2.5\n"), ParseError);
    EXPECT_THROW(parse_config("cavity.Q = -3\n"), InvalidParameter);
}

TEST(Config, ShippedFilesLoad) {
    for (const char* name : {"reference_device.cfg", "small_squid.cfg"}) {
        EXPECT_NO_THROW(parse_config(io::read_file(config_dir + "/" + name))) << name;
    }
}

TEST(SequenceDocument, RoundTrip) {
    RabiRates r;
    r.omega1 = 4.084e10;
    r.omega2_mag = 3.1e6;
    r.theta = 0.3;
    r.omega_cavity = 1.8837e12;
    const auto seq = synthesize(TargetState({0.6, Complex(0.0, 0.8)}), r, {true, std::nullopt});
    const auto back = io::parse_sequence(io::dump_sequence(seq));
    ASSERT_EQ(back.steps.size(), seq.steps.size());
    EXPECT_EQ(back.n_max, seq.n_max);
    EXPECT_EQ(back.rates.theta, seq.rates.theta);
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
        EXPECT_EQ(back.steps[i].kind, seq.steps[i].kind);
        EXPECT_EQ(back.steps[i].duration, seq.steps[i].duration);
    }
    EXPECT_EQ(io::dump_sequence(back), io::dump_sequence(seq));
}

TEST(SequenceDocument, RejectsMalformed) {
    EXPECT_THROW(io::parse_sequence("{not json"), ParseError);
    EXPECT_THROW(io::parse_sequence("{}"), ParseError);
    const std::string base =
        R"({"rates":{"omega1":1,"omega2_mag":1,"theta":0,"omega_cavity":1},"n_max":3,"steps":[)";
    EXPECT_NO_THROW(io::parse_sequence(base + R"({"kind":"RedSideband","duration_s":1}]})"));
    EXPECT_THROW(io::parse_sequence(base + R"({"kind":"green","duration_s":1}]})"), ParseError);
    EXPECT_THROW(io::parse_sequence(base + R"({"kind":"RedSideband","duration_s":"x"}]})"), ParseError);
    EXPECT_THROW(io::parse_sequence(base + R"({"kind":"RedSideband"}]})"), ParseError);
    EXPECT_THROW(io::read_file("/nonexistent/sqcav/seq.json"), ParseError);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"compile"}).code, 2);
    EXPECT_EQ(run({"compile", "fock:x"}).code, 2);
    EXPECT_EQ(run({"--set", "cavity.nope=1", "feasibility"}).code, 2);
    EXPECT_EQ(run({"--set", "cavity.Q", "feasibility"}).code, 2);
    EXPECT_EQ(run({"-c", "/nonexistent/sqcav.cfg", "feasibility"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DomainErrorsExitThree) {
    EXPECT_EQ(run({"--set", "cavity.Q=-1", "feasibility"}).code, 3);
    EXPECT_EQ(run({"compile", "coeffs:0,0"}).code, 3);
    const auto r = run({"compile", "fock:5", "--n-max", "6"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, UnreachablePhaseExitsFourUnlessIdleAllowed) {
    const auto r = run({"compile", "binary:0.6,0.8j"});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("--allow-idle"), std::string::npos);
    const auto ok = run({"compile", "binary:0.6,0.8j", "--allow-idle"});
    EXPECT_EQ(ok.code, 0);
    ASSERT_EQ(ok.err.rfind("fidelity ", 0), 0u);
    EXPECT_GE(std::stod(ok.err.substr(9)), 1 - 1e-9);
}

TEST(Cli, CompileFockOne) {
    const auto r = run({"compile", "fock:1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = parse_json(r.out);
    ASSERT_EQ(doc["steps"].size(), 2u);
    EXPECT_EQ(doc["steps"][0]["kind"], "Carrier");
    EXPECT_EQ(doc["steps"][1]["kind"], "RedSideband");
    EXPECT_EQ(r.err, "fidelity 1\n");
}

TEST(Cli, CompileFockZeroIsEmpty) {
    const auto r = run({"compile", "fock:0"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(parse_json(r.out)["steps"].empty());
}

TEST(Cli, CompileCoeffsWithIdle) {
    TempDir dir;
    const auto path = dir.file("seq.json");
    const auto r = run({"compile", "coeffs:0.5,-0.5j,0.5,0.5j", "--allow-idle", "-o", path});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(r.out.rfind("fidelity ", 0), 0u);
    EXPECT_GE(std::stod(r.out.substr(9)), 1 - 1e-9);
    const auto seq = io::parse_sequence(io::read_file(path));
    EXPECT_GE(seq.n_max, 3 + guard_band);
}

TEST(Cli, SimulateRoundTrip) {
    TempDir dir;
    const auto empty = dir.file("empty.json");
    ASSERT_EQ(run({"compile", "fock:0", "-o", empty}).code, 0);
    const auto r0 = run({"simulate", empty});
    ASSERT_EQ(r0.code, 0) << r0.err;
    const auto l0 = lines(r0.out);
    EXPECT_EQ(l0.at(0), "state,magnitude,phase");
    EXPECT_EQ(l0.at(1), "|g,0>,1,0");

    const auto two = dir.file("two.json");
    ASSERT_EQ(run({"compile", "fock:2", "-o", two}).code, 0);
    const auto r2 = run({"simulate", two});
    ASSERT_EQ(r2.code, 0);
    for (const auto& l : lines(r2.out)) {
        if (l.rfind("|g,2>,", 0) == 0) {
            EXPECT_NEAR(std::stod(l.substr(6)), 1.0, 1e-10);
            return;
        }
    }
    FAIL() << "no |g,2> row";
}

TEST(Cli, SimulateDissipativeLosesPopulation) {
    TempDir dir;
    const auto cfg = config_dir + "/reference_device.cfg";
    const auto path = dir.file("one.json");
    ASSERT_EQ(run({"-c", cfg, "compile", "fock:1", "-o", path}).code, 0);
    const auto r = run({"-c", cfg, "simulate", path, "--dissipative"});
    ASSERT_EQ(r.code, 0) << r.err;
    double p = -1.0, total = 0.0;
    for (const auto& l : lines(r.out)) {
        if (l.front() != '|') continue;
        const double v = std::stod(l.substr(l.rfind(',') + 1));
        total += v;
        if (l.rfind("|g,1>,", 0) == 0) p = v;
    }
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(Cli, FeasibilityVerdicts) {
    const auto reference = run({"-c", config_dir + "/reference_device.cfg", "feasibility"});
    ASSERT_EQ(reference.code, 0) << reference.err;
    const auto doc = parse_json(reference.out);
    EXPECT_TRUE(doc["single_photon_ok"].get<bool>());
    EXPECT_TRUE(doc["fock_ok"].get<bool>());
    EXPECT_GE(doc["max_fock"].get<long long>(), 100);

    const auto small = run({"-c", config_dir + "/small_squid.cfg", "feasibility"});
    ASSERT_EQ(small.code, 0);
    EXPECT_FALSE(parse_json(small.out)["single_photon_ok"].get<bool>());

    const auto lossy = run({"-c", config_dir + "/reference_device.cfg", "--set", "cavity.Q=1e6", "feasibility",
                            "--target-n", "100"});
    ASSERT_EQ(lossy.code, 0);
    EXPECT_FALSE(parse_json(lossy.out)["fock_ok"].get<bool>());
}

TEST(Cli, FeasibilityToFile) {
    TempDir dir;
    const auto path = dir.file("report.json");
    ASSERT_EQ(run({"feasibility", "-o", path}).code, 0);
    const auto doc = parse_json(io::read_file(path));
    EXPECT_TRUE(doc.contains("tau_e_s"));
    EXPECT_TRUE(doc.contains("max_fock"));
}

TEST(Cli, Fig2SingleRowAndPaperPoint) {
    const auto one = run({"fig2", "--n-min", "1", "--n-max", "1"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(lines(one.out).size(), 2u);
    EXPECT_EQ(lines(one.out)[0], "n,ratio");

    const auto full = run({"fig2"});
    ASSERT_EQ(full.code, 0);
    const auto l = lines(full.out);
    ASSERT_EQ(l.size(), 101u);
    ASSERT_EQ(l.back().rfind("100,", 0), 0u);
    EXPECT_GT(std::stod(l.back().substr(4)), 1.0);
    EXPECT_EQ(run({"fig2", "--n-min", "5", "--n-max", "2"}).code, 3);
}

TEST(Cli, Fig2QualityListScalesLinearly) {
    TempDir dir;
    const auto prefix = dir.file("curve");
    const auto r = run({"fig2", "--n-max", "10", "--q-list", "1e6,3e8", "-o", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto files = lines(r.out);
    ASSERT_EQ(files.size(), 2u);
    const auto lo = lines(io::read_file(files[0]));
    const auto hi = lines(io::read_file(files[1]));
    ASSERT_EQ(lo.size(), hi.size());
    for (std::size_t i = 1; i < lo.size(); ++i) {
        const double a = std::stod(lo[i].substr(lo[i].find(',') + 1));
        const double b = std::stod(hi[i].substr(hi[i].find(',') + 1));
        EXPECT_NEAR(b / a, 300.0, 300.0 * 1e-12);
    }
}

TEST(Cli, SweepKeepsOrderAndIsDeterministic) {
    const std::vector<std::string> args = {"sweep", "--param", "device.S_um2", "--values", "100,1,25,4"};
    const auto a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    const auto l = lines(a.out);
    ASSERT_EQ(l.size(), 5u);
    EXPECT_EQ(l[0].substr(0, 6), "value,");
    const char* order[] = {"100,", "1,", "25,", "4,"};
    for (int i = 0; i < 4; ++i) EXPECT_EQ(l[i + 1].rfind(order[i], 0), 0u) << l[i + 1];
    for (int rep = 0; rep < 3; ++rep) EXPECT_EQ(run(args).out, a.out);
    EXPECT_EQ(run({"sweep", "--param", "device.nope", "--values", "1"}).code, 2);
}
