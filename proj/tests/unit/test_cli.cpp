#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbath/cli/commands.hpp"

using namespace qbath;
using namespace qbath::cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

std::string header_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find(key + "=");
        if (line.rfind("#", 0) == 0 && pos != std::string::npos) {
            const auto start = pos + key.size() + 1;
            return line.substr(start, line.find_first_of(" ,", start) - start);
        }
    }
    return {};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, FileThenFlags) {
    const auto path = std::filesystem::temp_directory_path() / "qbath_test_config.txt";
    {
        std::ofstream f(path);
        f << "# comment\nomega0 = 1.5\neta=0.2   # trailing\n\ntimes = 0, 1, 2\nbeta = inf\n";
    }
    const auto c = parse_args({"correlators", "--config", path.string(), "--eta", "0.3", "--omega_c=500"});
    EXPECT_EQ(c.command, "correlators");
    EXPECT_DOUBLE_EQ(*c.omega0, 1.5);
    EXPECT_DOUBLE_EQ(*c.eta, 0.3);
    EXPECT_DOUBLE_EQ(*c.omega_c, 500.0);
    EXPECT_TRUE(c.beta->is_infinite());
    ASSERT_EQ(c.times->size(), 3u);
    EXPECT_DOUBLE_EQ((*c.times)[2], 2.0);
    std::filesystem::remove(path);
}

TEST(Config, Errors) {
    RunConfig c;
    EXPECT_THROW(set_key(c, "omega", "1"), ConfigError);
    EXPECT_THROW(set_key(c, "eta", "abc"), ConfigError);
    EXPECT_THROW(set_key(c, "mode", "quantum"), ConfigError);
    EXPECT_THROW(apply_text(c, "eta 0.3\n"), ConfigError);
    EXPECT_THROW(parse_args({"profile", "--eta"}), ConfigError);
    EXPECT_THROW(parse_args({"profile", "eta"}), ConfigError);
    EXPECT_THROW(parse_args({"profile", "--config", "/nonexistent/qbath.cfg"}), ConfigError);
    set_key(c, "dims", "8,10,12");
    EXPECT_EQ(c.dims, (std::vector<std::size_t>{8, 10, 12}));
}

TEST(Csv, NumberFormat) {
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(-0.0), "0");
    EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(io::format_number(1e-20), "1e-20");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({"launch"}).code, 1);
    EXPECT_EQ(run_cli({"correlators", "--nope", "1"}).code, 1);
    EXPECT_EQ(run_cli({"correlators", "--eta", "-1"}).code, 1);
    EXPECT_EQ(run_cli({"profile", "--mode", "oscillator", "--omega0", "1", "--eta", "3"}).code, 1);
    const auto failed = run_cli({"bath-check", "--n_modes", "200"});
    EXPECT_EQ(failed.code, 2) << failed.out << failed.err;
    EXPECT_EQ(run_cli({"fock-check", "--dims", "4,4,4"}).code, 2);
}

TEST(Cli, FreeParticleCorrelators) {
    const auto r = run_cli({"correlators", "--omega0", "0", "--eta", "1", "--omega_c", "1e4", "--times", "0,1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][0], "t");
    EXPECT_EQ(rows[0][1], "A");
    EXPECT_DOUBLE_EQ(std::stod(rows[1][1]), 0.0);
    EXPECT_DOUBLE_EQ(std::stod(rows[1][2]), 0.0);
    EXPECT_NEAR(std::stod(rows[2][1]), 0.3160603, 1e-7);
}

TEST(Cli, VarianceSqueezedExample) {
    const auto r = run_cli({"variance", "--omega0", "1.4142135623730951", "--eta", "2", "--beta", "inf"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_GE(rows.size(), 2u);
    EXPECT_NEAR(std::stod(rows[1][0]), 0.25, 1e-6);
}

TEST(Cli, FigureHeaders) {
    const auto fig3 = run_cli({"figures", "--fig", "3"});
    ASSERT_EQ(fig3.code, 0) << fig3.err;
    EXPECT_LE(std::stod(header_value(fig3.out, "cross_ratio")), 5e-3);
    const auto fig4 = run_cli({"figures", "--fig", "4", "--times", "1"});
    ASSERT_EQ(fig4.code, 0) << fig4.err;
    EXPECT_NEAR(std::stod(header_value(fig4.out, "t")), 0.002, 1e-12);
    EXPECT_EQ(run_cli({"figures", "--fig", "3", "--eta", "0.1"}).code, 1);
}

TEST(Cli, FockCheckPasses) {
    const auto r = run_cli({"fock-check", "--dims", "8,8,8", "--max_budget", "1e-4"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, ProfileColumnsAndSvg) {
    const auto svg = std::filesystem::temp_directory_path() / "qbath_test_profile.svg";
    const auto r = run_cli({"profile", "--mode", "no-dissipation", "--l_th_over_d", "0.5", "--times", "0,1",
                            "--time_unit", "t_mix", "--svg", svg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_GT(rows.size(), 1600u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "x", "p_total", "p_sum", "p_interference"}));
    EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);
    std::filesystem::remove(svg);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
    const std::string exe = QBATH_CLI_PATH;
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "qbath_det_a.csv", b = dir / "qbath_det_b.csv";
    const std::string args = " profile --mode free --omega0 0 --eta 0.5 --beta 2 --times 0,0.1,0.2,0.3 --output ";
    ASSERT_EQ(std::system(("QBATH_THREADS=1 " + exe + args + a.string()).c_str()), 0);
    ASSERT_EQ(std::system(("QBATH_THREADS=4 " + exe + args + b.string()).c_str()), 0);
    const std::string sa = slurp(a), sb = slurp(b);
    EXPECT_FALSE(sa.empty());
    EXPECT_EQ(sa, sb);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
