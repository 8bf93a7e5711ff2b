#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "cli_app.hpp"

namespace {

using nlohmann::json;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dkc::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    const auto r = run(std::move(args));
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (ch == '"') quoted = false;
            else cur += ch;
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur), cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

/// Data section of a CSV document (header + rows, up to the blank line).
std::vector<std::vector<std::string>> csv_table(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line) && !line.empty();) rows.push_back(split_csv_line(line));
    return rows;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("dkc_test_" + std::to_string(::getpid()) + "_" + name);
}

TEST(CliSpectrum, MatchesLibraryAndSommerfeld) {
    const auto doc = run_json({"spectrum", "--alpha-v", "0.5", "--n", "1..4"});
    ASSERT_EQ(doc["rows"].size(), 4u);
    const double s = std::sqrt(0.75);
    for (int i = 0; i < 4; ++i) {
        const auto& row = doc["rows"][i];
        EXPECT_EQ(row["n"].get<int>(), i + 1);
        const double ref = 1.0 / std::sqrt(1.0 + 0.25 / ((i + 1 + s) * (i + 1 + s)));
        EXPECT_NEAR(row["E_over_m"].get<double>(), ref, 1e-14);
        EXPECT_TRUE(row["valid"].get<bool>());
    }
    EXPECT_EQ(doc["meta"]["command"], "spectrum");
    EXPECT_EQ(doc["meta"]["params"]["kappa"].get<double>(), -1.0);
}

TEST(CliSpectrum, FreeLimit) {
    const auto doc = run_json({"spectrum", "--alpha-v", "1e-12", "--alpha-s", "1e-12", "--n", "1..3"});
    for (const auto& row : doc["rows"]) EXPECT_LT(std::abs(row["E_over_m"].get<double>() - 1.0), 1e-11);
}

TEST(CliSpectrum, SupercriticalIsDomainError) {
    const auto r = run({"spectrum", "--alpha-v", "1.2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("dkc:"), std::string::npos);
}

TEST(CliWavefunction, GridAndNormalisation) {
    const auto doc = run_json({"wavefunction", "--alpha-v", "0.5", "--alpha-s", "0.2", "--n", "2", "--r-points", "400"});
    ASSERT_EQ(doc["rows"].size(), 400u);
    double trapezoid = 0.0;
    for (std::size_t i = 1; i < doc["rows"].size(); ++i) {
        const auto& a = doc["rows"][i - 1];
        const auto& b = doc["rows"][i];
        const double fa = std::pow(a["F"].get<double>(), 2) + std::pow(a["G"].get<double>(), 2);
        const double fb = std::pow(b["F"].get<double>(), 2) + std::pow(b["G"].get<double>(), 2);
        trapezoid += 0.5 * (b["r"].get<double>() - a["r"].get<double>()) * (fa + fb);
    }
    EXPECT_NEAR(trapezoid, 1.0, 1e-3);
    for (const auto& rep : doc["reports"])
        if (rep["check"] == "ode.first_order" || rep["check"] == "ode.second_order") EXPECT_TRUE(rep["passed"].get<bool>());
}

TEST(CliWavefunction, RejectsRangesAndBadGrids) {
    EXPECT_EQ(run({"wavefunction", "--n", "1..2"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--n", "0"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--r-min", "2", "--r-max", "1"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--r-points", "1"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--r-spacing", "cubic"}).code, 2);
    EXPECT_EQ(run({"wavefunction", "--j", "1"}).code, 2);
}

TEST(CliCoherent, ReportsPassForModerateLabel) {
    const auto doc = run_json({"coherent", "--alpha-v", "0.5", "--alpha-s", "0.2", "--xi-re", "0.4"});
    for (const auto& rep : doc["reports"]) {
        const std::string check = rep["check"];
        if (check.rfind("coherent.", 0) == 0) EXPECT_TRUE(rep["passed"].get<bool>()) << check;
    }
}

TEST(CliCoherent, VacuumHasRealComponents) {
    const auto doc = run_json({"coherent", "--xi-re", "0", "--r-points", "50"});
    for (const auto& row : doc["rows"]) {
        EXPECT_EQ(row["im_F"].get<double>(), 0.0);
        EXPECT_EQ(row["im_G"].get<double>(), 0.0);
    }
}

TEST(CliCoherent, OutsideDiscIsDomainError) {
    EXPECT_EQ(run({"coherent", "--xi-re", "0.8", "--xi-im", "0.6"}).code, 2);
    EXPECT_EQ(run({"coherent", "--xi-re", "-1"}).code, 2);
}

TEST(CliVerify, PassesAndPerturbationFails) {
    const auto ok = run({"verify"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    const auto doc = json::parse(ok.out);
    EXPECT_EQ(doc["reports"].size(), static_cast<std::size_t>(dkc::kVerificationCheckCount));
    EXPECT_EQ(doc["meta"]["failed"].get<int>(), 0);
    const auto bad = run({"verify", "--_perturb"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_FALSE(bad.out.empty());
}

TEST(CliVerify, ToleranceOverride) {
    const auto r = run({"verify", "--tolerance", "ode.first_order=1e-30"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(run({"verify", "--tolerance", "nonsense=1"}).code, 2);
    EXPECT_EQ(run({"verify", "--tolerance", "ode.first_order=-1"}).code, 2);
    EXPECT_EQ(run({"verify", "--tolerance", "ode.first_order"}).code, 2);
}

TEST(CliSweep, CardinalityAndInvalidCells) {
    const auto doc = run_json({"sweep", "--alpha-v-range", "0.3:1.2:3", "--alpha-s-range", "0:0.2:3", "--n", "1..2"});
    ASSERT_EQ(doc["rows"].size(), 18u);
    int invalid = 0;
    for (const auto& row : doc["rows"]) {
        if (!row["valid"].get<bool>()) {
            ++invalid;
            EXPECT_TRUE(row["E_over_m"].is_null());
            EXPECT_FALSE(row["error"].get<std::string>().empty());
        }
    }
    // α_v = 1.2 with α_s ≤ 0.2 is supercritical for κ = −1
    EXPECT_EQ(invalid, 6);
}

TEST(CliSweep, EnergyIncreasesWithN) {
    const auto doc = run_json({"sweep", "--alpha-v-range", "0.2:0.6:3", "--n", "1..6"});
    for (std::size_t i = 1; i < doc["rows"].size(); ++i) {
        const auto& a = doc["rows"][i - 1];
        const auto& b = doc["rows"][i];
        if (a["alpha_v"] == b["alpha_v"]) EXPECT_GT(b["E_over_m"].get<double>(), a["E_over_m"].get<double>());
    }
}

TEST(CliSweep, RejectsHugeSweeps) {
    EXPECT_EQ(run({"sweep", "--alpha-v-range", "0.1:0.5:1000", "--alpha-s-range", "0:0.1:1000"}).code, 2);
    EXPECT_EQ(run({"sweep", "--alpha-v-range", "0.1:0.5"}).code, 2);
}

TEST(CliFormats, JsonAndCsvCarryTheSameValues) {
    for (const std::vector<std::string> base :
         {std::vector<std::string>{"spectrum", "--alpha-v", "0.4", "--n", "1..5"},
          std::vector<std::string>{"wavefunction", "--r-points", "30"},
          std::vector<std::string>{"coherent", "--xi-re", "0.2", "--xi-im", "-0.3", "--r-points", "30"},
          std::vector<std::string>{"sweep", "--alpha-v-range", "0.5:1.1:3"}}) {
        auto as_json = base;
        as_json.insert(as_json.end(), {"--format", "json"});
        auto as_csv = base;
        as_csv.insert(as_csv.end(), {"--format", "csv"});
        const auto doc = run_json(as_json);
        const auto csv = run(as_csv);
        ASSERT_EQ(csv.code, 0);
        const auto table = csv_table(csv.out);
        ASSERT_EQ(table.size(), doc["rows"].size() + 1);
        const auto& header = table[0];
        for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
            const auto& row = doc["rows"][i];
            ASSERT_EQ(table[i + 1].size(), header.size());
            for (std::size_t c = 0; c < header.size(); ++c) {
                const auto& v = row[header[c]];
                const std::string& cell = table[i + 1][c];
                if (v.is_null()) EXPECT_EQ(cell, "");
                else if (v.is_boolean()) EXPECT_EQ(cell, v.get<bool>() ? "true" : "false");
                else if (v.is_number()) EXPECT_EQ(std::stod(cell), v.get<double>()) << header[c];
                else EXPECT_EQ(cell, v.get<std::string>());
            }
        }
    }
}

TEST(CliFormats, CsvUsesSeventeenDigits) {
    const auto csv = run({"spectrum", "--n", "1", "--format", "csv"});
    const auto table = csv_table(csv.out);
    EXPECT_EQ(table[0][0], "n");
    const std::string e = table[1][1];
    EXPECT_EQ(e, dkc::format_real(std::stod(e)));
    EXPECT_NE(csv.out.find("\ncheck,residual_max,residual_rms,tolerance,passed,context\n"), std::string::npos);
}

TEST(CliDeterminism, RepeatedRunsAreIdentical) {
    for (const std::vector<std::string> args :
         {std::vector<std::string>{"verify", "--format", "csv"}, std::vector<std::string>{"coherent", "--xi-re", "0.3"}})
        EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliConfig, FileValuesAndOverrides) {
    const auto path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"command": "spectrum", "alpha_v": 0.3, "alignment": "unaligned", "n": "2..3", "xi_re": 0.5})";
    }
    const auto from_file = run_json({"--config", path.string()});
    EXPECT_EQ(from_file["rows"].size(), 2u);
    EXPECT_EQ(from_file["meta"]["params"]["alpha_v"].get<double>(), 0.3);
    EXPECT_EQ(from_file["meta"]["params"]["alignment"], "unaligned");
    const auto overridden = run_json({"spectrum", "--config", path.string(), "--alpha-v", "0.6", "--aligned"});
    EXPECT_EQ(overridden["meta"]["params"]["alpha_v"].get<double>(), 0.6);
    EXPECT_EQ(overridden["meta"]["params"]["alignment"], "aligned");
    {
        std::ofstream f(path);
        f << R"({"alpha_v": 0.3, "bogus": 1})";
    }
    EXPECT_EQ(run({"spectrum", "--config", path.string()}).code, 2);
    {
        std::ofstream f(path);
        f << "{not json";
    }
    EXPECT_EQ(run({"spectrum", "--config", path.string()}).code, 2);
    std::filesystem::remove(path);
    EXPECT_EQ(run({"spectrum", "--config", path.string()}).code, 2);
}

TEST(CliUsage, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"spectrum", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--n", "3..1"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--mass", "0"}).code, 2);
    EXPECT_EQ(run({"spectrum", "--dimension", "1"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"--version"}).code, 0);
}

TEST(CliOutput, WritesToFile) {
    const auto path = temp_path("out.csv");
    const auto r = run({"spectrum", "--format", "csv", "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream text;
    text << f.rdbuf();
    EXPECT_EQ(text.str(), run({"spectrum", "--format", "csv"}).out);
    std::filesystem::remove(path);
}

TEST(CliProcess, BinaryExitCodes) {
    const auto status = [](const std::string& args) {
        const std::string cmd = std::string(DKC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("spectrum"), 0);
    EXPECT_EQ(status("verify --_perturb"), 1);
    EXPECT_EQ(status("spectrum --alpha-v 2"), 2);
}

} // namespace
