#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "brownian/rng.hpp"
#include "brownian/xcli/config.hpp"
#include "brownian/xcli/csv.hpp"
#include "brownian/xcli/experiments.hpp"
#include "brownian/xcli/manifest.hpp"
#include "oracles.hpp"

using namespace brownian;
using namespace brownian::xcli;
namespace fs = std::filesystem;

namespace {

Schema sample_schema() {
    return {{"N", FieldType::integer, "3", "spins", 2.0, 8.0},
            {"seed", FieldType::unsigned_integer, "1", "seed", {}, {}},
            {"J", FieldType::real, "0.1", "coupling", 0.0, {}},
            {"k_grid", FieldType::integer_list, "1, 2", "orders", 1.0, {}},
            {"t_grid", FieldType::real_list, "0.1, 0.2", "times", {}, {}},
            {"label", FieldType::text, "run", "label", {}, {}}};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("brownian_xcli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(Config, DefaultsOverridesAndRoundTrip) {
    ExperimentConfig c("demo", sample_schema());
    EXPECT_EQ(c.integer("N"), 3);
    c.apply_override("J=0.30000000000000004");
    c.apply_override("seed=18446744073709551615");
    c.parse_text("# comment\nexperiment = demo\nt_grid = 1e-3, 2.5 # trailing\n\nlabel = a b\n");
    EXPECT_EQ(c.unsigned_integer("seed"), 18446744073709551615ULL);
    EXPECT_EQ(c.real("J"), 0.30000000000000004);
    EXPECT_EQ(c.reals("t_grid"), (std::vector<double>{1e-3, 2.5}));
    EXPECT_EQ(c.text("label"), "a b");

    ExperimentConfig d("demo", sample_schema());
    d.parse_text(c.to_text());
    EXPECT_EQ(d.to_text(), c.to_text());
    EXPECT_EQ(d.hash(), c.hash());
    EXPECT_EQ(d.real("J"), c.real("J"));
    d.apply_override("N=4");
    EXPECT_NE(d.hash(), c.hash());
}

TEST(Config, RealsSurviveTextBitExactly) {
    CounterRng rng(5, {0});
    ExperimentConfig c("demo", sample_schema());
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(rng.uniform(), static_cast<int>(rng.uniform() * 200) - 100);
        c.set("J", format_real(v));
        EXPECT_EQ(c.real("J"), v);
    }
}

TEST(Config, FieldLevelErrors) {
    ExperimentConfig c("demo", sample_schema());
    auto message = [&](const std::string& text) {
        try {
            c.parse_text(text, "cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("N = 1\n").find("field 'N'"), std::string::npos);
    EXPECT_NE(message("N = 1\n").find("below minimum"), std::string::npos);
    EXPECT_NE(message("\nN = x\n").find("cfg:2"), std::string::npos);
    EXPECT_NE(message("bogus = 1\n").find("unknown field 'bogus'"), std::string::npos);
    EXPECT_NE(message("J\n").find("expected key = value"), std::string::npos);
    EXPECT_NE(message("experiment = other\n").find("field 'experiment'"), std::string::npos);
    EXPECT_NE(message("k_grid = \n").find("list is empty"), std::string::npos);
    EXPECT_NE(message("seed = -1\n").find("unsigned"), std::string::npos);
    EXPECT_THROW(c.apply_override("N"), ConfigError);
    EXPECT_THROW(c.load_file("/nonexistent/x.cfg"), ConfigError);
}

TEST(Csv, HeaderOnlyAndQuoting) {
    const CsvSchema s{{"name", ColumnType::text}, {"x", ColumnType::real}};
    EXPECT_EQ(render_csv(s, {}), "name,x\r\n");
    const auto text = render_csv(s, {{std::string("a,\"b\"\nc"), 1.5}});
    const auto rows = oracle::parse_csv(text);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][0], "a,\"b\"\nc");
    EXPECT_EQ(render_csv(s, {{std::string("n"), std::numeric_limits<double>::quiet_NaN()}}), "name,x\r\nn,nan\r\n");
    EXPECT_THROW(render_csv(s, {{1.0, 1.0}}), ValidationError);
    EXPECT_THROW(render_csv(s, {{std::string("a")}}), ValidationError);
    EXPECT_THROW(write_file("/nonexistent/dir/x.csv", "x"), IoError);
}

TEST(Csv, TenThousandRowsRoundTripThroughIndependentReader) {
    const CsvSchema s{{"i", ColumnType::integer}, {"x", ColumnType::real}, {"tag", ColumnType::text}};
    CounterRng rng(7, {1});
    std::vector<Row> rows;
    std::vector<double> xs;
    for (std::int64_t i = 0; i < 10000; ++i) {
        const double x = (rng.normal() * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20));
        xs.push_back(x);
        rows.push_back({i, x, std::string(i % 7 == 0 ? "q,\"t\"" : "t") + std::to_string(i)});
    }
    const auto dir = scratch("csv");
    emit_csv((dir / "big.csv").string(), s, rows);
    const auto parsed = oracle::parse_csv(slurp(dir / "big.csv"));
    ASSERT_EQ(parsed.size(), 10001u);
    EXPECT_EQ(parsed[0], (std::vector<std::string>{"i", "x", "tag"}));
    for (std::size_t r = 0; r < 10000; ++r) {
        ASSERT_EQ(parsed[r + 1].size(), 3u);
        EXPECT_EQ(std::stoll(parsed[r + 1][0]), static_cast<long long>(r));
        EXPECT_EQ(std::strtod(parsed[r + 1][1].c_str(), nullptr), xs[r]);
        EXPECT_EQ(parsed[r + 1][2], std::get<std::string>(rows[r][2]));
    }
}

TEST(Manifest, JsonRecordsResolvedConfig) {
    ExperimentConfig c("demo", sample_schema());
    RunManifest m;
    m.experiment = "demo";
    m.config_hash = c.hash();
    m.seed = 42;
    m.outputs = {"demo.csv"};
    m.config_text = c.to_text();
    const auto j = nlohmann::json::parse(to_json(m, c).dump());
    EXPECT_EQ(j["experiment"], "demo");
    EXPECT_EQ(j["config_hash"], hex64(c.hash()));
    EXPECT_EQ(j["seed"], 42);
    EXPECT_EQ(j["version"], kArtifactVersion);
    EXPECT_EQ(j["config"]["t_grid"], "0.10000000000000001, 0.20000000000000001");
    EXPECT_EQ(j["outputs"][0], "demo.csv");
    ExperimentConfig back("demo", sample_schema());
    back.parse_text(j["config_text"].get<std::string>());
    EXPECT_EQ(back.hash(), c.hash());
}

TEST(Experiments, RegistryCoversAllSubcommands) {
    const std::vector<std::string> names{"spin-fp",       "spin-spectrum",  "syk-fp",       "syk-spectrum",
                                         "syk2-counterexample", "rmt-spectrum", "rmt-gap-sweep", "rmt-semicircle",
                                         "design-time",   "haar-baseline"};
    ASSERT_EQ(experiments().size(), names.size());
    for (const auto& n : names) {
        const auto* e = find_experiment(n);
        ASSERT_NE(e, nullptr) << n;
        ExperimentConfig c(n, e->schema);
        EXPECT_NO_THROW(c.unsigned_integer("seed"));
    }
    EXPECT_EQ(find_experiment("nope"), nullptr);
}

TEST(Experiments, SpinSpectrumSecondLevel) {
    const auto* e = find_experiment("spin-spectrum");
    ExperimentConfig c(e->name, e->schema);
    const auto dir = scratch("spec");
    e->run(c, {dir.string(), 1});
    const auto rows = oracle::parse_csv(slurp(dir / "spin-spectrum.csv"));
    ASSERT_GE(rows.size(), 3u);
    EXPECT_NEAR(std::stod(rows[2][1]), 8.0, 1e-8);
    EXPECT_EQ(rows[2][3], "8");
}

TEST(Experiments, ByteIdenticalAcrossThreadCounts) {
    for (const std::string name : {"haar-baseline", "spin-fp", "rmt-spectrum"}) {
        const auto* e = find_experiment(name);
        ExperimentConfig c(e->name, e->schema);
        c.set("samples", "6");
        if (name == "rmt-spectrum") c.set("D", "8");
        const auto a = scratch(name + "_a"), b = scratch(name + "_b");
        const auto files = e->run(c, {a.string(), 1});
        e->run(c, {b.string(), 3});
        for (const auto& f : files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << name << "/" << f;
    }
}

#ifdef BROWNIAN_LAB_PATH
TEST(Cli, ExitCodesAndOutputs) {
    const std::string lab = BROWNIAN_LAB_PATH;
    auto status = [](const std::string& cmd) {
        const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    EXPECT_EQ(status(lab + " not-an-experiment"), 2);
    EXPECT_EQ(status(lab), 2);
    EXPECT_NE(status(lab + " spin-spectrum --set N=1"), 0);
    EXPECT_NE(status(lab + " spin-spectrum --set N=7 --set k=2"), 0);
    const auto dir = scratch("cli");
    EXPECT_EQ(status(lab + " design-time --seed 5 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "design-time.csv"));
    const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(j["seed"], 5);
    const auto cfg = dir / "x.cfg";
    std::ofstream(cfg) << "experiment = design-time\neps = 2\n";
    EXPECT_NE(status(lab + " design-time --config " + cfg.string()), 0);
}
#endif
