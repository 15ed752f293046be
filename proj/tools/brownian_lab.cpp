// brownian-lab: runs one registered experiment and writes its CSV tables
// plus manifest.json into the output directory.
//
//     brownian-lab spin-fp --set N=3 --set k=2 --samples 400 --out runs/a
//     brownian-lab rmt-gap-sweep --config sweep.cfg --threads 4

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brownian/errors.hpp"
#include "brownian/xcli/experiments.hpp"
#include "brownian/xcli/manifest.hpp"

namespace {

using namespace brownian::xcli;

void print_usage(std::ostream& os) {
    os << "usage: brownian-lab <experiment> [--config FILE] [--seed S] [--out DIR] [--samples N]\n"
          "                    [--threads T] [--set key=value]...\n"
          "       brownian-lab <experiment> --help\n\nexperiments:\n";
    for (const auto& e : experiments()) {
        std::string padded = e.name;
        padded.resize(22, ' ');
        os << "  " << padded << e.summary << "\n";
    }
}

std::string field_help(const Experiment& e) {
    std::string s = "config fields:\n";
    for (const auto& f : e.schema) {
        std::string name = f.name;
        name.resize(12, ' ');
        s += "  " + name + " " + to_string(f.type) + ", default " + f.default_value + ": " + f.help + "\n";
    }
    return s;
}

int run(int argc, char** argv) {
    if (argc < 2 || std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help") {
        print_usage(argc < 2 ? std::cerr : std::cout);
        return argc < 2 ? 2 : 0;
    }
    const Experiment* exp = find_experiment(argv[1]);
    if (!exp) {
        std::cerr << "brownian-lab: unknown experiment '" << argv[1] << "'\n\n";
        print_usage(std::cerr);
        return 2;
    }

    CLI::App app{exp->summary, "brownian-lab " + exp->name};
    app.footer(field_help(*exp));
    std::string config_path, out_dir = ".", seed_text, samples_text;
    int threads = 1;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed_text, "master seed (unsigned 64-bit)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--samples", samples_text, "sample count override");
    app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--set", overrides, "field override key=value (repeatable)");
    try {
        app.parse(argc - 1, argv + 1);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    ExperimentConfig config(exp->name, exp->schema);
    if (!config_path.empty()) config.load_file(config_path);
    if (!seed_text.empty()) config.set("seed", seed_text);
    if (!samples_text.empty()) config.set("samples", samples_text);
    for (const auto& o : overrides) config.apply_override(o);

    std::filesystem::create_directories(out_dir);
    const RunContext ctx{out_dir, threads};
    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.experiment = exp->name;
    manifest.outputs = exp->run(config, ctx);
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.config_hash = config.hash();
    manifest.seed = config.unsigned_integer("seed");
    manifest.threads = threads;
    manifest.config_text = config.to_text();
    write_manifest(ctx.path("manifest.json"), manifest, config);
    for (const auto& f : manifest.outputs) std::cout << ctx.path(f) << "\n";
    std::cout << ctx.path("manifest.json") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const brownian::ConfigError& e) {
        std::cerr << "brownian-lab: config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "brownian-lab: " << e.what() << "\n";
        return 1;
    }
}
