#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "galcoh/io.hpp"

namespace {

namespace fs = std::filesystem;
using galcoh::io::Report;

struct OutputOptions {
    std::string out;
    std::string format = "json";
};

std::string default_out_path(const std::string& stem, const std::string& format) {
    const char* dir = std::getenv("GALCOH_OUT_DIR");
    if (!dir || !*dir) return {};
    return (fs::path(dir) / (stem + ".report." + (format == "text" ? "txt" : "json"))).string();
}

int emit(const Report& report, const OutputOptions& opts, const std::string& stem) {
    const std::string body = opts.format == "text" ? galcoh::io::to_text(report.document)
                                                   : galcoh::io::to_json_text(report.document);
    std::string path = opts.out.empty() ? default_out_path(stem, opts.format) : opts.out;
    if (path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << path << '\n';
            return galcoh::io::exit_input;
        }
        out << body;
    }
    return report.exit_code;
}

std::string stem_of(const std::string& file) { return fs::path(file).stem().string(); }

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_option("--out", opts.out, "Write the report to this file instead of standard output");
    cmd->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"json", "text"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galois cohomology of degree-p extensions: module invariants from ring models"};
    app.require_subcommand(1);

    OutputOptions opts;
    unsigned jobs = 1;
    std::string file;
    std::size_t degree = 0;

    auto* scenario = app.add_subcommand("scenario", "Scenario evaluation");
    scenario->require_subcommand(1);
    auto* scenario_run = scenario->add_subcommand("run", "Evaluate every degree up to the cap, cf, ct, cd and checks");
    scenario_run->add_option("file", file, "Scenario file (galcoh-scenario/1)")->required();
    scenario_run->add_option("--jobs", jobs, "Worker threads for per-degree evaluation")->check(CLI::Range(1u, 64u));
    add_output_options(scenario_run, opts);

    auto* criteria = app.add_subcommand("criteria", "Single-degree criteria");
    criteria->require_subcommand(1);
    auto* criteria_check = criteria->add_subcommand("check", "Free/trivial verdicts and equivalence suite at one degree");
    criteria_check->add_option("file", file, "Scenario file (galcoh-scenario/1)")->required();
    criteria_check->add_option("--degree", degree, "Degree n >= 1")->required();
    add_output_options(criteria_check, opts);

    auto* module = app.add_subcommand("module", "Cyclic-group module analysis");
    module->require_subcommand(1);
    auto* module_analyze = module->add_subcommand("analyze", "Fixed points, norm image, blocks, freeness, H^2");
    module_analyze->add_option("file", file, "Module file (galcoh-module/1)")->required();
    add_output_options(module_analyze, opts);

    auto* exactness = app.add_subcommand("exactness", "Exactness checks");
    exactness->require_subcommand(1);
    auto* exactness_verify =
        exactness->add_subcommand("verify", "Verify a chain file, or the E-side data of a scenario file");
    exactness_verify->add_option("file", file, "Chain (galcoh-chain/1) or scenario file with eside")->required();
    add_output_options(exactness_verify, opts);

    auto* fixtures = app.add_subcommand("fixtures", "Built-in fixtures");
    fixtures->require_subcommand(1);
    auto* fixtures_list = fixtures->add_subcommand("list", "List the fixture catalogue");
    add_output_options(fixtures_list, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : galcoh::io::exit_input;
    }

    try {
        if (*scenario_run) return emit(galcoh::io::scenario_report(galcoh::io::load_scenario(file), jobs), opts, stem_of(file));
        if (*criteria_check)
            return emit(galcoh::io::criteria_report(galcoh::io::load_scenario(file), degree), opts, stem_of(file));
        if (*module_analyze) {
            auto doc = galcoh::io::load_file(file);
            return emit(galcoh::io::module_report(galcoh::io::parse_module(doc)), opts, stem_of(file));
        }
        if (*exactness_verify) {
            auto doc = galcoh::io::load_file(file);
            if (doc.is_object() && doc.value("schema", "") == galcoh::io::chain_schema)
                return emit(galcoh::io::chain_report(galcoh::io::parse_chain(doc)), opts, stem_of(file));
            return emit(galcoh::io::eside_report(galcoh::io::parse_scenario(doc)), opts, stem_of(file));
        }
        if (*fixtures_list) return emit(galcoh::io::fixtures_report(), opts, "fixtures");
    } catch (const galcoh::io::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return galcoh::io::exit_input;
    } catch (const galcoh::Error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return galcoh::io::exit_input;
    } catch (const std::logic_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << '\n';
        return galcoh::io::exit_inconsistent;
    }
    return galcoh::io::exit_input;
}
