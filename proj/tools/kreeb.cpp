#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kreeb/cli.hpp"

namespace {

struct CommonArgs {
    std::string path;
    kreeb::CliOptions options;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("file", args.path, "instance document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", args.options.format, "report format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
    cmd->add_option("--max-order", args.options.max_order,
                    "largest group order to enumerate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", args.options.seed, "seed for sampled point checks")
        ->capture_default_str();
    // testing aid, deliberately undocumented in the README
    cmd->add_option("--inject-fault", args.options.inject_fault, "")
        ->check(CLI::IsMember({"trans", "target"}))
        ->group("");
}

int finish(const kreeb::CmdResult& result) {
    if (!result.report.empty()) std::cout << result.report;
    if (!result.diagnostic.empty()) std::cerr << result.diagnostic << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact engine for symmetry groups of decorated level-set trees\n"
                 "and their free torus actions"};
    app.require_subcommand(1);

    CommonArgs analyze_args, verify_args, oracle_args;
    CLI::App* analyze =
        app.add_subcommand("analyze", "compute the group, action and homotopy model");
    add_common(analyze, analyze_args);
    CLI::App* verify =
        app.add_subcommand("verify", "re-check every certified property of an instance");
    add_common(verify, verify_args);
    verify->add_flag("--skip-oracle", verify_args.options.skip_oracle,
                     "skip the brute-force automorphism comparison");
    CLI::App* oracle =
        app.add_subcommand("oracle", "brute-force automorphism comparison only");
    add_common(oracle, oracle_args);

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed())
        return finish(kreeb::run_analyze(analyze_args.path, analyze_args.options));
    if (verify->parsed())
        return finish(kreeb::run_verify(verify_args.path, verify_args.options));
    return finish(kreeb::run_oracle(oracle_args.path, oracle_args.options));
}
