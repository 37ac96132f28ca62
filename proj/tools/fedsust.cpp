// fedsust: sustainability and trust scoring for federated-learning setups.
//
//   fedsust validate --config scenario.json
//   fedsust score    --config scenario.json [--weights w.json] [--pillars p.json] [--out dir]
//   fedsust simulate --config scenario.json [--seed N] [--out dir]
//   fedsust compare  --config a.json --config b.json [--pillars pa.json --pillars pb.json]
//
// Exit codes: 0 success, 1 validation/usage error, 2 reference-data miss,
// 3 I/O failure. Errors print one line: "error: <kind>: <message>".

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedsust/assessment.hpp"
#include "fedsust/errors.hpp"

namespace fs = std::filesystem;
using namespace fedsust;

namespace {

struct Args {
    std::vector<std::string> configs;
    std::string weights;
    std::vector<std::string> pillars;
    std::string out = ".";
    bool allow_partial = false;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool serial = false;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

int report_error(const char* kind, const std::string& message, int code) {
    std::cerr << "error: " << kind << ": " << one_line(message) << '\n';
    return code;
}

void require_exists(const std::string& path, const char* what) {
    if (!fs::exists(path)) throw ValidationError(std::string(what) + " not found: " + path);
}

FederationConfig load_config(const std::string& path, const Args& args) {
    require_exists(path, "config");
    FederationConfig c = load_federation_config(path);
    if (args.seed) c.seed = *args.seed;
    return c;
}

AssessmentOptions load_options(const Args& args, std::size_t pillar_index) {
    AssessmentOptions o;
    o.allow_partial = args.allow_partial;
    if (!args.weights.empty()) {
        require_exists(args.weights, "weights");
        o.weights = load_weight_config(args.weights);
    }
    if (pillar_index < args.pillars.size()) {
        require_exists(args.pillars[pillar_index], "pillars");
        o.pillars = load_pillar_inputs(args.pillars[pillar_index]);
    }
    return o;
}

ReferenceData load_reference() { return load_reference_data(default_data_dir()); }

fs::path output_dir(const Args& args) {
    const fs::path dir = args.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + args.out);
    return dir;
}

void write_outputs(const std::vector<std::pair<fs::path, std::string>>& files) {
    for (const auto& [path, bytes] : files) {
        try {
            write_file_atomic(path, bytes);
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
    }
}

void print_tree(const ScoreNode& node, int depth, int max_depth) {
    if (!node.score) return;
    std::printf("%*s%-*s %s%s\n", depth * 2, "", 48 - depth * 2, node.id.c_str(),
                format_display(*node.score).c_str(), node.partial ? "  (partial)" : "");
    if (depth >= max_depth) return;
    for (const auto& c : node.children) print_tree(c, depth + 1, max_depth);
}

int cmd_validate(const Args& args) {
    if (args.configs.size() != 1) throw ValidationError("validate takes exactly one --config");
    const auto config = load_config(args.configs.front(), args);
    const auto options = load_options(args, 0);
    score_tree(config, load_reference(), options);
    std::cout << "ok: " << args.configs.front() << '\n';
    return 0;
}

int cmd_score(const Args& args) {
    if (args.configs.size() != 1) throw ValidationError("score takes exactly one --config");
    if (args.pillars.size() > 1) throw ValidationError("score takes at most one --pillars");
    const auto config = load_config(args.configs.front(), args);
    const auto report = assess_config(config, load_reference(), load_options(args, 0));
    const auto dir = output_dir(args);
    write_outputs({{dir / "trust_report.json", render_report(report)}});
    print_tree(report.scores, 0, 3);
    return 0;
}

int cmd_simulate(const Args& args) {
    if (args.configs.size() != 1) throw ValidationError("simulate takes exactly one --config");
    if (args.pillars.size() > 1) throw ValidationError("simulate takes at most one --pillars");
    const auto config = load_config(args.configs.front(), args);
    SimulationOptions sim;
    sim.execution = args.serial ? Execution::serial : Execution::parallel;
    sim.threads = args.threads;
    const auto run = run_federation(config, load_reference(), load_options(args, 0), sim);
    const auto dir = output_dir(args);
    write_outputs({{dir / "emissions.csv", run.simulation.state.emissions.to_csv()},
                   {dir / "factsheet.json", render_json(run.factsheet.to_json())},
                   {dir / "trust_report.json", render_report(run.report)}});
    print_tree(run.report.scores, 0, 2);
    const auto total = run.simulation.state.emissions.total();
    std::printf("estimated emissions: %.6g g CO2eq (%.6g kWh, %zu records)\n", total.co2eq_g,
                total.energy_kwh, total.records);
    return 0;
}

int cmd_compare(const Args& args) {
    if (args.configs.size() != 2) throw ValidationError("compare takes exactly two --config");
    if (!args.pillars.empty() && args.pillars.size() != 2) {
        throw ValidationError("compare takes zero or two --pillars");
    }
    const auto a = load_config(args.configs[0], args);
    const auto b = load_config(args.configs[1], args);
    const auto opts_a = load_options(args, 0);
    const auto opts_b = load_options(args, 1);
    const auto ref = load_reference();
    const auto cmp = compare_proposals(a, opts_a.pillars, b, opts_b.pillars, ref, opts_a);

    const auto dir = output_dir(args);
    write_outputs({{dir / "compare.json", render_json(to_json(cmp))}});

    std::printf("%-18s %6s %6s %7s\n", "pillar", "A", "B", "delta");
    for (const auto& [id, d] : cmp.pillar_deltas) {
        std::printf("%-18s %6s %6s %+7.2f\n", id.c_str(), format_display(cmp.a.pillars.at(id)).c_str(),
                    format_display(cmp.b.pillars.at(id)).c_str(), round_display(d));
    }
    std::printf("%-18s %6s %6s %+7.2f\n", "trust", format_display(cmp.a.trust).c_str(),
                format_display(cmp.b.trust).c_str(), round_display(cmp.trust_delta));
    if (cmp.a.trust_without_sustainability && cmp.b.trust_without_sustainability) {
        std::printf("%-18s %6s %6s\n", "trust (no sust.)",
                    format_display(*cmp.a.trust_without_sustainability).c_str(),
                    format_display(*cmp.b.trust_without_sustainability).c_str());
    }
    std::printf("ranking: %s\n", cmp.winner == "tie" ? "tie"
                                  : cmp.winner == "B" ? "B > A"
                                                      : "A > B");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sustainability and trust scoring for federated-learning configurations",
                 "fedsust"};
    app.require_subcommand(1);
    Args args;

    const auto common = [&](CLI::App* sub, bool multi_config) {
        auto* c = sub->add_option("--config", args.configs, "Scenario file (JSON)")->required();
        if (!multi_config) c->expected(1);
        sub->add_option("--weights", args.weights, "Weight overrides (JSON)");
        sub->add_option("--pillars", args.pillars, "External pillar scores (JSON)");
        sub->add_flag("--allow-partial", args.allow_partial,
                      "Renormalize around missing metrics and flag the report");
        sub->add_option("--seed", args.seed, "Override the scenario seed");
    };

    auto* validate = app.add_subcommand("validate", "Check a scenario without writing output");
    common(validate, false);
    auto* score = app.add_subcommand("score", "Score a scenario from its configuration");
    common(score, false);
    score->add_option("--out", args.out, "Output directory");
    auto* simulate = app.add_subcommand("simulate", "Run the simulated federation and score it");
    common(simulate, false);
    simulate->add_option("--out", args.out, "Output directory");
    simulate->add_option("--threads", args.threads, "OpenMP threads (0: default)")
        ->check(CLI::NonNegativeNumber);
    simulate->add_flag("--serial", args.serial, "Use the serial reference kernels");
    auto* compare = app.add_subcommand("compare", "Compare two proposals");
    common(compare, true);
    compare->add_option("--out", args.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), 1);
    }

    try {
        if (*validate) return cmd_validate(args);
        if (*score) return cmd_score(args);
        if (*simulate) return cmd_simulate(args);
        if (*compare) return cmd_compare(args);
    } catch (const ReferenceDataError& e) {
        return report_error("reference-data", e.what(), 2);
    } catch (const MissingMetricError& e) {
        return report_error("missing-metric", e.what(), 1);
    } catch (const ValidationError& e) {
        return report_error("validation", e.what(), 1);
    } catch (const IoError& e) {
        return report_error("io", e.what(), 3);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), 3);
    }
    return 1;
}
