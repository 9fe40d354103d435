#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpsw/dataset.hpp"
#include "dpsw/descriptor.hpp"
#include "dpsw/errors.hpp"
#include "dpsw/eval.hpp"
#include "dpsw/features_io.hpp"
#include "dpsw/numfmt.hpp"
#include "dpsw/pixel_map.hpp"

namespace {

namespace fs = std::filesystem;

/// Parses "0..6", "0-6", "0,2,5" or mixtures like "0,2..4" into a set spec.
std::vector<int> parse_int_set(const std::string& text) {
    std::vector<int> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        auto dots = item.find("..");
        std::size_t dash = item.find('-', 1);  // allow a plain leading digit
        std::string lo_text;
        std::string hi_text;
        if (dots != std::string::npos) {
            lo_text = item.substr(0, dots);
            hi_text = item.substr(dots + 2);
        } else if (dash != std::string::npos) {
            lo_text = item.substr(0, dash);
            hi_text = item.substr(dash + 1);
        } else {
            lo_text = hi_text = item;
        }
        try {
            const int lo = std::stoi(lo_text);
            const int hi = std::stoi(hi_text);
            if (hi < lo) throw std::invalid_argument(item);
            for (int v = lo; v <= hi; ++v) values.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError("set", "cannot parse '" + item +
                                                  "' (use values, ranges like 0..6, or lists)");
        }
    }
    if (values.empty()) throw CLI::ValidationError("set", "the set must not be empty");
    return values;
}

dpsw::CorpusManifest load_corpus(const std::string& input) {
    const fs::path path(input);
    if (fs::is_directory(path)) return dpsw::build_manifest(path);
    return dpsw::read_manifest_csv(path);
}

fs::path default_layout_path(const fs::path& features_csv) {
    fs::path p = features_csv;
    p.replace_extension(".layout.json");
    return p;
}

struct PipelineArgs {
    std::string input;
    std::string rule = "min";
    std::string memories = "0..6";
    std::string thresholds = "0..9";
    int increment_min = dpsw::kMinRuleIncrement;
    int increment_max = dpsw::kMaxRuleIncrement;
    int jobs = 0;
};

void add_pipeline_options(CLI::App* cmd, PipelineArgs& args) {
    cmd->add_option("--input,-i", args.input,
                    "corpus directory (one class per subdirectory) or manifest CSV")
        ->required();
    cmd->add_option("--rule,-r", args.rule, "rule of movement: min, max or both")
        ->check(CLI::IsMember({"min", "max", "both"}))
        ->capture_default_str();
    cmd->add_option("--memories,-m", args.memories, "memory set, e.g. 0..6 or 0,2,4")
        ->capture_default_str();
    cmd->add_option("--thresholds,-t", args.thresholds, "threshold index set, e.g. 0..9")
        ->capture_default_str();
    cmd->add_option("--increment-min", args.increment_min, "t_min step per k (advanced)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--increment-max", args.increment_max, "t_max step per k (advanced)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--jobs,-j", args.jobs, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

dpsw::ExtractOptions to_extract_options(const PipelineArgs& args) {
    dpsw::ExtractOptions options;
    options.rules = dpsw::rule_selection_from_string(args.rule);
    options.memories = parse_int_set(args.memories);
    options.thresholds = parse_int_set(args.thresholds);
    options.increment_min = args.increment_min;
    options.increment_max = args.increment_max;
    options.jobs = args.jobs;
    return options;
}

int run_extract(const PipelineArgs& args, const std::string& output,
                const std::string& layout_path) {
    const auto options = to_extract_options(args);
    const auto table = dpsw::extract_features(load_corpus(args.input), options);
    dpsw::write_feature_csv(output, table);
    const fs::path layout =
        layout_path.empty() ? default_layout_path(output) : fs::path(layout_path);
    dpsw::write_layout_json(layout, table, options);
    std::cout << "wrote " << table.row_count() << " rows x " << table.column_count()
              << " features to " << output << "\n";
    return 0;
}

int run_evaluate(const std::string& features_path, const std::string& output, int folds,
                 std::uint64_t seed, double ridge, const std::string& layout_path) {
    const auto table = dpsw::read_feature_csv(features_path);
    const auto report = dpsw::cross_validate(dpsw::make_dataset(table), folds, seed, ridge);

    nlohmann::json config{{"features", features_path},
                          {"folds", folds},
                          {"seed", seed},
                          {"ridge", ridge}};
    const fs::path layout =
        layout_path.empty() ? default_layout_path(features_path) : fs::path(layout_path);
    if (fs::exists(layout)) {
        std::ifstream in(layout);
        nlohmann::json layout_doc = nlohmann::json::parse(in, nullptr, false);
        if (!layout_doc.is_discarded()) {
            for (const char* key :
                 {"rule_selection", "memories", "thresholds", "increment_min", "increment_max"})
                if (layout_doc.contains(key)) config[key] = layout_doc[key];
        }
    }
    if (!output.empty()) dpsw::write_report_json(output, report, config);
    std::cout << dpsw::format_ccr_line(report) << "\n";
    return 0;
}

int run_sweep(const PipelineArgs& args, const std::string& axis, const std::string& output,
              int folds, std::uint64_t seed, double ridge) {
    auto options = to_extract_options(args);
    options.memories = dpsw::canonical_set(options.memories, "memory");
    options.thresholds = dpsw::canonical_set(options.thresholds, "threshold");

    const bool memory_axis = axis == "memory" || axis == "memory-combination";
    // memory analyses run on the unthresholded map
    if (memory_axis) options.thresholds = {0};

    const auto table = dpsw::extract_features(load_corpus(args.input), options);

    struct Row {
        int setting;
        dpsw::CvReport report;
    };
    std::vector<Row> rows;
    const auto evaluate_subset = [&](int setting,
                                     const std::function<bool(const dpsw::FeatureColumn&)>& keep) {
        const auto subset = dpsw::select_columns(table, keep);
        rows.push_back({setting, dpsw::cross_validate(dpsw::make_dataset(subset), folds, seed,
                                                      ridge)});
    };

    if (axis == "memory") {
        for (int mu : options.memories)
            evaluate_subset(mu, [mu](const dpsw::FeatureColumn& c) { return c.mu == mu; });
    } else if (axis == "memory-combination") {
        for (std::size_t p = 0; p < options.memories.size(); ++p) {
            const std::vector<int> prefix(options.memories.begin(),
                                          options.memories.begin() + p + 1);
            evaluate_subset(prefix.back(), [&prefix](const dpsw::FeatureColumn& c) {
                return std::find(prefix.begin(), prefix.end(), c.mu) != prefix.end();
            });
        }
    } else if (axis == "threshold") {
        for (int k : options.thresholds)
            evaluate_subset(k, [k](const dpsw::FeatureColumn& c) { return c.k == k; });
    } else {  // threshold-combination
        for (std::size_t p = 0; p < options.thresholds.size(); ++p) {
            const std::vector<int> prefix(options.thresholds.begin(),
                                          options.thresholds.begin() + p + 1);
            evaluate_subset(prefix.back(), [&prefix](const dpsw::FeatureColumn& c) {
                return std::find(prefix.begin(), prefix.end(), c.k) != prefix.end();
            });
        }
    }

    std::ofstream out(output + ".tmp", std::ios::binary);
    if (!out) throw dpsw::IoError("cannot open " + output + " for writing");
    out << "setting,ccr_mean,ccr_std\n";
    for (const Row& row : rows)
        out << row.setting << ',' << dpsw::format_double(row.report.ccr_mean) << ','
            << dpsw::format_double(row.report.ccr_std) << '\n';
    out.flush();
    if (!out) throw dpsw::IoError("write failed for " + output);
    out.close();
    fs::rename(output + ".tmp", output);

    for (const Row& row : rows)
        std::cout << axis << " " << row.setting << ": " << dpsw::format_ccr_line(row.report)
                  << "\n";
    return 0;
}

int run_export_map(const std::string& input, const std::string& rule, int k,
                   const std::string& output, int increment_min, int increment_max) {
    const dpsw::Raster raster = dpsw::load_grayscale(input);
    const dpsw::WalkMap map(raster, dpsw::rule_from_string(rule), k, increment_min,
                            increment_max);
    const auto edges = dpsw::export_edge_list(map);
    dpsw::write_edge_list(output, edges);
    std::cout << "wrote " << edges.size() << " edges to " << output << "\n";
    return 0;
}

int run_synth(const std::string& output, std::uint64_t seed, int samples, int size) {
    const auto manifest = dpsw::generate_synth_corpus(output, seed, samples, size);
    dpsw::write_manifest_csv(fs::path(output) / "manifest.csv", manifest);
    std::cout << "wrote " << manifest.entries.size() << " images ("
              << dpsw::synth_corpus_classes().size() << " classes) under " << output << "\n";
    return 0;
}

int run_manifest(const std::string& input, const std::string& output) {
    const auto manifest = dpsw::build_manifest(input);
    dpsw::write_manifest_csv(output, manifest);
    std::cout << "wrote " << manifest.entries.size() << " entries to " << output << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Deterministic partially self-avoiding walk texture descriptors with thresholded "
        "neighborhoods: feature extraction, LDA cross-validation, parameter sweeps and map "
        "export"};
    app.require_subcommand(1);

    // extract
    PipelineArgs extract_args;
    std::string extract_output;
    std::string extract_layout;
    auto* extract = app.add_subcommand(
        "extract", "extract feature vectors for a corpus into CSV (+ layout JSON)");
    add_pipeline_options(extract, extract_args);
    extract->add_option("--output,-o", extract_output, "feature CSV path")->required();
    extract->add_option("--layout", extract_layout,
                        "layout JSON path (default: <output>.layout.json)");

    // evaluate
    std::string eval_features;
    std::string eval_output;
    std::string eval_layout;
    int eval_folds = 10;
    std::uint64_t eval_seed = 1;
    double eval_ridge = dpsw::kDefaultRidge;
    auto* evaluate =
        app.add_subcommand("evaluate", "10-fold cross-validated LDA classification of a "
                                       "feature CSV; prints CCR: mean (± std)");
    evaluate->add_option("--features,-f", eval_features, "feature CSV from extract")->required();
    evaluate->add_option("--output,-o", eval_output, "report JSON path");
    evaluate->add_option("--layout", eval_layout, "layout JSON for provenance");
    evaluate->add_option("--folds", eval_folds, "cross-validation folds")
        ->check(CLI::Range(2, 1'000'000))
        ->capture_default_str();
    evaluate->add_option("--seed", eval_seed, "fold-assignment seed")->capture_default_str();
    evaluate->add_option("--ridge", eval_ridge, "LDA covariance ridge (relative)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // sweep
    PipelineArgs sweep_args;
    std::string sweep_axis;
    std::string sweep_output;
    int sweep_folds = 10;
    std::uint64_t sweep_seed = 1;
    double sweep_ridge = dpsw::kDefaultRidge;
    auto* sweep = app.add_subcommand(
        "sweep", "classification-rate curves over memory or threshold settings");
    add_pipeline_options(sweep, sweep_args);
    sweep->add_option("--axis,-a", sweep_axis,
                      "memory | memory-combination | threshold | threshold-combination")
        ->check(CLI::IsMember(
            {"memory", "memory-combination", "threshold", "threshold-combination"}))
        ->required();
    sweep->add_option("--output,-o", sweep_output, "sweep CSV path")->required();
    sweep->add_option("--folds", sweep_folds, "cross-validation folds")
        ->check(CLI::Range(2, 1'000'000))
        ->capture_default_str();
    sweep->add_option("--seed", sweep_seed, "fold-assignment seed")->capture_default_str();
    sweep->add_option("--ridge", sweep_ridge, "LDA covariance ridge (relative)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // export-map
    std::string map_input;
    std::string map_rule = "min";
    std::string map_output;
    int map_k = 0;
    int map_inc_min = dpsw::kMinRuleIncrement;
    int map_inc_max = dpsw::kMaxRuleIncrement;
    auto* export_map = app.add_subcommand(
        "export-map", "write the thresholded neighborhood of an image as an edge list");
    export_map->add_option("--input,-i", map_input, "image path (PGM/PPM)")->required();
    export_map->add_option("--rule,-r", map_rule, "rule of movement: min or max")
        ->check(CLI::IsMember({"min", "max"}))
        ->capture_default_str();
    export_map->add_option("--threshold,-k", map_k, "threshold index k")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    export_map->add_option("--output,-o", map_output, "edge list path")->required();
    export_map->add_option("--increment-min", map_inc_min, "t_min step per k")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    export_map->add_option("--increment-max", map_inc_max, "t_max step per k")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // synth
    std::string synth_output;
    std::uint64_t synth_seed = 1;
    int synth_samples = 10;
    int synth_size = 64;
    auto* synth = app.add_subcommand(
        "synth", "generate the 8-class synthetic texture corpus for desk-scale experiments");
    synth->add_option("--output,-o", synth_output, "corpus directory")->required();
    synth->add_option("--seed", synth_seed, "corpus seed")->capture_default_str();
    synth->add_option("--samples", synth_samples, "samples per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--size", synth_size, "image width and height")
        ->check(CLI::Range(8, 4096))
        ->capture_default_str();

    // manifest
    std::string manifest_input;
    std::string manifest_output;
    auto* manifest = app.add_subcommand(
        "manifest", "write a path,label manifest CSV for a class-per-subdirectory corpus");
    manifest->add_option("--input,-i", manifest_input, "corpus directory")->required();
    manifest->add_option("--output,-o", manifest_output, "manifest CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) return run_extract(extract_args, extract_output, extract_layout);
        if (evaluate->parsed())
            return run_evaluate(eval_features, eval_output, eval_folds, eval_seed, eval_ridge,
                                eval_layout);
        if (sweep->parsed())
            return run_sweep(sweep_args, sweep_axis, sweep_output, sweep_folds, sweep_seed,
                             sweep_ridge);
        if (export_map->parsed())
            return run_export_map(map_input, map_rule, map_k, map_output, map_inc_min,
                                  map_inc_max);
        if (synth->parsed()) return run_synth(synth_output, synth_seed, synth_samples, synth_size);
        if (manifest->parsed()) return run_manifest(manifest_input, manifest_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
