#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dpsw/dataset.hpp"
#include "dpsw/descriptor.hpp"
#include "dpsw/eval.hpp"

namespace dpsw {

enum class RuleSelection { min, max, both };

std::string_view to_string(RuleSelection rules);
RuleSelection rule_selection_from_string(std::string_view name);

struct ExtractOptions {
    RuleSelection rules = RuleSelection::min;
    std::vector<int> memories{kDefaultMemories.begin(), kDefaultMemories.end()};
    std::vector<int> thresholds{kDefaultThresholds.begin(), kDefaultThresholds.end()};
    int increment_min = kMinRuleIncrement;
    int increment_max = kMaxRuleIncrement;
    int jobs = 0;  ///< 0 = library default worker count
};

/// One feature row per image, columns in the canonical layout
/// (rule min before max, ascending k, ascending mu, bins 0..3).
struct FeatureTable {
    std::vector<FeatureColumn> layout;
    std::vector<std::string> labels;
    std::vector<std::string> paths;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return layout.size(); }
};

/// Feature row for a single raster under the given options.
FeatureVector extract_image_features(const Raster& raster, const ExtractOptions& options);

/// Feature table for pre-loaded rasters; parallel over images, output order
/// fixed by input order.
FeatureTable extract_features(std::span<const Raster> rasters,
                              std::span<const std::string> labels,
                              std::span<const std::string> paths, const ExtractOptions& options);

/// Loads every manifest entry and extracts. Ingestion failures abort with the
/// offending path in the message.
FeatureTable extract_features(const CorpusManifest& manifest, const ExtractOptions& options);

/// CSV with header `label,path,f0,f1,...`; values in shortest round-trip
/// form. Written atomically (temp file + rename).
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);

/// Reads a feature CSV back. The layout of the result is empty (CSV carries
/// column names only); malformed input raises ParseError with a line number.
FeatureTable read_feature_csv(const std::filesystem::path& path);

/// Column map for a feature CSV: rule, k, mu, bin and histogram position per
/// column, plus the generating configuration.
void write_layout_json(const std::filesystem::path& path, const FeatureTable& table,
                       const ExtractOptions& options);

/// Columns whose FeatureColumn satisfies `keep`, all rows preserved.
FeatureTable select_columns(const FeatureTable& table,
                            const std::function<bool(const FeatureColumn&)>& keep);

/// Maps label strings to contiguous class ids (sorted label order).
LabeledDataset make_dataset(const FeatureTable& table);

/// Report JSON: ccr_mean/ccr_std/per_fold/confusion plus the caller-supplied
/// configuration block. Written atomically.
void write_report_json(const std::filesystem::path& path, const CvReport& report,
                       const nlohmann::json& config);

}  // namespace dpsw
