#include "dpsw/features_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpsw/errors.hpp"
#include "dpsw/numfmt.hpp"

namespace dpsw {

std::string_view to_string(RuleSelection rules) {
    switch (rules) {
        case RuleSelection::min: return "min";
        case RuleSelection::max: return "max";
        case RuleSelection::both: return "both";
    }
    return "?";
}

RuleSelection rule_selection_from_string(std::string_view name) {
    if (name == "min") return RuleSelection::min;
    if (name == "max") return RuleSelection::max;
    if (name == "both") return RuleSelection::both;
    throw std::invalid_argument("unknown rule selection '" + std::string(name) +
                                "', expected min, max or both");
}

FeatureVector extract_image_features(const Raster& raster, const ExtractOptions& options) {
    switch (options.rules) {
        case RuleSelection::min:
            return psi_vector(raster, Rule::min, options.thresholds, options.memories,
                              options.increment_min, options.increment_max);
        case RuleSelection::max:
            return psi_vector(raster, Rule::max, options.thresholds, options.memories,
                              options.increment_min, options.increment_max);
        case RuleSelection::both:
            return upsilon_vector(raster, options.thresholds, options.memories,
                                  options.increment_min, options.increment_max);
    }
    throw std::invalid_argument("bad rule selection");
}

namespace {

struct FirstError {
    std::size_t index = SIZE_MAX;
    std::string message;

    void record(std::size_t i, const std::string& msg) {
#ifdef _OPENMP
#pragma omp critical(dpsw_extract_error)
#endif
        {
            if (i < index) {
                index = i;
                message = msg;
            }
        }
    }
};

int worker_count(int jobs) {
#ifdef _OPENMP
    return jobs > 0 ? jobs : omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

}  // namespace

FeatureTable extract_features(std::span<const Raster> rasters, std::span<const std::string> labels,
                              std::span<const std::string> paths, const ExtractOptions& options) {
    if (rasters.empty()) throw std::invalid_argument("extract_features: no images");
    if (labels.size() != rasters.size() || paths.size() != rasters.size())
        throw std::invalid_argument("extract_features: label/path counts do not match images");

    FeatureTable table;
    table.labels.assign(labels.begin(), labels.end());
    table.paths.assign(paths.begin(), paths.end());
    table.rows.resize(rasters.size());

    FirstError error;
    const int jobs = worker_count(options.jobs);
    const auto n = static_cast<std::int64_t>(rasters.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            FeatureVector features =
                extract_image_features(rasters[static_cast<std::size_t>(i)], options);
            if (i == 0) {
#ifdef _OPENMP
#pragma omp critical(dpsw_extract_layout)
#endif
                table.layout = features.layout;
            }
            table.rows[static_cast<std::size_t>(i)] = std::move(features.values);
        } catch (const std::exception& e) {
            error.record(static_cast<std::size_t>(i), e.what());
        }
    }
    (void)jobs;
    if (error.index != SIZE_MAX)
        throw std::runtime_error("feature extraction failed for " +
                                 table.paths[error.index] + ": " + error.message);
    return table;
}

FeatureTable extract_features(const CorpusManifest& manifest, const ExtractOptions& options) {
    if (manifest.entries.empty()) throw IngestionError("empty corpus: manifest lists no images");

    std::vector<Raster> rasters;
    std::vector<std::string> labels;
    std::vector<std::string> paths;
    rasters.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        rasters.push_back(load_grayscale(manifest.resolve(entry)));
        labels.push_back(entry.label);
        paths.push_back(entry.path);
    }
    return extract_features(rasters, labels, paths, options);
}

namespace {

void check_csv_text(const std::string& value, const char* what) {
    if (value.find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument(std::string(what) +
                                    " must not contain commas or line breaks: " + value);
}

/// Write-to-temp plus rename, so readers never observe a partial file.
class AtomicWriter {
public:
    explicit AtomicWriter(const std::filesystem::path& path)
        : target_(path), temp_(path.string() + ".tmp"), out_(temp_, std::ios::binary) {
        if (!out_) throw IoError("cannot open " + temp_.string() + " for writing");
    }

    std::ofstream& stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw IoError("write failed for " + temp_.string());
        out_.close();
        std::error_code ec;
        std::filesystem::rename(temp_, target_, ec);
        if (ec) throw IoError("cannot move " + temp_.string() + " to " + target_.string());
    }

    ~AtomicWriter() {
        if (out_.is_open()) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(temp_, ec);
        }
    }

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
};

}  // namespace

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table) {
    AtomicWriter writer(path);
    auto& out = writer.stream();
    out << "label,path";
    for (std::size_t c = 0; c < table.column_count(); ++c) out << ",f" << c;
    out << '\n';
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        check_csv_text(table.labels[r], "label");
        check_csv_text(table.paths[r], "path");
        if (table.rows[r].size() != table.column_count())
            throw std::invalid_argument("feature row width mismatch");
        out << table.labels[r] << ',' << table.paths[r];
        for (double v : table.rows[r]) out << ',' << format_double(v);
        out << '\n';
    }
    writer.commit();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line_no,
                             const std::string& why) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

FeatureTable read_feature_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open feature file " + path.string());

    FeatureTable table;
    std::string line;
    int line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (line_no == 1) {
            if (fields.size() < 3 || fields[0] != "label" || fields[1] != "path")
                parse_fail(path, line_no, "expected header 'label,path,f0,...'");
            columns = fields.size() - 2;
            continue;
        }
        if (fields.size() != columns + 2)
            parse_fail(path, line_no,
                       "expected " + std::to_string(columns + 2) + " fields, got " +
                           std::to_string(fields.size()));
        table.labels.push_back(fields[0]);
        table.paths.push_back(fields[1]);
        std::vector<double> row(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            if (!parse_double(fields[c + 2], row[c]))
                parse_fail(path, line_no, "bad numeric value '" + fields[c + 2] + "'");
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) parse_fail(path, line_no, "no feature rows");
    return table;
}

void write_layout_json(const std::filesystem::path& path, const FeatureTable& table,
                       const ExtractOptions& options) {
    nlohmann::json doc;
    doc["feature_count"] = table.column_count();
    doc["rule_selection"] = to_string(options.rules);
    doc["memories"] = canonical_set(options.memories, "memory");
    doc["thresholds"] = canonical_set(options.thresholds, "threshold");
    doc["increment_min"] = options.increment_min;
    doc["increment_max"] = options.increment_max;
    nlohmann::json columns = nlohmann::json::array();
    for (std::size_t i = 0; i < table.layout.size(); ++i) {
        const FeatureColumn& col = table.layout[i];
        columns.push_back({{"index", i},
                           {"name", "f" + std::to_string(i)},
                           {"rule", to_string(col.rule)},
                           {"k", col.k},
                           {"mu", col.mu},
                           {"bin", col.bin},
                           {"histogram_position", col.mu + 1 + col.bin}});
    }
    doc["columns"] = std::move(columns);

    AtomicWriter writer(path);
    writer.stream() << doc.dump(2) << '\n';
    writer.commit();
}

FeatureTable select_columns(const FeatureTable& table,
                            const std::function<bool(const FeatureColumn&)>& keep) {
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < table.layout.size(); ++c)
        if (keep(table.layout[c])) kept.push_back(c);

    FeatureTable filtered;
    filtered.labels = table.labels;
    filtered.paths = table.paths;
    filtered.layout.reserve(kept.size());
    for (std::size_t c : kept) filtered.layout.push_back(table.layout[c]);
    filtered.rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> slim;
        slim.reserve(kept.size());
        for (std::size_t c : kept) slim.push_back(row[c]);
        filtered.rows.push_back(std::move(slim));
    }
    return filtered;
}

LabeledDataset make_dataset(const FeatureTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("make_dataset: empty feature table");

    std::map<std::string, int> class_ids;
    for (const auto& label : table.labels) class_ids.emplace(label, 0);
    int next = 0;
    for (auto& [label, id] : class_ids) id = next++;

    LabeledDataset data;
    data.class_count = next;
    data.labels.reserve(table.labels.size());
    for (const auto& label : table.labels) data.labels.push_back(class_ids.at(label));

    const auto rows = static_cast<Eigen::Index>(table.rows.size());
    const auto cols = static_cast<Eigen::Index>(table.rows.front().size());
    data.features.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = table.rows[static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument("make_dataset: ragged feature rows");
        for (Eigen::Index c = 0; c < cols; ++c) data.features(r, c) = row[static_cast<std::size_t>(c)];
    }
    return data;
}

void write_report_json(const std::filesystem::path& path, const CvReport& report,
                       const nlohmann::json& config) {
    nlohmann::json doc;
    doc["ccr_mean"] = report.ccr_mean;
    doc["ccr_std"] = report.ccr_std;
    doc["per_fold"] = report.per_fold;
    doc["confusion"] = report.confusion;
    doc["config"] = config;

    AtomicWriter writer(path);
    writer.stream() << doc.dump(2) << '\n';
    writer.commit();
}

}  // namespace dpsw
