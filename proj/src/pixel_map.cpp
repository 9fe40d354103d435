#include "dpsw/pixel_map.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dpsw/errors.hpp"

namespace dpsw {

std::string_view to_string(Rule rule) {
    return rule == Rule::min ? "min" : "max";
}

Rule rule_from_string(std::string_view name) {
    if (name == "min") return Rule::min;
    if (name == "max") return Rule::max;
    throw std::invalid_argument("unknown rule '" + std::string(name) + "', expected min or max");
}

int weight(const Raster& raster, int a, int b) {
    return std::abs(static_cast<int>(raster.at(a)) - static_cast<int>(raster.at(b)));
}

std::vector<int> geometric_neighbors(const Raster& raster, int p) {
    if (p < 0 || p >= raster.pixel_count())
        throw std::invalid_argument("geometric_neighbors: pixel index out of range");
    const int x = raster.x_of(p);
    const int y = raster.y_of(p);
    std::vector<int> neighbors;
    neighbors.reserve(8);
    for (const auto& off : kClockwiseOffsets) {
        const int nx = x + off.dx;
        const int ny = y + off.dy;
        if (raster.in_bounds(nx, ny)) neighbors.push_back(raster.index_of(nx, ny));
    }
    return neighbors;
}

namespace {

int effective_threshold(Rule rule, int k, int increment_min, int increment_max) {
    if (rule == Rule::min) return k * increment_min;
    return std::max(0, 255 - k * increment_max);
}

bool passes(Rule rule, int threshold, int w) {
    return rule == Rule::min ? w >= threshold : w <= threshold;
}

}  // namespace

WalkMap::WalkMap(Raster raster, Rule rule, int k, int increment_min, int increment_max)
    : raster_(std::move(raster)), rule_(rule), k_(k) {
    if (k_ < 0) throw std::invalid_argument("WalkMap: threshold index k must be >= 0");
    if (increment_min < 1 || increment_max < 1)
        throw std::invalid_argument("WalkMap: threshold increments must be >= 1");
    threshold_ = effective_threshold(rule_, k_, increment_min, increment_max);

    const int n = raster_.pixel_count();
    row_offsets_.resize(static_cast<std::size_t>(n) + 1);
    adjacency_.reserve(static_cast<std::size_t>(n) * 8);
    weights_.reserve(static_cast<std::size_t>(n) * 8);
    for (int p = 0; p < n; ++p) {
        row_offsets_[static_cast<std::size_t>(p)] = static_cast<std::uint32_t>(adjacency_.size());
        const int x = raster_.x_of(p);
        const int y = raster_.y_of(p);
        for (const auto& off : kClockwiseOffsets) {
            const int nx = x + off.dx;
            const int ny = y + off.dy;
            if (!raster_.in_bounds(nx, ny)) continue;
            const int q = raster_.index_of(nx, ny);
            const int w = std::abs(static_cast<int>(raster_[p]) - static_cast<int>(raster_[q]));
            if (passes(rule_, threshold_, w)) {
                adjacency_.push_back(q);
                weights_.push_back(static_cast<std::uint8_t>(w));
            }
        }
    }
    row_offsets_[static_cast<std::size_t>(n)] = static_cast<std::uint32_t>(adjacency_.size());
}

int WalkMap::weight(int a, int b) const {
    return dpsw::weight(raster_, a, b);
}

int weight(const WalkMap& map, int a, int b) {
    return map.weight(a, b);
}

std::vector<int> eligible_neighbors(const WalkMap& map, int p) {
    if (p < 0 || p >= map.raster().pixel_count())
        throw std::invalid_argument("eligible_neighbors: pixel index out of range");
    auto span = map.eligible_neighbors(p);
    return std::vector<int>(span.begin(), span.end());
}

std::vector<EdgeRecord> export_edge_list(const WalkMap& map) {
    const Raster& raster = map.raster();
    std::vector<EdgeRecord> edges;
    for (int p = 0; p < raster.pixel_count(); ++p) {
        for (std::int32_t q : map.eligible_neighbors(p)) {
            if (q <= p) continue;  // one record per unordered pair; eligibility is symmetric
            EdgeRecord e{raster.x_of(p), raster.y_of(p), raster.x_of(q), raster.y_of(q),
                         map.weight(p, q)};
            if (std::pair{e.x2, e.y2} < std::pair{e.x1, e.y1}) {
                std::swap(e.x1, e.x2);
                std::swap(e.y1, e.y2);
            }
            edges.push_back(e);
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

void write_edge_list(const std::filesystem::path& path, std::span<const EdgeRecord> edges) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto& e : edges) {
        out << e.x1 << ',' << e.y1 << ',' << e.x2 << ',' << e.y2 << ',' << e.w << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dpsw
