#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "dpsw/raster.hpp"

namespace dpsw {

/// Rule of movement: `min` walks toward similar pixels (homogeneous regions),
/// `max` toward contrasting pixels (edges, heterogeneous regions).
enum class Rule { min, max };

std::string_view to_string(Rule rule);
Rule rule_from_string(std::string_view name);

/// Threshold increments per scale index k: t_min = k * 10, t_max = 255 - k * 20.
inline constexpr int kMinRuleIncrement = 10;
inline constexpr int kMaxRuleIncrement = 20;

struct NeighborOffset {
    int dx;
    int dy;
};

/// 8-connected neighborhood in the fixed clockwise scan order
/// N, NE, E, SE, S, SW, W, NW. The order is load-bearing: it is the
/// walk's tie-break priority, so results are reproducible bit for bit.
inline constexpr std::array<NeighborOffset, 8> kClockwiseOffsets{{
    {0, -1},   // N
    {1, -1},   // NE
    {1, 0},    // E
    {1, 1},    // SE
    {0, 1},    // S
    {-1, 1},   // SW
    {-1, 0},   // W
    {-1, -1},  // NW
}};

/// |I(a) - I(b)|, the walk's distance between two pixels.
int weight(const Raster& raster, int a, int b);

/// Existing 8-connected neighbors of p in clockwise order, self excluded,
/// out-of-raster positions omitted (no padding).
std::vector<int> geometric_neighbors(const Raster& raster, int p);

/// A raster plus a movement rule and threshold index. Eligible neighborhoods
/// are precomputed at construction (CSR layout), so every query afterwards is
/// pure and safe to run from any number of threads.
class WalkMap {
public:
    WalkMap(Raster raster, Rule rule, int k,
            int increment_min = kMinRuleIncrement, int increment_max = kMaxRuleIncrement);

    const Raster& raster() const { return raster_; }
    Rule rule() const { return rule_; }
    int k() const { return k_; }

    /// Effective threshold: t_min for rule min, t_max (clamped at 0) for rule max.
    int threshold() const { return threshold_; }

    int weight(int a, int b) const;

    /// Thresholded neighbors of p, a subsequence of the clockwise geometric list.
    std::span<const std::int32_t> eligible_neighbors(int p) const {
        return {adjacency_.data() + row_offsets_[p], adjacency_.data() + row_offsets_[p + 1]};
    }

    /// Weights aligned with eligible_neighbors(p).
    std::span<const std::uint8_t> eligible_weights(int p) const {
        return {weights_.data() + row_offsets_[p], weights_.data() + row_offsets_[p + 1]};
    }

private:
    Raster raster_;
    Rule rule_;
    int k_;
    int threshold_;
    std::vector<std::int32_t> adjacency_;
    std::vector<std::uint8_t> weights_;
    std::vector<std::uint32_t> row_offsets_;
};

int weight(const WalkMap& map, int a, int b);

std::vector<int> eligible_neighbors(const WalkMap& map, int p);

/// One undirected eligible pair. Endpoints are normalized so that
/// (x1,y1) <= (x2,y2) lexicographically.
struct EdgeRecord {
    int x1;
    int y1;
    int x2;
    int y2;
    int w;

    auto operator<=>(const EdgeRecord&) const = default;
};

/// All undirected eligible pairs, sorted lexicographically by (x1,y1,x2,y2).
std::vector<EdgeRecord> export_edge_list(const WalkMap& map);

/// Writes `x1,y1,x2,y2,w` lines, LF endings.
void write_edge_list(const std::filesystem::path& path, std::span<const EdgeRecord> edges);

}  // namespace dpsw
