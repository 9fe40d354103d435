#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpsw/pixel_map.hpp"

namespace dpsw {

struct WalkConfig {
    int mu;  ///< memory size: the walker avoids the last mu visited pixels
    Rule rule;
    int k;
};

/// Outcome of one walk: transient length tau and attractor period rho.
/// rho == 0 encodes a dead-ended walk that never entered an attractor.
struct Trajectory {
    std::uint32_t tau;
    std::uint32_t rho;

    bool operator==(const Trajectory&) const = default;
};

/// Next pixel from `current`: the eligible neighbor of minimum (rule min) or
/// maximum (rule max) weight that is not in `forbidden`, ties resolved by
/// clockwise priority. `forbidden` holds the last min(mu, steps so far)
/// visited pixels, most recent last, current included. Returns nullopt on a
/// dead end.
std::optional<int> choose_next(const WalkMap& map, int current, std::span<const int> forbidden);

/// Walks from `start` until the walker state — (current pixel, ordered
/// window of the last mu visited pixels) — repeats, or a dead end is hit.
Trajectory run_walk(const WalkMap& map, const WalkConfig& config, int start);

/// Same walk, but also returns the visited pixel sequence up to the point of
/// attractor detection (or the full path for a dead end).
Trajectory run_walk_trace(const WalkMap& map, const WalkConfig& config, int start,
                          std::vector<int>& trace_out);

/// One trajectory per pixel, indexed by start pixel in row-major order.
/// Walks are data-parallel over start pixels; the gather is by index, so the
/// result is bit-identical for any worker count.
std::vector<Trajectory> run_all_walks(const WalkMap& map, const WalkConfig& config);

}  // namespace dpsw
