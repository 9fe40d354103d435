#include "dpsw/walk.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace dpsw {

std::optional<int> choose_next(const WalkMap& map, int current, std::span<const int> forbidden) {
    if (current < 0 || current >= map.raster().pixel_count())
        throw std::invalid_argument("choose_next: pixel index out of range");
    const auto neighbors = map.eligible_neighbors(current);
    const auto weights = map.eligible_weights(current);
    const bool want_min = map.rule() == Rule::min;

    int best = -1;
    int best_weight = 0;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const int q = neighbors[i];
        if (std::find(forbidden.begin(), forbidden.end(), q) != forbidden.end()) continue;
        const int w = weights[i];
        // strict comparison: on ties the earlier (clockwise-first) candidate stays
        if (best < 0 || (want_min ? w < best_weight : w > best_weight)) {
            best = q;
            best_weight = w;
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

namespace {

constexpr std::uint64_t kHashBase = 0x100000001b3ULL;  // FNV-64 prime
constexpr std::uint32_t kEmptySlot = std::numeric_limits<std::uint32_t>::max();

/// Open-addressed table of (window hash -> trace index) for the walk's state
/// history. Hash collisions are resolved by comparing the actual trace
/// windows, so detection never depends on hash quality.
class StateHistory {
public:
    void reset() {
        std::fill(indices_.begin(), indices_.end(), kEmptySlot);
        size_ = 0;
    }

    /// Returns the trace index of an equal earlier state, or kEmptySlot after
    /// recording (hash, t).
    std::uint32_t find_or_insert(std::uint64_t hash, std::uint32_t t,
                                 const std::vector<int>& trace, int window) {
        if (indices_.empty() || size_ * 10 >= indices_.size() * 7) grow();
        std::size_t slot = static_cast<std::size_t>(hash) & mask_;
        while (indices_[slot] != kEmptySlot) {
            if (hashes_[slot] == hash &&
                windows_equal(trace, indices_[slot], t, window))
                return indices_[slot];
            slot = (slot + 1) & mask_;
        }
        hashes_[slot] = hash;
        indices_[slot] = t;
        ++size_;
        return kEmptySlot;
    }

private:
    static bool windows_equal(const std::vector<int>& trace, std::uint32_t a, std::uint32_t b,
                              int window) {
        return std::memcmp(trace.data() + (a + 1 - window), trace.data() + (b + 1 - window),
                           static_cast<std::size_t>(window) * sizeof(int)) == 0;
    }

    void grow() {
        const std::size_t capacity = indices_.empty() ? 64 : indices_.size() * 2;
        std::vector<std::uint64_t> old_hashes = std::move(hashes_);
        std::vector<std::uint32_t> old_indices = std::move(indices_);
        hashes_.assign(capacity, 0);
        indices_.assign(capacity, kEmptySlot);
        mask_ = capacity - 1;
        for (std::size_t i = 0; i < old_indices.size(); ++i) {
            if (old_indices[i] == kEmptySlot) continue;
            std::size_t slot = static_cast<std::size_t>(old_hashes[i]) & mask_;
            while (indices_[slot] != kEmptySlot) slot = (slot + 1) & mask_;
            hashes_[slot] = old_hashes[i];
            indices_[slot] = old_indices[i];
        }
    }

    std::vector<std::uint64_t> hashes_;
    std::vector<std::uint32_t> indices_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
};

struct WalkScratch {
    std::vector<int> trace;
    StateHistory history;
};

std::uint64_t pow_base(int exponent) {
    std::uint64_t r = 1;
    for (int i = 0; i < exponent; ++i) r *= kHashBase;
    return r;
}

/// Core loop. The walker state is (current pixel, ordered window of the last
/// mu visited pixels); since the current pixel is the window's last entry,
/// the state is exactly the last max(1, mu) trace entries. A trajectory ends
/// when that window recurs (attractor entered at the first occurrence) or when
/// no admissible neighbor remains (dead end, rho = 0).
Trajectory walk_from(const WalkMap& map, int mu, int start, WalkScratch& scratch) {
    auto& trace = scratch.trace;
    auto& history = scratch.history;
    trace.clear();
    history.reset();

    const int window = std::max(1, mu);
    const std::uint64_t drop_factor = pow_base(window - 1);
    std::uint64_t hash = 0;

    trace.push_back(start);
    hash = static_cast<std::uint64_t>(start) + 1;

    for (;;) {
        const std::uint32_t t = static_cast<std::uint32_t>(trace.size()) - 1;
        if (t + 1 >= static_cast<std::uint32_t>(window)) {
            const std::uint32_t repeat = history.find_or_insert(hash, t, trace, window);
            if (repeat != kEmptySlot) {
                const std::uint32_t first = repeat + 1 - static_cast<std::uint32_t>(window);
                const std::uint32_t again = t + 1 - static_cast<std::uint32_t>(window);
                return Trajectory{first, again - first};
            }
        }

        const std::size_t forbidden_count =
            std::min<std::size_t>(static_cast<std::size_t>(mu), trace.size());
        const std::span<const int> forbidden{trace.data() + (trace.size() - forbidden_count),
                                             forbidden_count};
        const auto next = choose_next(map, trace.back(), forbidden);
        if (!next) return Trajectory{static_cast<std::uint32_t>(trace.size()), 0};

        if (static_cast<int>(trace.size()) >= window)
            hash -= (static_cast<std::uint64_t>(trace[trace.size() - window]) + 1) * drop_factor;
        hash = hash * kHashBase + static_cast<std::uint64_t>(*next) + 1;
        trace.push_back(*next);
    }
}

void validate(const WalkMap& map, const WalkConfig& config) {
    if (config.mu < 0) throw std::invalid_argument("WalkConfig: mu must be >= 0");
    if (config.rule != map.rule() || config.k != map.k())
        throw std::invalid_argument("WalkConfig: rule/k do not match the map");
}

}  // namespace

Trajectory run_walk(const WalkMap& map, const WalkConfig& config, int start) {
    validate(map, config);
    if (start < 0 || start >= map.raster().pixel_count())
        throw std::invalid_argument("run_walk: start pixel out of range");
    WalkScratch scratch;
    return walk_from(map, config.mu, start, scratch);
}

Trajectory run_walk_trace(const WalkMap& map, const WalkConfig& config, int start,
                          std::vector<int>& trace_out) {
    validate(map, config);
    if (start < 0 || start >= map.raster().pixel_count())
        throw std::invalid_argument("run_walk: start pixel out of range");
    WalkScratch scratch;
    const Trajectory result = walk_from(map, config.mu, start, scratch);
    trace_out = scratch.trace;
    return result;
}

std::vector<Trajectory> run_all_walks(const WalkMap& map, const WalkConfig& config) {
    validate(map, config);
    const int n = map.raster().pixel_count();
    std::vector<Trajectory> trajectories(static_cast<std::size_t>(n));
#pragma omp parallel
    {
        WalkScratch scratch;
#pragma omp for schedule(dynamic, 64)
        for (int p = 0; p < n; ++p) {
            trajectories[static_cast<std::size_t>(p)] = walk_from(map, config.mu, p, scratch);
        }
    }
    return trajectories;
}

}  // namespace dpsw
