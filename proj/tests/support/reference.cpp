#include "support/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace dpsw::testref {

namespace {

// clockwise rank of an offset, N first
int clockwise_rank(int dx, int dy) {
    if (dx == 0 && dy == -1) return 0;   // N
    if (dx == 1 && dy == -1) return 1;   // NE
    if (dx == 1 && dy == 0) return 2;    // E
    if (dx == 1 && dy == 1) return 3;    // SE
    if (dx == 0 && dy == 1) return 4;    // S
    if (dx == -1 && dy == 1) return 5;   // SW
    if (dx == -1 && dy == 0) return 6;   // W
    if (dx == -1 && dy == -1) return 7;  // NW
    return 8;
}

bool weight_passes(Rule rule, int k, int w) {
    if (rule == Rule::min) return w >= k * 10;
    return w <= std::max(0, 255 - k * 20);
}

bool visited_recently(const std::vector<int>& trace, int mu, int pixel) {
    const int from = std::max(0, static_cast<int>(trace.size()) - mu);
    for (int i = from; i < static_cast<int>(trace.size()); ++i)
        if (trace[i] == pixel) return true;
    return false;
}

int pick_by_rule(const Raster& raster, Rule rule, int current,
                 const std::vector<int>& candidates) {
    int best = -1;
    int best_w = 0;
    for (int q : candidates) {
        const int w = std::abs(static_cast<int>(raster.at(current)) -
                               static_cast<int>(raster.at(q)));
        const bool better = rule == Rule::min ? w < best_w : w > best_w;
        if (best < 0 || better) {
            best = q;
            best_w = w;
        }
    }
    return best;
}

/// Walks with the supplied neighborhood function, keeping the complete state
/// history (window = last max(1, mu) visited pixels) and scanning it linearly.
template <typename NeighborhoodFn>
Trajectory walk_with(const Raster& raster, Rule rule, int mu, int start,
                     NeighborhoodFn&& neighborhood) {
    const int window = std::max(1, mu);
    std::vector<int> trace{start};
    std::vector<std::vector<int>> states;

    for (;;) {
        std::vector<int> state(trace.end() - std::min<std::size_t>(window, trace.size()),
                               trace.end());
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (states[s] == state) {
                const int repeat_at = static_cast<int>(states.size());
                const int tau = static_cast<int>(s) + 1 - window;
                const int rho = repeat_at - static_cast<int>(s);
                return Trajectory{static_cast<std::uint32_t>(tau),
                                  static_cast<std::uint32_t>(rho)};
            }
        }
        states.push_back(std::move(state));

        std::vector<int> candidates;
        for (int q : neighborhood(trace.back()))
            if (!visited_recently(trace, mu, q)) candidates.push_back(q);
        const int next = pick_by_rule(raster, rule, trace.back(), candidates);
        if (next < 0)
            return Trajectory{static_cast<std::uint32_t>(trace.size()), 0};
        trace.push_back(next);
    }
}

}  // namespace

std::vector<int> naive_eligible(const Raster& raster, Rule rule, int k, int p) {
    const int px = raster.x_of(p);
    const int py = raster.y_of(p);
    std::vector<std::pair<int, int>> ranked;  // (clockwise rank, pixel)
    for (int q = 0; q < raster.pixel_count(); ++q) {
        if (q == p) continue;
        const int dx = raster.x_of(q) - px;
        const int dy = raster.y_of(q) - py;
        if (std::sqrt(static_cast<double>(dx * dx + dy * dy)) > std::sqrt(2.0) + 1e-9) continue;
        const int w =
            std::abs(static_cast<int>(raster.at(p)) - static_cast<int>(raster.at(q)));
        if (!weight_passes(rule, k, w)) continue;
        ranked.emplace_back(clockwise_rank(dx, dy), q);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<int> result;
    for (const auto& [rank, q] : ranked) result.push_back(q);
    return result;
}

Trajectory naive_walk(const Raster& raster, Rule rule, int k, int mu, int start) {
    return walk_with(raster, rule, mu, start,
                     [&](int p) { return naive_eligible(raster, rule, k, p); });
}

std::vector<Trajectory> naive_all_walks(const Raster& raster, Rule rule, int k, int mu) {
    std::vector<Trajectory> all;
    all.reserve(static_cast<std::size_t>(raster.pixel_count()));
    for (int p = 0; p < raster.pixel_count(); ++p)
        all.push_back(naive_walk(raster, rule, k, mu, p));
    return all;
}

Trajectory traditional_walk(const Raster& raster, Rule rule, int mu, int start) {
    // own offset table on purpose; must not depend on the library's
    static const int offsets[8][2] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                                      {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};
    const auto neighborhood = [&](int p) {
        std::vector<int> result;
        for (const auto& off : offsets) {
            const int nx = raster.x_of(p) + off[0];
            const int ny = raster.y_of(p) + off[1];
            if (nx >= 0 && nx < raster.width() && ny >= 0 && ny < raster.height())
                result.push_back(raster.index_of(nx, ny));
        }
        return result;
    };
    return walk_with(raster, rule, mu, start, neighborhood);
}

std::vector<double> naive_nu(const std::vector<Trajectory>& trajectories, int mu) {
    std::vector<double> bins(4, 0.0);
    for (const Trajectory& t : trajectories) {
        if (t.rho == 0) continue;
        const int length = static_cast<int>(t.tau + t.rho);
        const int slot = length - (mu + 1);
        if (slot >= 0 && slot < 4) bins[static_cast<std::size_t>(slot)] += 1.0;
    }
    for (double& b : bins) b /= static_cast<double>(trajectories.size());
    return bins;
}

}  // namespace dpsw::testref
