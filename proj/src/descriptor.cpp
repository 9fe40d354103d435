#include "dpsw/descriptor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dpsw {

JointDistribution::JointDistribution(std::span<const Trajectory> trajectories, int mu, Rule rule,
                                     int k)
    : mu_(mu), rule_(rule), k_(k), n_walks_(trajectories.size()) {
    if (trajectories.empty())
        throw std::invalid_argument("joint_distribution: trajectory list is empty");
    if (mu_ < 0) throw std::invalid_argument("joint_distribution: mu must be >= 0");
    for (const Trajectory& t : trajectories) ++counts_[{t.tau, t.rho}];
}

std::uint64_t JointDistribution::count(std::uint32_t tau, std::uint32_t rho) const {
    const auto it = counts_.find({tau, rho});
    return it == counts_.end() ? 0 : it->second;
}

double JointDistribution::dead_end_mass() const {
    std::uint64_t dead = 0;
    for (const auto& [key, n] : counts_)
        if (key.second == 0) dead += n;
    return static_cast<double>(dead) / static_cast<double>(n_walks_);
}

JointDistribution joint_distribution(std::span<const Trajectory> trajectories, int mu, Rule rule,
                                     int k) {
    return JointDistribution(trajectories, mu, rule, k);
}

double histogram(const JointDistribution& dist, int l) {
    if (l < 1) throw std::invalid_argument("histogram: l must be >= 1");
    // h(l) = sum_{b=0}^{l-1} S(b, l-b); summed in counts so the single final
    // division keeps the result an exact multiple of 1/N
    std::uint64_t total = 0;
    for (int b = 0; b < l; ++b)
        total += dist.count(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(l - b));
    return static_cast<double>(total) / static_cast<double>(dist.n_walks());
}

std::vector<int> canonical_set(std::span<const int> values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string(what) + " set is empty");
    std::vector<int> result(values.begin(), values.end());
    for (int v : result)
        if (v < 0) throw std::invalid_argument(std::string(what) + " values must be >= 0");
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

FeatureVector nu_vector(const JointDistribution& dist) {
    FeatureVector nu;
    nu.values.reserve(kNuBins);
    nu.layout.reserve(kNuBins);
    for (int bin = 0; bin < kNuBins; ++bin) {
        nu.values.push_back(histogram(dist, dist.mu() + 1 + bin));
        nu.layout.push_back({dist.rule(), dist.k(), dist.mu(), bin});
    }
    return nu;
}

namespace {

void append(FeatureVector& dst, const FeatureVector& src) {
    dst.values.insert(dst.values.end(), src.values.begin(), src.values.end());
    dst.layout.insert(dst.layout.end(), src.layout.begin(), src.layout.end());
}

}  // namespace

FeatureVector phi_vector(const WalkMap& map, std::span<const int> mu_set) {
    const std::vector<int> memories = canonical_set(mu_set, "memory");
    FeatureVector phi;
    phi.values.reserve(memories.size() * kNuBins);
    phi.layout.reserve(memories.size() * kNuBins);
    for (int mu : memories) {
        const auto trajectories = run_all_walks(map, WalkConfig{mu, map.rule(), map.k()});
        append(phi, nu_vector(joint_distribution(trajectories, mu, map.rule(), map.k())));
    }
    return phi;
}

FeatureVector phi_vector(const Raster& raster, Rule rule, int k, std::span<const int> mu_set) {
    return phi_vector(WalkMap(raster, rule, k), mu_set);
}

FeatureVector psi_vector(const Raster& raster, Rule rule, std::span<const int> k_set,
                         std::span<const int> mu_set, int increment_min, int increment_max) {
    const std::vector<int> thresholds = canonical_set(k_set, "threshold");
    const std::vector<int> memories = canonical_set(mu_set, "memory");
    FeatureVector psi;
    psi.values.reserve(thresholds.size() * memories.size() * kNuBins);
    psi.layout.reserve(thresholds.size() * memories.size() * kNuBins);
    for (int k : thresholds) {
        append(psi, phi_vector(WalkMap(raster, rule, k, increment_min, increment_max), memories));
    }
    return psi;
}

FeatureVector upsilon_vector(const Raster& raster, std::span<const int> k_set,
                             std::span<const int> mu_set, int increment_min, int increment_max) {
    FeatureVector upsilon = psi_vector(raster, Rule::min, k_set, mu_set, increment_min,
                                       increment_max);
    append(upsilon, psi_vector(raster, Rule::max, k_set, mu_set, increment_min, increment_max));
    return upsilon;
}

}  // namespace dpsw
