#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dpsw/pixel_map.hpp"
#include "dpsw/walk.hpp"

namespace dpsw {

/// Histogram positions kept per memory value: h(mu+1) .. h(mu+kNuBins).
inline constexpr int kNuBins = 4;

inline constexpr std::array<int, 7> kDefaultMemories{0, 1, 2, 3, 4, 5, 6};
inline constexpr std::array<int, 10> kDefaultThresholds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

/// Normalized frequency of (tau, rho) pairs over all N walks of one
/// image/configuration. Counts are kept exact; each frequency is an integer
/// multiple of 1/N and the counts sum to exactly N.
class JointDistribution {
public:
    using Key = std::pair<std::uint32_t, std::uint32_t>;  // (tau, rho)

    JointDistribution(std::span<const Trajectory> trajectories, int mu, Rule rule, int k);

    int mu() const { return mu_; }
    Rule rule() const { return rule_; }
    int k() const { return k_; }
    std::uint64_t n_walks() const { return n_walks_; }

    std::uint64_t count(std::uint32_t tau, std::uint32_t rho) const;
    double frequency(std::uint32_t tau, std::uint32_t rho) const {
        return static_cast<double>(count(tau, rho)) / static_cast<double>(n_walks_);
    }

    const std::map<Key, std::uint64_t>& counts() const { return counts_; }

    /// Fraction of walks that dead-ended (rho == 0).
    double dead_end_mass() const;

private:
    int mu_;
    Rule rule_;
    int k_;
    std::uint64_t n_walks_;
    std::map<Key, std::uint64_t> counts_;
};

JointDistribution joint_distribution(std::span<const Trajectory> trajectories, int mu, Rule rule,
                                     int k);

/// h(l) = sum_{b=0}^{l-1} S(b, l-b): the mass of trajectories whose total
/// length tau + rho equals l. Dead ends (rho = 0) never contribute.
double histogram(const JointDistribution& dist, int l);

/// Identifies one feature column: which rule/threshold/memory produced it and
/// which of the kNuBins histogram slots it is (histogram position l = mu+1+bin).
struct FeatureColumn {
    Rule rule;
    int k;
    int mu;
    int bin;

    bool operator==(const FeatureColumn&) const = default;
};

struct FeatureVector {
    std::vector<double> values;
    std::vector<FeatureColumn> layout;
};

/// Validates and canonicalizes a parameter set: sorted ascending, duplicates
/// removed. Concatenation order never depends on the caller's input order.
std::vector<int> canonical_set(std::span<const int> values, const char* what);

/// nu = [h(mu+1), ..., h(mu+kNuBins)] for one distribution.
FeatureVector nu_vector(const JointDistribution& dist);

/// phi^k_r: nu concatenated over the memory set, ascending.
FeatureVector phi_vector(const WalkMap& map, std::span<const int> mu_set);
FeatureVector phi_vector(const Raster& raster, Rule rule, int k, std::span<const int> mu_set);

/// psi_r: phi^k concatenated over the threshold set, ascending.
FeatureVector psi_vector(const Raster& raster, Rule rule, std::span<const int> k_set,
                         std::span<const int> mu_set, int increment_min = kMinRuleIncrement,
                         int increment_max = kMaxRuleIncrement);

/// upsilon = [psi_min, psi_max].
FeatureVector upsilon_vector(const Raster& raster, std::span<const int> k_set,
                             std::span<const int> mu_set, int increment_min = kMinRuleIncrement,
                             int increment_max = kMaxRuleIncrement);

}  // namespace dpsw
