#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace dpsw {

/// Relative ridge: the amount added to each diagonal entry of the pooled
/// covariance is ridge * mean(diagonal), falling back to the raw ridge value
/// when the diagonal is all zero (constant features).
inline constexpr double kDefaultRidge = 1e-6;

struct LabeledDataset {
    Eigen::MatrixXd features;  ///< rows = samples
    std::vector<int> labels;   ///< class ids 0..class_count-1, one per row
    int class_count;
};

/// Shared-covariance linear discriminant model: per-class linear score
/// x . w_c + b_c, argmax wins, ties go to the lowest class id.
class LdaModel {
public:
    LdaModel(Eigen::MatrixXd weights, Eigen::VectorXd bias)
        : weights_(std::move(weights)), bias_(std::move(bias)) {}

    int dimension() const { return static_cast<int>(weights_.rows()); }
    int class_count() const { return static_cast<int>(weights_.cols()); }

    int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    int predict(std::span<const double> x) const;

    const Eigen::MatrixXd& weights() const { return weights_; }
    const Eigen::VectorXd& bias() const { return bias_; }

private:
    Eigen::MatrixXd weights_;  ///< D x C
    Eigen::VectorXd bias_;     ///< C
};

LdaModel fit_lda(const LabeledDataset& train, double ridge = kDefaultRidge);

int predict(const LdaModel& model, std::span<const double> features);

struct CvReport {
    double ccr_mean;               ///< percent
    double ccr_std;                ///< percent, sample std over folds
    std::vector<double> per_fold;  ///< percent per fold
    std::vector<std::vector<std::int64_t>> confusion;  ///< [true][predicted]

    bool operator==(const CvReport&) const = default;
};

/// Deterministic stratified fold assignment: per class, a seeded shuffle is
/// dealt round-robin so every fold's class counts differ by at most one.
/// Returns the fold id per sample.
std::vector<int> stratified_folds(std::span<const int> labels, int class_count, int folds,
                                  std::uint64_t seed);

CvReport cross_validate(const LabeledDataset& data, int folds, std::uint64_t seed,
                        double ridge = kDefaultRidge);

/// Table-style presentation, e.g. "CCR: 95.50 (± 1.47)".
std::string format_ccr_line(const CvReport& report);

}  // namespace dpsw
