#include "dpsw/eval.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dpsw/errors.hpp"
#include "dpsw/numfmt.hpp"

namespace dpsw {

namespace {

void validate_dataset(const LabeledDataset& data) {
    if (data.class_count < 2) throw ModelFitError("need at least 2 classes");
    if (data.features.rows() != static_cast<Eigen::Index>(data.labels.size()))
        throw std::invalid_argument("feature row count does not match label count");
    if (!data.features.allFinite())
        throw std::invalid_argument("dataset contains non-finite feature values");
    for (int label : data.labels)
        if (label < 0 || label >= data.class_count)
            throw std::invalid_argument("label id out of range");
}

}  // namespace

int LdaModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != weights_.rows())
        throw std::invalid_argument("predict: feature length " + std::to_string(x.size()) +
                                    " does not match model dimension " +
                                    std::to_string(weights_.rows()));
    const Eigen::VectorXd scores = weights_.transpose() * x + bias_;
    int best = 0;
    for (int c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;  // ties keep the lowest class id
    return best;
}

int LdaModel::predict(std::span<const double> x) const {
    return predict(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
}

LdaModel fit_lda(const LabeledDataset& train, double ridge) {
    validate_dataset(train);
    if (ridge < 0) throw std::invalid_argument("fit_lda: ridge must be >= 0");

    const Eigen::Index n = train.features.rows();
    const Eigen::Index dim = train.features.cols();
    const int classes = train.class_count;

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(dim, classes);
    Eigen::VectorXd class_sizes = Eigen::VectorXd::Zero(classes);
    for (Eigen::Index i = 0; i < n; ++i) {
        means.col(train.labels[static_cast<std::size_t>(i)]) += train.features.row(i).transpose();
        class_sizes[train.labels[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (int c = 0; c < classes; ++c) {
        if (class_sizes[c] < 2.0)
            throw ModelFitError("class " + std::to_string(c) + " has fewer than 2 samples");
        means.col(c) /= class_sizes[c];
    }

    // MLE pooled covariance (1/n): invariant under duplicating the data
    Eigen::MatrixXd centered(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        centered.row(i) =
            train.features.row(i) - means.col(train.labels[static_cast<std::size_t>(i)]).transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);

    // Relative ridge: scale by the mean diagonal so one setting works across
    // feature scales; all-constant features fall back to the raw value.
    const double mean_diag = cov.diagonal().mean();
    const double added = mean_diag > 0 ? ridge * mean_diag : ridge;
    cov.diagonal().array() += added;

    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw ModelFitError(
            "within-class covariance is singular; increase the ridge regularizer");

    // score_c(x) = x . w_c + b_c with w_c = cov^-1 m_c, b_c = -m_c . w_c / 2
    Eigen::MatrixXd weights = llt.solve(means);
    Eigen::VectorXd bias(classes);
    for (int c = 0; c < classes; ++c) bias[c] = -0.5 * means.col(c).dot(weights.col(c));
    return LdaModel(std::move(weights), std::move(bias));
}

int predict(const LdaModel& model, std::span<const double> features) {
    return model.predict(features);
}

namespace {

/// Explicit Fisher-Yates so the permutation depends only on the seed, not on
/// the standard library's shuffle/distribution internals.
void seeded_shuffle(std::vector<int>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[rng() % i]);
}

}  // namespace

std::vector<int> stratified_folds(std::span<const int> labels, int class_count, int folds,
                                  std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    std::vector<std::vector<int>> by_class(static_cast<std::size_t>(class_count));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= class_count)
            throw std::invalid_argument("label id out of range");
        by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
    }

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(labels.size(), -1);
    for (int c = 0; c < class_count; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        if (static_cast<int>(members.size()) < folds)
            throw StratificationError("class " + std::to_string(c) + " has " +
                                      std::to_string(members.size()) + " samples, fewer than " +
                                      std::to_string(folds) + " folds");
        seeded_shuffle(members, rng);
        for (std::size_t j = 0; j < members.size(); ++j)
            fold_of[static_cast<std::size_t>(members[j])] = static_cast<int>(j % folds);
    }
    return fold_of;
}

CvReport cross_validate(const LabeledDataset& data, int folds, std::uint64_t seed, double ridge) {
    validate_dataset(data);
    const auto fold_of = stratified_folds(data.labels, data.class_count, folds, seed);
    const Eigen::Index dim = data.features.cols();

    CvReport report;
    report.per_fold.reserve(static_cast<std::size_t>(folds));
    report.confusion.assign(static_cast<std::size_t>(data.class_count),
                            std::vector<std::int64_t>(static_cast<std::size_t>(data.class_count), 0));

    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train_rows;
        std::vector<Eigen::Index> test_rows;
        for (std::size_t i = 0; i < data.labels.size(); ++i)
            (fold_of[i] == f ? test_rows : train_rows).push_back(static_cast<Eigen::Index>(i));

        LabeledDataset train;
        train.class_count = data.class_count;
        train.features.resize(static_cast<Eigen::Index>(train_rows.size()), dim);
        train.labels.reserve(train_rows.size());
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            train.features.row(static_cast<Eigen::Index>(i)) = data.features.row(train_rows[i]);
            train.labels.push_back(data.labels[static_cast<std::size_t>(train_rows[i])]);
        }

        const LdaModel model = fit_lda(train, ridge);
        std::int64_t correct = 0;
        for (Eigen::Index row : test_rows) {
            const int truth = data.labels[static_cast<std::size_t>(row)];
            const int guess = model.predict(data.features.row(row).transpose());
            report.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(guess)]++;
            if (guess == truth) ++correct;
        }
        report.per_fold.push_back(100.0 * static_cast<double>(correct) /
                                  static_cast<double>(test_rows.size()));
    }

    double mean = 0;
    for (double v : report.per_fold) mean += v;
    mean /= static_cast<double>(folds);
    double var = 0;
    for (double v : report.per_fold) var += (v - mean) * (v - mean);
    report.ccr_mean = mean;
    report.ccr_std = folds > 1 ? std::sqrt(var / static_cast<double>(folds - 1)) : 0.0;
    return report;
}

std::string format_ccr_line(const CvReport& report) {
    return "CCR: " + format_fixed(report.ccr_mean, 2) + " (± " +
           format_fixed(report.ccr_std, 2) + ")";
}

}  // namespace dpsw
