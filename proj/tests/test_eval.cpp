#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "dpsw/errors.hpp"
#include "dpsw/eval.hpp"

using namespace dpsw;

namespace {

LabeledDataset make(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                    int classes) {
    LabeledDataset data;
    data.class_count = classes;
    data.labels = labels;
    data.features.resize(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return data;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Irwin-Hall approximation of a standard normal; portable and seeded.
double gauss(std::mt19937_64& rng) {
    double sum = 0;
    for (int i = 0; i < 12; ++i) sum += uniform01(rng);
    return sum - 6.0;
}

// three well-separated 2-D blobs
LabeledDataset blobs(std::mt19937_64& rng, int per_class) {
    const double centers[3][2] = {{0.0, 0.0}, {12.0, 2.0}, {-4.0, 14.0}};
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < per_class; ++i) {
            rows.push_back({centers[c][0] + gauss(rng), centers[c][1] + gauss(rng)});
            labels.push_back(c);
        }
    return make(rows, labels, 3);
}

/// Independent check: full-covariance Gaussian Bayes classifier with
/// closed-form 2x2 inverses, coded apart from the LDA path.
class NaiveBayes2D {
public:
    explicit NaiveBayes2D(const LabeledDataset& data) {
        const int classes = data.class_count;
        means_.assign(static_cast<std::size_t>(classes), {0, 0});
        covs_.assign(static_cast<std::size_t>(classes), {0, 0, 0});
        std::vector<int> counts(static_cast<std::size_t>(classes), 0);
        for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
            const auto c = static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]);
            means_[c][0] += data.features(i, 0);
            means_[c][1] += data.features(i, 1);
            counts[c]++;
        }
        for (std::size_t c = 0; c < means_.size(); ++c) {
            means_[c][0] /= counts[c];
            means_[c][1] /= counts[c];
        }
        for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
            const auto c = static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)]);
            const double dx = data.features(i, 0) - means_[c][0];
            const double dy = data.features(i, 1) - means_[c][1];
            covs_[c][0] += dx * dx;
            covs_[c][1] += dx * dy;
            covs_[c][2] += dy * dy;
        }
        for (std::size_t c = 0; c < covs_.size(); ++c) {
            covs_[c][0] = covs_[c][0] / counts[c] + 1e-9;
            covs_[c][1] /= counts[c];
            covs_[c][2] = covs_[c][2] / counts[c] + 1e-9;
        }
    }

    int predict(double x, double y) const {
        int best = 0;
        double best_score = -1e300;
        for (std::size_t c = 0; c < means_.size(); ++c) {
            const double a = covs_[c][0], b = covs_[c][1], d = covs_[c][2];
            const double det = a * d - b * b;
            const double dx = x - means_[c][0];
            const double dy = y - means_[c][1];
            const double maha = (d * dx * dx - 2 * b * dx * dy + a * dy * dy) / det;
            const double score = -0.5 * maha - 0.5 * std::log(det);
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(c);
            }
        }
        return best;
    }

private:
    std::vector<std::array<double, 2>> means_;
    std::vector<std::array<double, 3>> covs_;  // xx, xy, yy
};

}  // namespace

TEST_CASE("1-D classes at -1 and +1 classify by sign") {
    const LabeledDataset train = make({{-1.1}, {-0.9}, {-1.05}, {0.95}, {1.1}, {1.0}},
                                      {0, 0, 0, 1, 1, 1}, 2);
    const LdaModel model = fit_lda(train);
    for (double x : {-2.0, -0.4, -0.01}) CHECK(model.predict(std::vector<double>{x}) == 0);
    for (double x : {0.01, 0.6, 3.0}) CHECK(model.predict(std::vector<double>{x}) == 1);
}

TEST_CASE("duplicating the training data leaves the model unchanged") {
    // integer-valued features and power-of-two counts keep all the statistics
    // exact, so the comparison can be bitwise
    const std::vector<std::vector<double>> rows{{0, 1}, {2, 3}, {8, 1}, {10, 3}};
    const std::vector<int> labels{0, 0, 1, 1};
    const LabeledDataset once = make(rows, labels, 2);

    std::vector<std::vector<double>> doubled_rows(rows);
    doubled_rows.insert(doubled_rows.end(), rows.begin(), rows.end());
    std::vector<int> doubled_labels(labels);
    doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());
    const LabeledDataset twice = make(doubled_rows, doubled_labels, 2);

    const LdaModel a = fit_lda(once, 0.5);
    const LdaModel b = fit_lda(twice, 0.5);
    CHECK(a.weights() == b.weights());
    CHECK(a.bias() == b.bias());
}

TEST_CASE("LDA agrees with an independent Bayes classifier on separated blobs") {
    std::mt19937_64 rng(157);
    const LabeledDataset data = blobs(rng, 50);
    const LdaModel lda = fit_lda(data);
    const NaiveBayes2D bayes(data);

    int agree = 0;
    int correct = 0;
    const int n = static_cast<int>(data.labels.size());
    for (int i = 0; i < n; ++i) {
        const double x = data.features(i, 0);
        const double y = data.features(i, 1);
        const int from_lda = lda.predict(std::vector<double>{x, y});
        if (from_lda == bayes.predict(x, y)) ++agree;
        if (from_lda == data.labels[static_cast<std::size_t>(i)]) ++correct;
    }
    CHECK(agree >= n * 99 / 100);
    CHECK(correct >= n * 99 / 100);
}

TEST_CASE("a point at a class mean is assigned to that class") {
    std::mt19937_64 rng(163);
    const LabeledDataset data = blobs(rng, 40);
    const LdaModel model = fit_lda(data);

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(2, 3);
    Eigen::Vector3d counts = Eigen::Vector3d::Zero();
    for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
        means.col(data.labels[static_cast<std::size_t>(i)]) += data.features.row(i).transpose();
        counts[data.labels[static_cast<std::size_t>(i)]] += 1;
    }
    for (int c = 0; c < 3; ++c) {
        means.col(c) /= counts[c];
        CHECK(model.predict(means.col(c)) == c);
    }
}

TEST_CASE("predictions are invariant to translating all data") {
    std::mt19937_64 rng(167);
    LabeledDataset data = blobs(rng, 30);
    const LdaModel base = fit_lda(data);

    LabeledDataset moved = data;
    moved.features.col(0).array() += 1000.0;
    moved.features.col(1).array() -= 250.0;
    const LdaModel shifted = fit_lda(moved);

    for (Eigen::Index i = 0; i < data.features.rows(); ++i)
        CHECK(base.predict(data.features.row(i).transpose()) ==
              shifted.predict(moved.features.row(i).transpose()));
}

TEST_CASE("score ties resolve to the lowest class id") {
    // identical per-class data makes every class score equal for any input
    const LabeledDataset tied =
        make({{1, 0}, {3, 2}, {1, 0}, {3, 2}, {1, 0}, {3, 2}}, {0, 0, 1, 1, 2, 2}, 3);
    const LdaModel model = fit_lda(tied);
    CHECK(model.predict(std::vector<double>{0.0, 0.0}) == 0);
    CHECK(model.predict(std::vector<double>{7.0, -3.0}) == 0);
}

TEST_CASE("degenerate fits raise model-fit errors") {
    const LabeledDataset one_class = make({{1}, {2}, {3}}, {0, 0, 0}, 1);
    CHECK_THROWS_AS(fit_lda(one_class), ModelFitError);

    const LabeledDataset constant = make({{5}, {5}, {5}, {5}}, {0, 0, 1, 1}, 2);
    CHECK_THROWS_AS(fit_lda(constant, 0.0), ModelFitError);  // no ridge, singular
    CHECK_NOTHROW(fit_lda(constant, 1e-6));                  // ridge fallback rescues it

    const LabeledDataset tiny = make({{1}, {2}, {3}}, {0, 0, 1}, 2);
    CHECK_THROWS_AS(fit_lda(tiny), ModelFitError);  // class 1 has a single sample
}

TEST_CASE("predict validates the feature dimension") {
    const LabeledDataset data = make({{1, 0}, {2, 1}, {9, 0}, {8, 1}}, {0, 0, 1, 1}, 2);
    const LdaModel model = fit_lda(data);
    CHECK_THROWS_AS(model.predict(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(predict(model, std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("ten classes, ten samples, ten folds: one sample per class per fold") {
    std::vector<int> labels;
    for (int c = 0; c < 10; ++c)
        for (int s = 0; s < 10; ++s) labels.push_back(c);
    const auto folds = stratified_folds(labels, 10, 10, 42);

    int histogram[10][10] = {};
    for (std::size_t i = 0; i < labels.size(); ++i)
        histogram[labels[i]][folds[i]]++;
    for (int c = 0; c < 10; ++c)
        for (int f = 0; f < 10; ++f) CHECK(histogram[c][f] == 1);
}

TEST_CASE("fold assignment is a partition and is seed-deterministic") {
    std::mt19937_64 rng(173);
    std::vector<int> labels;
    for (int c = 0; c < 4; ++c)
        for (int s = 0; s < 13; ++s) labels.push_back(c);

    const auto a = stratified_folds(labels, 4, 5, 7);
    const auto b = stratified_folds(labels, 4, 5, 7);
    CHECK(a == b);
    const auto other = stratified_folds(labels, 4, 5, 8);
    CHECK(a != other);  // overwhelmingly likely for these sizes

    for (int fold : a) {
        CHECK(fold >= 0);
        CHECK(fold < 5);
    }
    // "as equal as possible": per class, fold sizes differ by at most one
    for (int c = 0; c < 4; ++c) {
        int per_fold[5] = {};
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) per_fold[a[i]]++;
        for (int f = 0; f < 5; ++f) {
            CHECK(per_fold[f] >= 2);
            CHECK(per_fold[f] <= 3);
        }
    }
}

TEST_CASE("cross-validation on separable blobs is near perfect and deterministic") {
    std::mt19937_64 rng(179);
    const LabeledDataset data = blobs(rng, 20);
    const CvReport report = cross_validate(data, 10, 99);
    CHECK(report.ccr_mean >= 99.0);
    CHECK(report.per_fold.size() == 10);
    CHECK(cross_validate(data, 10, 99) == report);

    // equal-sized folds: mean over folds equals pooled accuracy
    std::int64_t correct = 0;
    std::int64_t total = 0;
    for (std::size_t t = 0; t < report.confusion.size(); ++t)
        for (std::size_t p = 0; p < report.confusion.size(); ++p) {
            total += report.confusion[t][p];
            if (t == p) correct += report.confusion[t][p];
        }
    CHECK(total == static_cast<std::int64_t>(data.labels.size()));
    CHECK(report.ccr_mean ==
          doctest::Approx(100.0 * static_cast<double>(correct) / static_cast<double>(total))
              .epsilon(1e-12));
}

TEST_CASE("confusion rows sum to per-class test counts") {
    std::mt19937_64 rng(181);
    const LabeledDataset data = blobs(rng, 15);
    const CvReport report = cross_validate(data, 5, 3);
    for (std::size_t c = 0; c < report.confusion.size(); ++c) {
        std::int64_t row = 0;
        for (std::int64_t v : report.confusion[c]) row += v;
        CHECK(row == 15);
    }
}

TEST_CASE("uninformative features score at chance level") {
    std::mt19937_64 rng(191);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < 40; ++i) {
            rows.push_back({gauss(rng), gauss(rng), gauss(rng)});
            labels.push_back(c);
        }
    const CvReport report = cross_validate(make(rows, labels, 4), 10, 5);

    const double chance = 25.0;
    const double sigma = 100.0 * std::sqrt(0.25 * 0.75 / 160.0);
    CHECK(report.ccr_mean >= chance - 3 * sigma);
    CHECK(report.ccr_mean <= chance + 3 * sigma);
}

TEST_CASE("the ridge path is stable: 1e-6 and 1e-8 agree on blobs") {
    std::mt19937_64 rng(193);
    const LabeledDataset data = blobs(rng, 25);
    const LdaModel coarse = fit_lda(data, 1e-6);
    const LdaModel fine = fit_lda(data, 1e-8);
    for (Eigen::Index i = 0; i < data.features.rows(); ++i)
        CHECK(coarse.predict(data.features.row(i).transpose()) ==
              fine.predict(data.features.row(i).transpose()));
}

TEST_CASE("stratification fails when a class is smaller than the fold count") {
    const std::vector<int> labels{0, 0, 0, 1, 1};
    CHECK_THROWS_AS(stratified_folds(labels, 2, 3, 1), StratificationError);

    const LabeledDataset data = make({{1}, {2}, {3}, {9}, {8}}, labels, 2);
    CHECK_THROWS_AS(cross_validate(data, 3, 1), StratificationError);
}

TEST_CASE("the CCR line matches the table presentation") {
    CvReport report;
    report.ccr_mean = 95.5;
    report.ccr_std = 1.4704;
    CHECK(format_ccr_line(report) == "CCR: 95.50 (± 1.47)");
}
