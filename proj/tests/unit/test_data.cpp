#include "doctest.h"

#include "support.hpp"

#include <fstream>
#include <set>

using namespace imb;

TEST_CASE("keel loader reads headers, comments and @inputs/@outputs") {
    const LabeledDataset d = load_keel(test::fixture("tiny.dat"));
    CHECK(d.n_samples() == 12);
    CHECK(d.n_features() == 3);
    CHECK(d.minority_count() == 4);
    CHECK(d.majority_count() == 8);
    CHECK(d.class_names()[static_cast<std::size_t>(d.minority_label())] == "positive");
    CHECK(d.features()(4, 0) == 4.125);
    CHECK(d.features()(4, 2) == 2.0);
    CHECK(d.imbalance_ratio() == doctest::Approx(2.0));
}

TEST_CASE("keel tie goes to the caller's positive label") {
    const LabeledDataset yes = load_keel(test::fixture("tie.dat"), std::string{ "yes" });
    CHECK(yes.class_names()[static_cast<std::size_t>(yes.minority_label())] == "yes");
    const LabeledDataset no = load_keel(test::fixture("tie.dat"), std::string{ "no" });
    CHECK(no.class_names()[static_cast<std::size_t>(no.minority_label())] == "no");
}

TEST_CASE("keel errors carry their kind and line") {
    try {
        (void)load_keel(test::fixture("bad_header.dat"));
        FAIL("expected a parse error");
    } catch (const parse_error &e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS((void)load_keel(test::fixture("nominal_input.dat")), unsupported_attribute_error);
    CHECK_THROWS_AS((void)load_keel(test::fixture("does_not_exist.dat")), error);
}

TEST_CASE("csv loader") {
    SUBCASE("six rows, minority is the rarer tag") {
        const LabeledDataset d = load_csv(test::fixture("six.csv"));
        CHECK(d.class_names()[static_cast<std::size_t>(d.minority_label())] == "b");
        CHECK(d.majority_count() == 4);
        CHECK(d.minority_count() == 2);
    }
    SUBCASE("three labels are rejected") {
        try {
            (void)load_csv(test::fixture("three_classes.csv"));
            FAIL("expected an unsupported dataset error");
        } catch (const unsupported_dataset_error &e) {
            CHECK(std::string{ e.what() }.find("expected binary labels") != std::string::npos);
        }
    }
    SUBCASE("same data block as a keel file loads equal") {
        CsvOptions opts;
        opts.label_column = std::string{ "Class" };
        CHECK(load_csv(test::fixture("tiny.csv"), opts) == load_keel(test::fixture("tiny.dat")));
        opts.label_column = std::size_t{ 3 };
        CHECK(load_csv(test::fixture("tiny.csv"), opts) == load_keel(test::fixture("tiny.dat")));
    }
}

TEST_CASE("csv round trip keeps every bit") {
    std::mt19937_64 rng{ 7 };
    const LabeledDataset d = test::random_dataset(rng, 30, 9, 4);
    const auto dir = test::scratch_dir("csv_round_trip");
    save_csv(d, dir / "d.csv");
    CHECK(load_csv(dir / "d.csv") == d);
}

TEST_CASE("keel files from the repository") {
    const auto dir = test::keel_dir();
    if (!dir) {
        MESSAGE("keel directory not configured; skipped");
        return;
    }
    const LabeledDataset pima = load_keel(*dir / "pima.dat");
    CHECK(pima.n_samples() == 768);
    CHECK(pima.majority_count() == 500);
    CHECK(pima.minority_count() == 268);
    // the published table lists 1.90, which 500 / 268 does not give
    CHECK(pima.imbalance_ratio() == 500.0 / 268.0);
    const LabeledDataset glass = load_keel(*dir / "glass0.dat");
    CHECK(glass.n_samples() == 214);
    CHECK(glass.n_features() == 9);
    CHECK(glass.minority_count() == 70);

    const FoldPlan plan = stratified_kfold(pima, 5, 11);
    for (const Fold &f : plan.folds) {
        std::size_t minority = 0;
        for (const std::size_t i : f.test) {
            minority += pima.labels()[i] == pima.minority_label() ? 1 : 0;
        }
        CHECK((minority == 53 || minority == 54));
    }
}

TEST_CASE("standardizer") {
    SUBCASE("two values") {
        Matrix x(2, 1);
        x << 1, 3;
        const Standardizer s = fit_standardizer(x);
        CHECK(s.mean(0) == 2.0);
        CHECK(s.scale(0) == 1.0);
        const Matrix t = apply_standardizer(s, x);
        CHECK(t(0, 0) == -1.0);
        CHECK(t(1, 0) == 1.0);
    }
    SUBCASE("constant column maps to zero") {
        Matrix x(3, 1);
        x << 5, 5, 5;
        const Standardizer s = fit_standardizer(x);
        CHECK(s.scale(0) == 1.0);
        CHECK(apply_standardizer(s, x).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("random matrix is centred and scaled") {
        std::mt19937_64 rng{ 3 };
        const Matrix x = test::gaussian_matrix(rng, 50, 4, 3.0, 2.5);
        const Matrix t = apply_standardizer(fit_standardizer(x), x);
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            double mean = 0.0;
            for (Eigen::Index i = 0; i < t.rows(); ++i) {
                mean += t(i, j);
            }
            mean /= static_cast<double>(t.rows());
            double var = 0.0;
            for (Eigen::Index i = 0; i < t.rows(); ++i) {
                var += (t(i, j) - mean) * (t(i, j) - mean);
            }
            var /= static_cast<double>(t.rows());
            CHECK(std::abs(mean) < 1e-9);
            CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("stratified k-fold") {
    Matrix x = Matrix::Zero(15, 2);
    for (Eigen::Index i = 0; i < 15; ++i) {
        x(i, 0) = static_cast<double>(i);
    }
    std::vector<int> y(15, 0);
    std::fill(y.begin() + 10, y.end(), 1);
    const LabeledDataset d{ x, y, { "maj", "min" }, 1 };
    const FoldPlan plan = stratified_kfold(d, 5, 42);
    REQUIRE(plan.folds.size() == 5);
    std::multiset<std::size_t> seen;
    for (const Fold &f : plan.folds) {
        std::size_t maj = 0;
        std::size_t min = 0;
        for (const std::size_t i : f.test) {
            (y[i] == 1 ? min : maj) += 1;
            seen.insert(i);
        }
        CHECK(maj == 2);
        CHECK(min == 1);
        CHECK(f.train.size() + f.test.size() == 15);
        for (const std::size_t i : f.train) {
            CHECK(std::find(f.test.begin(), f.test.end(), i) == f.test.end());
        }
    }
    CHECK(seen.size() == 15);
    CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == 15);

    const FoldPlan again = stratified_kfold(d, 5, 42);
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(again.folds[f].train == plan.folds[f].train);
        CHECK(again.folds[f].test == plan.folds[f].test);
    }
    CHECK_THROWS_AS((void)stratified_kfold(d, 1, 0), invalid_argument);
    CHECK_THROWS_AS((void)stratified_kfold(d, 6, 0), invalid_argument);
}

TEST_CASE("clover generator") {
    const LabeledDataset c = generate_clover(500, 100, 0, 9);
    CHECK(c.n_samples() == 600);
    CHECK(c.majority_count() == 500);
    CHECK(c.minority_count() == 100);
    CHECK(c.imbalance_ratio() == 5.0);
    for (std::size_t i = 0; i < c.n_samples(); ++i) {
        const double px = c.features()(static_cast<Eigen::Index>(i), 0);
        const double py = c.features()(static_cast<Eigen::Index>(i), 1);
        CHECK(CloverGeometry::inside(px, py) == (c.labels()[i] == c.minority_label()));
    }
    CHECK(generate_clover(500, 100, 0, 9) == c);
    CHECK_THROWS_AS((void)generate_clover(10, 0, 0, 1), invalid_argument);

    const LabeledDataset noisy = generate_clover(500, 100, 70, 9);
    std::size_t moved = 0;
    for (std::size_t i = 0; i < noisy.n_samples(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (noisy.labels()[i] == noisy.minority_label() && noisy.features().row(r) != c.features().row(r)) {
            ++moved;
            CHECK(CloverGeometry::in_border(noisy.features()(r, 0), noisy.features()(r, 1)));
        }
    }
    CHECK(moved == 70);
}

TEST_CASE("dataset invariants are enforced") {
    Matrix x(3, 1);
    x << 1, 2, 3;
    CHECK_THROWS_AS((LabeledDataset{ x, { 0, 0, 0 }, { "a", "b" }, 1 }), unsupported_dataset_error);
    CHECK_THROWS_AS((LabeledDataset{ x, { 0, 1 }, { "a", "b" }, 1 }), invalid_argument);
    CHECK_THROWS_AS((LabeledDataset{ x, { 0, 1, 1 }, { "a", "b" }, 1 }), invalid_argument);
    x(1, 0) = std::nan("");
    CHECK_THROWS_AS((LabeledDataset{ x, { 0, 0, 1 }, { "a", "b" }, 1 }), invalid_argument);
}
