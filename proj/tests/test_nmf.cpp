#include <doctest.h>

#include <filesystem>
#include <random>

#include "vc/nmf.hpp"

using namespace vc;

namespace {

Mat random_binary(std::size_t n, std::size_t m, std::uint64_t seed,
                  double density = 0.3) {
    Mat x(n, m);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    for (double& v : x.data) v = coin(rng) ? 1.0 : 0.0;
    return x;
}

}  // namespace

TEST_CASE("objective is non-increasing across iterations") {
    auto x = random_binary(50, 40, 11);
    double prev = -1;
    int violations = 0;
    nmf_fit(x, 5, 200, 0.0, 42, {}, [&](int, double err) {
        if (prev >= 0 && err > prev + 1e-12) ++violations;
        prev = err;
    });
    CHECK(violations == 0);
}

TEST_CASE("exactly factorable matrix reaches small relative error") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t n = 30, m = 25, k = 4;
    Mat w0(n, k), h0(k, m);
    for (double& v : w0.data) v = u(rng);
    for (double& v : h0.data) v = u(rng);
    Mat x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0;
            for (std::size_t l = 0; l < k; ++l) s += w0.at(i, l) * h0.at(l, j);
            x.at(i, j) = s;
        }
    auto fit = nmf_fit(x, k, 20000, 0.0, 9);
    CHECK(fit.model.final_error < 1e-3);
}

TEST_CASE("nonnegativity and determinism") {
    auto x = random_binary(40, 30, 5);
    auto a = nmf_fit(x, 6, 100, 0.0, 99);
    auto b = nmf_fit(x, 6, 100, 0.0, 99);
    CHECK(a.model.h.data == b.model.h.data);
    CHECK(a.w.data == b.w.data);
    for (double v : a.model.h.data) CHECK(v >= 0.0);
    for (double v : a.w.data) CHECK(v >= 0.0);
    auto c = nmf_fit(x, 6, 100, 0.0, 100);
    CHECK(a.model.h.data != c.model.h.data);
}

TEST_CASE("all-zero matrix and zero rows give zero codes") {
    Mat zeros(10, 8);
    auto fit = nmf_fit(zeros, 3, 50, 1e-5, 1);
    CHECK(fit.model.degenerate);
    for (double v : fit.w.data) CHECK(v == 0.0);

    auto x = random_binary(20, 10, 2);
    for (std::size_t j = 0; j < x.cols; ++j) x.at(4, j) = 0.0;
    auto fit2 = nmf_fit(x, 3, 50, 0.0, 2);
    std::vector<double> row(x.cols, 0.0);
    auto code = nmf_transform(fit2.model, row);
    for (double v : code) CHECK(v == 0.0);
}

TEST_CASE("transform of a training row approximates its training code") {
    auto x = random_binary(60, 40, 21, 0.25);
    auto fit = nmf_fit(x, 5, 600, 0.0, 13);
    double worst = 0;
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<double> row(x.cols);
        for (std::size_t j = 0; j < x.cols; ++j) row[j] = x.at(i, j);
        auto code = nmf_transform(fit.model, row, 600);
        // compare reconstructions, which is what the code is for
        double num = 0, den = 0;
        for (std::size_t j = 0; j < x.cols; ++j) {
            double ra = 0, rb = 0;
            for (std::size_t l = 0; l < 5; ++l) {
                ra += fit.w.at(i, l) * fit.model.h.at(l, j);
                rb += code[l] * fit.model.h.at(l, j);
            }
            num += (ra - rb) * (ra - rb);
            den += ra * ra;
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("transform handles unseen combinations and rejects bad length") {
    auto x = random_binary(20, 12, 9);
    auto fit = nmf_fit(x, 4, 100, 0.0, 9);
    std::vector<double> unseen(12, 0.0);
    unseen[0] = unseen[11] = 1.0;
    auto code = nmf_transform(fit.model, unseen);
    for (double v : code) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    CHECK_THROWS(nmf_transform(fit.model, std::vector<double>(5, 0.0)));
    CHECK_THROWS(nmf_fit(x, 15, 10, 0.0, 1));
}

TEST_CASE("model save/load round-trip") {
    auto x = random_binary(15, 10, 33);
    auto fit = nmf_fit(x, 3, 50, 0.0, 4, {"t0", "t1", "t2", "t3", "t4", "t5",
                                          "t6", "t7", "t8", "t9"});
    auto path = std::filesystem::temp_directory_path() / "nmf_model.txt";
    fit.model.save(path);
    auto loaded = NmfModel::load(path);
    CHECK(loaded.k == fit.model.k);
    CHECK(loaded.tag_vocabulary == fit.model.tag_vocabulary);
    REQUIRE(loaded.h.data.size() == fit.model.h.data.size());
    for (std::size_t i = 0; i < loaded.h.data.size(); ++i)
        CHECK(loaded.h.data[i] == doctest::Approx(fit.model.h.data[i]));
    std::filesystem::remove(path);
}
