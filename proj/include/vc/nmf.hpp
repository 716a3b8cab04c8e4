#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace vc {

/// Dense row-major matrix, just enough for the factorization code.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct NmfModel {
    Mat h;                                // k x m factor matrix, entries >= 0
    std::vector<std::string> tag_vocabulary;  // m tags, fixed order
    std::size_t k = 0;
    double final_error = 0.0;  // relative Frobenius error at convergence
    int iterations = 0;
    bool degenerate = false;  // all-zero input; codes are all zero

    void save(const std::filesystem::path& path) const;
    static NmfModel load(const std::filesystem::path& path);
};

struct NmfFit {
    NmfModel model;
    Mat w;  // n x k training codes
};

/// Frobenius-norm multiplicative updates on a binary (or nonnegative)
/// matrix. Deterministic per seed; objective is non-increasing.
/// on_iteration, when set, receives ||X - WH||_F^2 after each update.
NmfFit nmf_fit(const Mat& x, std::size_t k, int max_iters = 200,
               double tol = 1e-5, std::uint64_t seed = 0,
               std::vector<std::string> tag_vocabulary = {},
               const std::function<void(int, double)>& on_iteration = {});

/// Nonnegative code for one row with H fixed.
std::vector<double> nmf_transform(const NmfModel& model,
                                  const std::vector<double>& row,
                                  int max_iters = 200, double tol = 1e-8);

/// ||X - WH||_F^2, the fit objective (exposed for tests).
double nmf_objective(const Mat& x, const Mat& w, const Mat& h);

}  // namespace vc
