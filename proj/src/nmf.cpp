#include "vc/nmf.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vc {

namespace {

constexpr double kEps = 1e-9;

Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t l = 0; l < a.cols; ++l) {
            double av = a.at(i, l);
            if (av == 0.0) continue;
            const double* brow = &b.data[l * b.cols];
            double* crow = &c.data[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    return c;
}

Mat transpose(const Mat& a) {
    Mat t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

double frob2(const Mat& a) {
    double s = 0;
    for (double v : a.data) s += v * v;
    return s;
}

bool all_zero(const Mat& a) {
    for (double v : a.data)
        if (v != 0.0) return false;
    return true;
}

void fill_uniform(Mat& m, std::mt19937_64& rng) {
    // uniform (0, 1]
    std::uniform_real_distribution<double> dist(
        std::nextafter(0.0, 1.0), 1.0);
    for (double& v : m.data) v = dist(rng);
}

}  // namespace

double nmf_objective(const Mat& x, const Mat& w, const Mat& h) {
    Mat wh = matmul(w, h);
    double s = 0;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        double d = x.data[i] - wh.data[i];
        s += d * d;
    }
    return s;
}

NmfFit nmf_fit(const Mat& x, std::size_t k, int max_iters, double tol,
               std::uint64_t seed, std::vector<std::string> tag_vocabulary,
               const std::function<void(int, double)>& on_iteration) {
    if (x.rows == 0 || x.cols == 0)
        throw std::invalid_argument("nmf_fit: empty matrix");
    if (k > std::min(x.rows, x.cols))
        throw std::invalid_argument("nmf_fit: rank exceeds min(n, m)");
    if (!tag_vocabulary.empty() && tag_vocabulary.size() != x.cols)
        throw std::invalid_argument("nmf_fit: vocabulary/column mismatch");

    NmfFit fit;
    fit.model.k = k;
    fit.model.tag_vocabulary = std::move(tag_vocabulary);

    if (all_zero(x)) {
        fit.model.h = Mat(k, x.cols);
        fit.w = Mat(x.rows, k);
        fit.model.degenerate = true;
        return fit;
    }

    std::mt19937_64 rng(seed);
    Mat w(x.rows, k), h(k, x.cols);
    fill_uniform(w, rng);
    fill_uniform(h, rng);

    double x_norm = frob2(x);
    double prev = nmf_objective(x, w, h);
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        // H <- H .* (W'X) ./ (W'WH + eps)
        Mat wt = transpose(w);
        Mat wtx = matmul(wt, x);
        Mat wtwh = matmul(matmul(wt, w), h);
        for (std::size_t i = 0; i < h.data.size(); ++i)
            h.data[i] *= wtx.data[i] / (wtwh.data[i] + kEps);

        // W <- W .* (XH') ./ (WHH' + eps)
        Mat ht = transpose(h);
        Mat xht = matmul(x, ht);
        Mat whht = matmul(w, matmul(h, ht));
        for (std::size_t i = 0; i < w.data.size(); ++i)
            w.data[i] *= xht.data[i] / (whht.data[i] + kEps);

        double err = nmf_objective(x, w, h);
        if (on_iteration) on_iteration(iter, err);
        if (prev > 0 && (prev - err) / prev < tol) {
            prev = err;
            ++iter;
            break;
        }
        prev = err;
    }

    fit.model.h = std::move(h);
    fit.model.iterations = iter;
    fit.model.final_error = std::sqrt(prev / x_norm);
    fit.w = std::move(w);
    return fit;
}

std::vector<double> nmf_transform(const NmfModel& model,
                                  const std::vector<double>& row,
                                  int max_iters, double tol) {
    const Mat& h = model.h;
    if (row.size() != h.cols)
        throw std::invalid_argument("nmf_transform: row length mismatch");
    std::size_t k = h.rows;
    std::vector<double> w(k, 0.0);
    if (model.degenerate) return w;

    bool zero_row = true;
    for (double v : row)
        if (v != 0.0) {
            zero_row = false;
            break;
        }
    if (zero_row) return w;

    // x H' and H H' do not change across iterations
    std::vector<double> xht(k, 0.0);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t j = 0; j < h.cols; ++j)
            xht[l] += row[j] * h.at(l, j);
    Mat hht(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            double s = 0;
            for (std::size_t j = 0; j < h.cols; ++j)
                s += h.at(a, j) * h.at(b, j);
            hht.at(a, b) = s;
        }

    w.assign(k, 1.0);
    double prev = -1;
    for (int it = 0; it < max_iters; ++it) {
        double delta = 0;
        for (std::size_t l = 0; l < k; ++l) {
            double denom = kEps;
            for (std::size_t b = 0; b < k; ++b)
                denom += w[b] * hht.at(b, l);
            double nw = w[l] * xht[l] / denom;
            delta += std::fabs(nw - w[l]);
            w[l] = nw;
        }
        if (prev >= 0 && delta < tol) break;
        prev = delta;
    }
    return w;
}

void NmfModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "nmf-model v1\n";
    out << k << ' ' << h.rows << ' ' << h.cols << ' ' << (degenerate ? 1 : 0)
        << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < h.data.size(); ++i)
        out << h.data[i] << (((i + 1) % h.cols == 0) ? '\n' : ' ');
    out << tag_vocabulary.size() << '\n';
    for (const auto& t : tag_vocabulary) out << t << '\n';
}

NmfModel NmfModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string magic, version;
    in >> magic >> version;
    if (magic != "nmf-model" || version != "v1")
        throw std::runtime_error("bad model file: " + path.string());
    NmfModel m;
    std::size_t rows, cols;
    int degen;
    in >> m.k >> rows >> cols >> degen;
    m.degenerate = degen != 0;
    m.h = Mat(rows, cols);
    for (double& v : m.h.data) in >> v;
    std::size_t n;
    in >> n;
    std::getline(in, magic);  // trailing newline
    m.tag_vocabulary.resize(n);
    for (auto& t : m.tag_vocabulary) std::getline(in, t);
    if (!in) throw std::runtime_error("truncated model file: " + path.string());
    return m;
}

}  // namespace vc
