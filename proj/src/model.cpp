#include "vc/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vc {

namespace {

// Numerically stable weighted binary cross-entropy on the logit.
double bce_on_logit(double z, int label, double weight) {
    // -w * [y*log(sigmoid(z)) + (1-y)*log(1-sigmoid(z))]
    double loss;
    if (label == 1) {
        loss = z >= 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    } else {
        loss = z >= 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    return weight * loss;
}

}  // namespace

Classifier::Classifier(const FeatureSchema& schema, const ClassifierConfig& cfg)
    : cfg_(cfg) {
    n_categoricals_ = schema.categorical_fields.size();
    n_numerics_ = schema.numeric_fields.size();
    tag_dim_ = schema.tag_embedding_dim;

    std::size_t total_emb = 0;
    for (const auto& f : schema.categorical_fields) {
        vocab_sizes_.push_back(f.vocabulary.size());
        emb_offsets_.push_back(total_emb);
        total_emb += (f.vocabulary.size() + 1) * cfg_.embedding_dim_per_categorical;
    }
    input_width_ = n_categoricals_ * cfg_.embedding_dim_per_categorical +
                   2 * n_numerics_ + tag_dim_;

    std::mt19937_64 rng(cfg_.seed);
    embeddings_.resize(total_emb);
    for (double& v : embeddings_)
        v = init_uniform(cfg_.embedding_dim_per_categorical, rng);

    std::vector<std::size_t> sizes;
    sizes.push_back(input_width_);
    for (std::size_t h : cfg_.hidden_sizes) sizes.push_back(h);
    sizes.push_back(1);
    mlp_ = Mlp(std::move(sizes), rng);
}

void Classifier::check_row(const FeatureVector& fv) const {
    if (fv.categorical_codes.size() != n_categoricals_ ||
        fv.numeric_values.size() != n_numerics_ ||
        fv.missing_mask.size() != n_numerics_ ||
        fv.tag_embedding.size() != tag_dim_)
        throw std::invalid_argument("feature vector does not match schema");
}

void Classifier::build_input(const FeatureVector& fv,
                             std::vector<double>& x) const {
    check_row(fv);
    x.clear();
    x.reserve(input_width_);
    std::size_t d = cfg_.embedding_dim_per_categorical;
    for (std::size_t c = 0; c < n_categoricals_; ++c) {
        int code = fv.categorical_codes[c];
        if (code < 0 || std::size_t(code) > vocab_sizes_[c])
            throw std::out_of_range("categorical code out of range");
        const double* row = &embeddings_[emb_offsets_[c] + std::size_t(code) * d];
        x.insert(x.end(), row, row + d);
    }
    x.insert(x.end(), fv.numeric_values.begin(), fv.numeric_values.end());
    x.insert(x.end(), fv.missing_mask.begin(), fv.missing_mask.end());
    x.insert(x.end(), fv.tag_embedding.begin(), fv.tag_embedding.end());
}

double Classifier::sample_pass(const FeatureVector& fv, int label,
                               double pos_weight, bool with_grads,
                               std::vector<double>& emb_grads,
                               std::vector<double>& mlp_grads,
                               std::mt19937_64* dropout_rng,
                               Mlp::Workspace& ws) const {
    std::vector<double> x;
    build_input(fv, x);
    auto out = mlp_.forward(x, ws, cfg_.dropout_rate, dropout_rng);
    double z = out[0];
    double weight = label == 1 ? pos_weight : 1.0;
    double loss = bce_on_logit(z, label, weight);
    if (with_grads) {
        double grad_z = weight * (sigmoid(z) - double(label));
        std::vector<double> out_grad{grad_z};
        std::vector<double> in_grad(input_width_, 0.0);
        mlp_.backward(ws, out_grad, mlp_grads, in_grad);
        std::size_t d = cfg_.embedding_dim_per_categorical;
        for (std::size_t c = 0; c < n_categoricals_; ++c) {
            int code = fv.categorical_codes[c];
            double* g = &emb_grads[emb_offsets_[c] + std::size_t(code) * d];
            for (std::size_t j = 0; j < d; ++j) g[j] += in_grad[c * d + j];
        }
    }
    return loss;
}

TrainDiagnostics Classifier::train(const std::vector<FeatureVector>& rows,
                                   const std::vector<int>& labels) {
    if (rows.size() != labels.size())
        throw std::invalid_argument("rows/labels size mismatch");
    if (rows.empty()) throw std::invalid_argument("empty training set");

    TrainDiagnostics diag;
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += std::size_t(y == 1);
    std::size_t n_neg = labels.size() - n_pos;

    if (n_pos == 0 || n_neg == 0) {
        // Degenerate single-class window: predict the class prior.
        diag.single_class = true;
        constant_score_ = n_pos == 0 ? 0.0 : 1.0;
        return diag;
    }
    constant_score_.reset();

    double pos_weight = cfg_.positive_class_weight > 0.0
                            ? cfg_.positive_class_weight
                            : double(n_neg) / double(n_pos);
    diag.positive_class_weight = pos_weight;

    AdamOptimizer emb_opt(embeddings_.size(), cfg_.learning_rate);
    AdamOptimizer mlp_opt(mlp_.param_count(), cfg_.learning_rate);
    std::vector<double> emb_grads(embeddings_.size());
    std::vector<double> mlp_grads(mlp_.param_count());
    Mlp::Workspace ws;

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(cfg_.seed * 0x9e3779b97f4a7c15ULL +
                                    std::uint64_t(epoch) + 1);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        std::mt19937_64 dropout_rng(cfg_.seed ^ (0xd1b54a32d192ed03ULL +
                                                 std::uint64_t(epoch)));
        double epoch_loss = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t end = std::min(order.size(), i + cfg_.batch_size);
            std::fill(emb_grads.begin(), emb_grads.end(), 0.0);
            std::fill(mlp_grads.begin(), mlp_grads.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = i; k < end; ++k) {
                batch_loss += sample_pass(rows[order[k]], labels[order[k]],
                                          pos_weight, true, emb_grads,
                                          mlp_grads, &dropout_rng, ws);
            }
            double inv = 1.0 / double(end - i);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error(
                    "training diverged: non-finite loss at epoch " +
                    std::to_string(epoch));
            for (double& g : emb_grads) g *= inv;
            for (double& g : mlp_grads) g *= inv;
            emb_opt.step(embeddings_, emb_grads);
            mlp_opt.step(mlp_.params(), mlp_grads);
            epoch_loss += batch_loss;
            i = end;
        }
        diag.epoch_loss.push_back(epoch_loss / double(rows.size()));
    }
    return diag;
}

double Classifier::predict_one(const FeatureVector& row) const {
    if (constant_score_) return *constant_score_;
    std::vector<double> x;
    build_input(row, x);
    Mlp::Workspace ws;
    auto out = mlp_.forward(x, ws);
    return sigmoid(out[0]);
}

std::vector<double> Classifier::predict(
    const std::vector<FeatureVector>& rows) const {
    std::vector<double> scores;
    scores.reserve(rows.size());
    for (const auto& r : rows) scores.push_back(predict_one(r));
    return scores;
}

double Classifier::gradient_check(const std::vector<FeatureVector>& rows,
                                  const std::vector<int>& labels,
                                  std::size_t max_params_per_group, double h) {
    if (rows.empty() || rows.size() != labels.size())
        throw std::invalid_argument("gradient_check: bad batch");
    if (constant_score_)
        throw std::logic_error("gradient_check: constant model");

    double pos_weight = 1.0;
    std::vector<double> emb_grads(embeddings_.size(), 0.0);
    std::vector<double> mlp_grads(mlp_.param_count(), 0.0);
    Mlp::Workspace ws;
    for (std::size_t i = 0; i < rows.size(); ++i)
        sample_pass(rows[i], labels[i], pos_weight, true, emb_grads, mlp_grads,
                    nullptr, ws);

    // Batch loss plus the rectifier sign pattern, so parameter nudges
    // that cross a kink can be excluded from the comparison.
    auto loss_and_signs = [&](std::vector<signed char>* signs) {
        double total = 0.0;
        std::vector<double> dummy_e, dummy_m;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            total += sample_pass(rows[i], labels[i], pos_weight, false,
                                 dummy_e, dummy_m, nullptr, ws);
            if (signs)
                for (std::size_t l = 0; l + 1 < ws.pre.size(); ++l)
                    for (double z : ws.pre[l])
                        signs->push_back(z > 0 ? 1 : -1);
        }
        return total;
    };

    double max_rel = 0.0;
    auto check_group = [&](std::vector<double>& params,
                           const std::vector<double>& analytic) {
        std::size_t n = params.size();
        std::size_t step = std::max<std::size_t>(1, n / max_params_per_group);
        for (std::size_t i = 0; i < n; i += step) {
            double orig = params[i];
            std::vector<signed char> sp, sm;
            params[i] = orig + h;
            double lp = loss_and_signs(&sp);
            params[i] = orig - h;
            double lm = loss_and_signs(&sm);
            params[i] = orig;
            if (sp != sm) continue;  // straddles a rectifier kink
            double numeric = (lp - lm) / (2.0 * h);
            double rel = std::abs(analytic[i] - numeric) /
                         std::max({1.0, std::abs(analytic[i]),
                                   std::abs(numeric)});
            max_rel = std::max(max_rel, rel);
        }
    };
    check_group(embeddings_, emb_grads);
    check_group(mlp_.params(), mlp_grads);
    return max_rel;
}

void Classifier::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(17);
    out << "classifier v1\n";
    out << cfg_.embedding_dim_per_categorical << " " << cfg_.dropout_rate
        << " " << cfg_.learning_rate << " " << cfg_.epochs << " "
        << cfg_.batch_size << " " << cfg_.positive_class_weight << " "
        << cfg_.seed << "\n";
    out << cfg_.hidden_sizes.size();
    for (std::size_t hsz : cfg_.hidden_sizes) out << " " << hsz;
    out << "\n";
    out << n_categoricals_ << " " << n_numerics_ << " " << tag_dim_ << "\n";
    for (std::size_t v : vocab_sizes_) out << v << " ";
    out << "\n";
    out << (constant_score_ ? 1 : 0) << " "
        << (constant_score_ ? *constant_score_ : 0.0) << "\n";
    out << embeddings_.size() << "\n";
    for (double v : embeddings_) out << v << "\n";
    out << mlp_.param_count() << "\n";
    for (double v : mlp_.params()) out << v << "\n";
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Classifier Classifier::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "classifier v1")
        throw std::runtime_error("bad classifier file: " + path.string());

    Classifier c;
    in >> c.cfg_.embedding_dim_per_categorical >> c.cfg_.dropout_rate >>
        c.cfg_.learning_rate >> c.cfg_.epochs >> c.cfg_.batch_size >>
        c.cfg_.positive_class_weight >> c.cfg_.seed;
    std::size_t nh;
    in >> nh;
    c.cfg_.hidden_sizes.resize(nh);
    for (auto& hsz : c.cfg_.hidden_sizes) in >> hsz;
    in >> c.n_categoricals_ >> c.n_numerics_ >> c.tag_dim_;
    c.vocab_sizes_.resize(c.n_categoricals_);
    std::size_t total_emb = 0;
    for (auto& v : c.vocab_sizes_) in >> v;
    for (std::size_t v : c.vocab_sizes_) {
        c.emb_offsets_.push_back(total_emb);
        total_emb += (v + 1) * c.cfg_.embedding_dim_per_categorical;
    }
    c.input_width_ = c.n_categoricals_ * c.cfg_.embedding_dim_per_categorical +
                     2 * c.n_numerics_ + c.tag_dim_;
    int has_const;
    double const_score;
    in >> has_const >> const_score;
    if (has_const) c.constant_score_ = const_score;

    std::size_t n_emb;
    in >> n_emb;
    if (n_emb != total_emb)
        throw std::runtime_error("bad classifier file: embedding count");
    c.embeddings_.resize(n_emb);
    for (double& v : c.embeddings_) in >> v;

    std::vector<std::size_t> sizes;
    sizes.push_back(c.input_width_);
    for (std::size_t hsz : c.cfg_.hidden_sizes) sizes.push_back(hsz);
    sizes.push_back(1);
    std::mt19937_64 dummy(0);
    c.mlp_ = Mlp(std::move(sizes), dummy);
    std::size_t n_mlp;
    in >> n_mlp;
    if (n_mlp != c.mlp_.param_count())
        throw std::runtime_error("bad classifier file: parameter count");
    for (double& v : c.mlp_.params()) in >> v;
    if (!in) throw std::runtime_error("truncated classifier file: " +
                                      path.string());
    return c;
}

}  // namespace vc
