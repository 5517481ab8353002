#include "imb/svm.hpp"

#include "imb/kernels.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

namespace imb {

double scale_gamma(const Matrix &x) {
    const double var = (x.array() - x.mean()).square().mean();
    return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

namespace {

// LRU cache of kernel rows K(x_i, .)
class KernelCache {
  public:
    KernelCache(const Matrix &x, double gamma, std::size_t bytes) :
        x_{ x },
        gamma_{ gamma },
        capacity_{ std::max<std::size_t>(2, bytes / (sizeof(double) * static_cast<std::size_t>(std::max<Eigen::Index>(1, x.rows())))) } {}

    const std::vector<double> &row(std::size_t i) {
        if (const auto it = rows_.find(i); it != rows_.end()) {
            order_.splice(order_.begin(), order_, it->second.second);
            return it->second.first;
        }
        if (rows_.size() >= capacity_) {
            rows_.erase(order_.back());
            order_.pop_back();
        }
        order_.push_front(i);
        auto &entry = rows_[i];
        entry.first.resize(static_cast<std::size_t>(x_.rows()));
        entry.second = order_.begin();
        kernels::rbf_row(x_, static_cast<Eigen::Index>(i), gamma_, entry.first);
        return entry.first;
    }

  private:
    const Matrix &x_;
    double gamma_;
    std::size_t capacity_;
    std::list<std::size_t> order_;
    std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> rows_;
};

constexpr double tau = 1e-12;

}  // namespace

SvmModel train_svm(const Matrix &x, std::span<const int> y, const SvmParams &params) {
    const auto n = static_cast<std::size_t>(x.rows());
    if (n < 2) {
        throw invalid_argument{ fmt::format("SVM training needs at least 2 samples, got {}", n) };
    }
    if (y.size() != n) {
        throw invalid_argument{ fmt::format("{} training rows but {} labels", n, y.size()) };
    }
    if (!x.allFinite()) {
        throw invalid_argument{ "SVM training features must be finite" };
    }
    bool has_pos = false;
    bool has_neg = false;
    for (const int label : y) {
        if (label == 1) {
            has_pos = true;
        } else if (label == -1) {
            has_neg = true;
        } else {
            throw invalid_argument{ fmt::format("SVM labels must be +1 or -1, got {}", label) };
        }
    }
    if (!has_pos || !has_neg) {
        throw invalid_argument{ "SVM training needs both classes present" };
    }
    if (!(params.c_reg > 0.0) || !(params.tol > 0.0)) {
        throw invalid_argument{ "SVM c_reg and tol must be positive" };
    }
    const double gamma = params.gamma.value_or(scale_gamma(x));
    if (!(gamma > 0.0)) {
        throw invalid_argument{ "SVM gamma must be positive" };
    }
    const double c = params.c_reg;
    const std::size_t max_iter = params.max_iter > 0 ? params.max_iter : std::max<std::size_t>(10'000'000, 100 * n);

    std::vector<double> yd(n);
    for (std::size_t t = 0; t < n; ++t) {
        yd[t] = static_cast<double>(y[t]);
    }
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    KernelCache cache{ x, gamma, params.cache_bytes };
    const auto upper = [&](std::size_t t) { return alpha[t] >= c; };
    const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    std::size_t iter = 0;
    bool converged = false;
    while (iter < max_iter) {
        // i: maximal violator in I_up, first index on ties
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (yd[t] > 0 ? !upper(t) : !lower(t)) {
                const double v = -yd[t] * grad[t];
                if (v > gmax) {
                    gmax = v;
                    i = t;
                }
            }
        }
        if (i == n) {
            converged = true;
            break;
        }
        const std::vector<double> &ki = cache.row(i);

        // j: largest second-order gain among I_low
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (yd[t] > 0 ? lower(t) : upper(t)) {
                continue;
            }
            const double v = yd[t] * grad[t];
            gmax2 = std::max(gmax2, v);
            const double grad_diff = gmax + v;
            if (grad_diff > 0.0) {
                // Q_ii + Q_tt - 2 y_i y_t Q_it with K_ii = K_tt = 1
                double quad = 2.0 - 2.0 * ki[t];
                if (quad <= 0.0) {
                    quad = tau;
                }
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj < best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        }
        if (gmax + gmax2 < params.tol || j == n) {
            converged = true;
            break;
        }
        ++iter;

        const std::vector<double> &kj = cache.row(j);
        const double kij = ki[j];
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (yd[i] != yd[j]) {
            // Q_ii + Q_jj + 2 Q_ij with Q_ij = -K_ij
            double quad = 2.0 - 2.0 * kij;
            if (quad <= 0.0) {
                quad = tau;
            }
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = 2.0 - 2.0 * kij;
            if (quad <= 0.0) {
                quad = tau;
            }
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        // Q_ti = y_t y_i K_ti
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += yd[t] * (yd[i] * ki[t] * dai + yd[j] * kj[t] * daj);
        }
    }
    if (!converged) {
        spdlog::warn("SMO stopped after {} iterations without meeting tol {}", max_iter, params.tol);
    }

    // bias from free variables, else the midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = yd[t] * grad[t];
        if (upper(t)) {
            if (yd[t] < 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else if (lower(t)) {
            if (yd[t] > 0) {
                ub = std::min(ub, yg);
            } else {
                lb = std::max(lb, yg);
            }
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);

    SvmModel model;
    double half_quad_minus_sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        half_quad_minus_sum += alpha[t] * (grad[t] - 1.0);
        if (alpha[t] > 0.0) {
            model.support_indices_.push_back(t);
        }
    }
    model.objective_ = -0.5 * half_quad_minus_sum;
    model.support_.resize(static_cast<Eigen::Index>(model.support_indices_.size()), x.cols());
    model.coef_.resize(static_cast<Eigen::Index>(model.support_indices_.size()));
    for (std::size_t s = 0; s < model.support_indices_.size(); ++s) {
        const std::size_t t = model.support_indices_[s];
        model.support_.row(static_cast<Eigen::Index>(s)) = x.row(static_cast<Eigen::Index>(t));
        model.coef_(static_cast<Eigen::Index>(s)) = alpha[t] * yd[t];
    }
    model.bias_ = -rho;
    model.gamma_ = gamma;
    model.c_reg_ = c;
    model.iterations_ = iter;
    model.converged_ = converged;
    return model;
}

Vector SvmModel::decision_function(const Matrix &x) const {
    if (x.cols() != support_.cols() && support_.rows() > 0) {
        throw invalid_argument{ fmt::format("SVM trained on {} features, queried with {}", support_.cols(), x.cols()) };
    }
    return kernels::rbf_decision(support_, coef_, bias_, gamma_, x);
}

std::vector<int> SvmModel::predict(const Matrix &x) const {
    const Vector margin = decision_function(x);
    std::vector<int> out(static_cast<std::size_t>(margin.size()));
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
        out[static_cast<std::size_t>(i)] = margin(i) >= 0.0 ? 1 : -1;
    }
    return out;
}

}  // namespace imb
