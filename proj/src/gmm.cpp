#include "imb/gmm.hpp"

#include <Eigen/Cholesky>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace imb {

void EmConfig::validate() const {
    if (max_iters < 1 || !(tol > 0.0) || !(reg_floor > 0.0) || n_init < 1) {
        throw invalid_argument{ fmt::format("EM configuration values must be positive (max_iters={}, tol={}, reg_floor={}, n_init={})",
                                            max_iters, tol, reg_floor, n_init) };
    }
}

namespace {

kernels::GaussianTerms make_terms(const Vector &weights, const Matrix &means, const std::vector<Matrix> &covs) {
    const Eigen::Index d = means.cols();
    kernels::GaussianTerms terms;
    terms.means = means;
    terms.inv_chol.resize(covs.size());
    terms.log_norm.resize(static_cast<Eigen::Index>(covs.size()));
    const double log_two_pi = std::log(2.0 * std::numbers::pi);
    for (std::size_t c = 0; c < covs.size(); ++c) {
        const Eigen::LLT<Eigen::MatrixXd> llt{ Eigen::MatrixXd{ covs[c] } };
        if (llt.info() != Eigen::Success) {
            throw invalid_argument{ fmt::format("covariance of component {} is not positive definite", c) };
        }
        const Eigen::MatrixXd l = llt.matrixL();
        double log_det = 0.0;
        for (Eigen::Index a = 0; a < d; ++a) {
            log_det += 2.0 * std::log(l(a, a));
        }
        terms.inv_chol[c] = l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
        const auto ci = static_cast<Eigen::Index>(c);
        terms.log_norm(ci) = std::log(weights(ci)) - 0.5 * (static_cast<double>(d) * log_two_pi + log_det);
    }
    return terms;
}

Matrix data_covariance(const Matrix &x, double reg) {
    const RowVector mean = x.colwise().mean();
    const Matrix centered = x.rowwise() - mean;
    Matrix cov = (centered.transpose() * centered) / static_cast<double>(x.rows());
    cov.diagonal().array() += reg;
    return cov;
}

struct EmRun {
    Vector weights;
    Matrix means;
    std::vector<Matrix> covs;
    kernels::GaussianTerms terms;
    std::vector<double> trace;
    std::vector<std::size_t> reseeds;
    bool converged{ false };
};

// k-means++ style seeding: first mean uniform, then each next mean drawn with probability proportional to the
// squared distance to the closest mean chosen so far.
Matrix seed_means(const Matrix &x, std::size_t c_count, std::mt19937_64 &rng) {
    const auto n = static_cast<std::size_t>(x.rows());
    Matrix means(static_cast<Eigen::Index>(c_count), x.cols());
    std::vector<double> closest(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit{ 0.0, 1.0 };
    std::size_t pick = std::uniform_int_distribution<std::size_t>{ 0, n - 1 }(rng);
    for (std::size_t c = 0; c < c_count; ++c) {
        means.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d2 = (x.row(static_cast<Eigen::Index>(i)) - means.row(static_cast<Eigen::Index>(c))).squaredNorm();
            closest[i] = std::min(closest[i], d2);
            total += closest[i];
        }
        if (c + 1 == c_count) {
            break;
        }
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += closest[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = std::uniform_int_distribution<std::size_t>{ 0, n - 1 }(rng);
        }
    }
    return means;
}

double total(const Vector &lse) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lse.size(); ++i) {
        s += lse(i);
    }
    return s;
}

// Weighted MLE with the diagonal regulariser. Returns true if any component had to be re-seeded.
bool m_step(const Matrix &x, const Matrix &resp, const Matrix &data_cov, double reg, EmRun &run) {
    using ColMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const Eigen::Index c_count = resp.cols();
    // one contiguous column per feature and one contiguous row per component
    const ColMatrix xc = x;
    const Matrix resp_t = resp.transpose();
    Vector mass(c_count);

    std::vector<char> empty(static_cast<std::size_t>(c_count), 0);
#pragma omp parallel
    {
        ColMatrix centered(n, d);
        ColMatrix weighted(n, d);
#pragma omp for schedule(dynamic)
        for (Eigen::Index c = 0; c < c_count; ++c) {
            const Eigen::Map<const Eigen::ArrayXd> r(resp_t.data() + c * n, n);
            const double m = r.sum();
            mass(c) = m;
            if (m < 1e-10) {
                empty[static_cast<std::size_t>(c)] = 1;
                continue;
            }
            RowVector mean(d);
            for (Eigen::Index a = 0; a < d; ++a) {
                mean(a) = (r * xc.col(a).array()).sum() / m;
                centered.col(a).array() = xc.col(a).array() - mean(a);
                weighted.col(a).array() = centered.col(a).array() * r;
            }
            Matrix cov(d, d);
            for (Eigen::Index a = 0; a < d; ++a) {
                for (Eigen::Index b = 0; b <= a; ++b) {
                    cov(a, b) = (weighted.col(a).array() * centered.col(b).array()).sum() / m;
                    cov(b, a) = cov(a, b);
                }
                cov(a, a) += reg;
            }
            run.means.row(c) = mean;
            run.covs[static_cast<std::size_t>(c)] = std::move(cov);
        }
    }
    run.weights = mass / static_cast<double>(n);

    bool reseeded = false;
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    for (Eigen::Index c = 0; c < c_count; ++c) {
        if (!empty[static_cast<std::size_t>(c)]) {
            continue;
        }
        // the point the current mixture explains worst: lowest maximum responsibility
        Eigen::Index worst = -1;
        double worst_val = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = resp.row(i).maxCoeff();
            if (!taken[static_cast<std::size_t>(i)] && m < worst_val) {
                worst_val = m;
                worst = i;
            }
        }
        if (worst < 0) {
            worst = 0;
        }
        taken[static_cast<std::size_t>(worst)] = 1;
        run.means.row(c) = x.row(worst);
        run.covs[static_cast<std::size_t>(c)] = data_cov;
        run.weights(c) = 1.0 / static_cast<double>(n);
        reseeded = true;
    }
    if (reseeded) {
        run.weights /= run.weights.sum();
    }
    return reseeded;
}

EmRun run_em(const Matrix &x, std::size_t c_count, const EmConfig &cfg, std::uint64_t seed, const Matrix &data_cov) {
    std::mt19937_64 rng{ seed };
    EmRun run;
    run.means = seed_means(x, c_count, rng);
    run.covs.assign(c_count, data_cov);
    run.weights = Vector::Constant(static_cast<Eigen::Index>(c_count), 1.0 / static_cast<double>(c_count));
    run.terms = make_terms(run.weights, run.means, run.covs);

    Matrix resp;
    double ll = total(kernels::gmm_e_step(x, run.terms, resp));
    run.trace.push_back(ll);
    for (int it = 0; it < cfg.max_iters; ++it) {
        const bool reseeded = m_step(x, resp, data_cov, cfg.reg_floor, run);
        run.terms = make_terms(run.weights, run.means, run.covs);
        const double next = total(kernels::gmm_e_step(x, run.terms, resp));
        run.trace.push_back(next);
        if (reseeded) {
            run.reseeds.push_back(run.trace.size() - 1);
        } else if (next - ll <= cfg.tol * std::abs(ll)) {
            run.converged = true;
            break;
        }
        ll = next;
    }
    return run;
}

}  // namespace

GmmModel::GmmModel(Vector weights, Matrix means, std::vector<Matrix> covariances) :
    weights_{ std::move(weights) },
    means_{ std::move(means) },
    covariances_{ std::move(covariances) } {
    if (weights_.size() == 0 || weights_.size() != means_.rows() || static_cast<std::size_t>(weights_.size()) != covariances_.size()) {
        throw invalid_argument{ "mixture weights, means and covariances must have one entry per component" };
    }
    if ((weights_.array() < 0.0).any() || std::abs(weights_.sum() - 1.0) > 1e-9) {
        throw invalid_argument{ "mixture weights must be non-negative and sum to one" };
    }
    for (const Matrix &cov : covariances_) {
        if (cov.rows() != means_.cols() || cov.cols() != means_.cols()) {
            throw invalid_argument{ "covariance shape does not match the mean dimension" };
        }
    }
    terms_ = make_terms(weights_, means_, covariances_);
}

void GmmModel::check_query(const Matrix &x) const {
    if (static_cast<std::size_t>(x.cols()) != dimension()) {
        throw invalid_argument{ fmt::format("query has {} dimensions, mixture has {}", x.cols(), dimension()) };
    }
    if (!x.allFinite()) {
        throw invalid_argument{ "query points must be finite" };
    }
}

Vector GmmModel::point_responsibilities(const Eigen::Ref<const RowVector> &x) const {
    const Matrix row = x;
    check_query(row);
    Matrix resp;
    kernels::serial::gmm_e_step(row, terms_, resp);
    return resp.row(0).transpose();
}

Matrix GmmModel::responsibilities(const Matrix &x) const {
    check_query(x);
    Matrix resp;
    kernels::gmm_e_step(x, terms_, resp);
    return resp;
}

double GmmModel::log_likelihood(const Matrix &x) const {
    check_query(x);
    Matrix resp;
    return total(kernels::gmm_e_step(x, terms_, resp));
}

std::vector<std::size_t> GmmModel::hard_assign(const Matrix &x) const {
    const Matrix resp = responsibilities(x);
    std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < resp.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index c = 1; c < resp.cols(); ++c) {
            if (resp(i, c) > resp(i, best)) {
                best = c;
            }
        }
        out[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
    }
    return out;
}

GmmModel fit_gmm(const Matrix &points, std::size_t components, const EmConfig &cfg) {
    cfg.validate();
    if (components < 1) {
        throw invalid_argument{ "a mixture needs at least one component" };
    }
    if (components > static_cast<std::size_t>(points.rows())) {
        throw invalid_argument{ fmt::format("{} components requested for {} points", components, points.rows()) };
    }
    if (!points.allFinite()) {
        throw invalid_argument{ "mixture input must be finite" };
    }

    const Matrix data_cov = data_covariance(points, cfg.reg_floor);
    EmRun best;
    bool have_best = false;
    for (int restart = 0; restart < cfg.n_init; ++restart) {
        EmRun run = run_em(points, components, cfg, derive_seed(cfg.seed, { static_cast<std::uint64_t>(restart) }), data_cov);
        if (!have_best || run.trace.back() > best.trace.back()) {
            best = std::move(run);
            have_best = true;
        }
    }
    if (!best.converged) {
        spdlog::debug("EM stopped after {} iterations without reaching tol {}", cfg.max_iters, cfg.tol);
    }

    GmmModel model;
    model.weights_ = std::move(best.weights);
    model.means_ = std::move(best.means);
    model.covariances_ = std::move(best.covs);
    model.terms_ = std::move(best.terms);
    model.converged_ = best.converged;
    model.final_log_likelihood_ = best.trace.back();
    model.trace_ = std::move(best.trace);
    model.reseed_steps_ = std::move(best.reseeds);
    return model;
}

}  // namespace imb
