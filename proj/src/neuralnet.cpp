#include "neuralnet.hpp"

#include "errors.hpp"
#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

namespace surrokit::neuralnet {

namespace {

double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * stats::hash_to_unit(rng());
}

Net random_net(int width, int d, std::mt19937_64& rng) {
    Net net;
    net.W1.resize(width, d);
    net.b1.resize(width);
    net.w2.resize(width);
    const double r1 = 1.0 / std::sqrt(static_cast<double>(d));
    const double r2 = 1.0 / std::sqrt(static_cast<double>(width));
    for (int i = 0; i < width; ++i) {
        for (int j = 0; j < d; ++j) net.W1(i, j) = uniform(rng, -r1, r1);
        net.b1[i] = uniform(rng, -r1, r1);
        net.w2[i] = uniform(rng, -r2, r2);
    }
    net.b2 = 0.0;
    return net;
}

double rmse_rows(const Net& net, const Eigen::MatrixXd& Xs, const Eigen::VectorXd& ys,
                 const std::vector<int>& rows) {
    double s = 0.0;
    for (int i : rows) {
        const double e = net.forward(Xs.row(i)) - ys[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(rows.size()));
}

} // namespace

double Net::forward(const Eigen::VectorXd& xs) const {
    return w2.dot((W1 * xs + b1).array().tanh().matrix()) + b2;
}

double MlpModel::forward(const Eigen::VectorXd& x) const {
    return net.forward(in_scaler.apply(x)) * out_scale + out_mean;
}

double loss_and_grad(const Net& net, const Eigen::MatrixXd& Xs, const Eigen::VectorXd& ys,
                     const std::vector<int>& rows, NetGrad& grad) {
    const int width = static_cast<int>(net.w2.size());
    grad.W1.setZero(width, Xs.cols());
    grad.b1.setZero(width);
    grad.w2.setZero(width);
    grad.b2 = 0.0;

    double loss = 0.0;
    const double inv_m = 1.0 / static_cast<double>(rows.size());
    for (int i : rows) {
        const Eigen::VectorXd xs = Xs.row(i);
        const Eigen::VectorXd h = (net.W1 * xs + net.b1).array().tanh();
        const double pred = net.w2.dot(h) + net.b2;
        const double e = pred - ys[i];
        loss += 0.5 * e * e * inv_m;

        const double de = e * inv_m;
        grad.w2 += de * h;
        grad.b2 += de;
        const Eigen::VectorXd dh =
            (de * net.w2.array() * (1.0 - h.array().square())).matrix();
        grad.W1 += dh * xs.transpose();
        grad.b1 += dh;
    }
    return loss;
}

MlpModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int hidden_width,
               const MlpConfig& cfg) {
    const int n = static_cast<int>(X.rows());
    const int d = static_cast<int>(X.cols());
    if (hidden_width < 1) throw input_error("mlp train: hidden width must be positive");
    if (n < hidden_width) throw input_error("mlp train: fewer samples than hidden units");
    if (y.size() != n) throw input_error("mlp train: X/y size mismatch");

    MlpModel model;
    model.hidden_width = hidden_width;
    model.in_scaler.mean = X.colwise().mean();
    model.in_scaler.scale.resize(d);
    for (int j = 0; j < d; ++j) {
        const double sd = stats::stddev(X.col(j));
        model.in_scaler.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    model.out_mean = y.mean();
    const double ysd = stats::stddev(y);
    model.out_scale = ysd > 0.0 ? ysd : 1.0;

    Eigen::MatrixXd Xs(n, d);
    for (int i = 0; i < n; ++i)
        Xs.row(i) = model.in_scaler.apply(X.row(i));
    const Eigen::VectorXd ys = (y.array() - model.out_mean) / model.out_scale;

    // One seeded holdout split shared by all restarts.
    std::mt19937_64 split_rng(stats::splitmix64(cfg.seed ^ 0x8e1f0c4d2b3a5968ULL));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), split_rng);
    int n_hold = static_cast<int>(std::round(cfg.holdout_fraction * n));
    n_hold = std::clamp(n_hold, 0, n - 1);
    std::vector<int> hold(perm.begin(), perm.begin() + n_hold);
    std::vector<int> tr(perm.begin() + n_hold, perm.end());
    const std::vector<int>& score_rows = hold.empty() ? tr : hold;

    const int batch = std::clamp(cfg.batch_size, 1, static_cast<int>(tr.size()));

    // One restart = one independent seeded training run; restarts share
    // nothing mutable and run concurrently. NaN marks divergence.
    auto run_restart = [&](int r) -> std::pair<double, Net> {
        std::mt19937_64 rng(stats::splitmix64(cfg.seed + 0x9e3779b97f4a7c15ULL * (r + 1)));
        Net net = random_net(hidden_width, d, rng);
        NetGrad g, vel;
        vel.W1.setZero(hidden_width, d);
        vel.b1.setZero(hidden_width);
        vel.w2.setZero(hidden_width);
        vel.b2 = 0.0;

        std::vector<int> order = tr;
        std::vector<int> mini;
        double restart_best = std::numeric_limits<double>::infinity();
        Net restart_net = net;

        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t off = 0; off < order.size(); off += batch) {
                mini.assign(order.begin() + off,
                            order.begin() + std::min(order.size(), off + batch));
                const double loss = loss_and_grad(net, Xs, ys, mini, g);
                if (!std::isfinite(loss))
                    return {std::numeric_limits<double>::quiet_NaN(), net};
                vel.W1 = cfg.momentum * vel.W1 - cfg.learning_rate * g.W1;
                vel.b1 = cfg.momentum * vel.b1 - cfg.learning_rate * g.b1;
                vel.w2 = cfg.momentum * vel.w2 - cfg.learning_rate * g.w2;
                vel.b2 = cfg.momentum * vel.b2 - cfg.learning_rate * g.b2;
                net.W1 += vel.W1;
                net.b1 += vel.b1;
                net.w2 += vel.w2;
                net.b2 += vel.b2;
            }
            // Early-stopping snapshot on the scoring rows.
            if (epoch % 20 == 19 || epoch == cfg.epochs - 1) {
                const double s = rmse_rows(net, Xs, ys, score_rows);
                if (std::isfinite(s) && s < restart_best) {
                    restart_best = s;
                    restart_net = net;
                }
            }
        }
        if (!std::isfinite(restart_best))
            return {std::numeric_limits<double>::quiet_NaN(), net};
        return {restart_best, restart_net};
    };

    const int restarts = std::max(1, cfg.restarts);
    std::vector<std::future<std::pair<double, Net>>> tasks;
    tasks.reserve(restarts);
    for (int r = 0; r < restarts; ++r)
        tasks.push_back(std::async(std::launch::async, run_restart, r));

    double best_score = std::numeric_limits<double>::infinity();
    Net best_net;
    bool any_ok = false;
    for (auto& task : tasks) {
        auto [score, net] = task.get();
        if (std::isnan(score)) {
            model.restart_scores.push_back(score);
            continue;
        }
        any_ok = true;
        model.restart_scores.push_back(score * model.out_scale);
        if (score < best_score) {
            best_score = score;
            best_net = std::move(net);
        }
    }
    if (!any_ok) throw numeric_error("mlp train: every restart diverged");
    model.net = best_net;
    return model;
}

MlpModel select_width(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<int>& widths, const MlpConfig& cfg) {
    if (widths.empty()) throw input_error("mlp select_width: empty width list");
    MlpModel best;
    double best_rmse = std::numeric_limits<double>::infinity();
    std::vector<int> tried;
    std::vector<double> scores;
    for (int w : widths) {
        MlpModel m = train(X, y, w, cfg);
        double s = 0.0;
        for (int i = 0; i < X.rows(); ++i) {
            const double e = m.forward(X.row(i)) - y[i];
            s += e * e;
        }
        const double rmse = std::sqrt(s / static_cast<double>(X.rows()));
        tried.push_back(w);
        scores.push_back(rmse);
        if (rmse < best_rmse || (rmse == best_rmse && w < best.hidden_width)) {
            best_rmse = rmse;
            best = std::move(m);
        }
    }
    best.widths_tried = tried;
    best.width_scores = scores;
    return best;
}

} // namespace surrokit::neuralnet
