#ifndef SURROKIT_NEURALNET_HPP
#define SURROKIT_NEURALNET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace surrokit::neuralnet {

struct MlpConfig {
    std::uint64_t seed = 0;
    int restarts = 5;
    int epochs = 2000;
    int batch_size = 32;
    double learning_rate = 1e-2;
    double momentum = 0.9;
    double holdout_fraction = 0.2; // restart-selection split
};

// Per-dimension affine standardization (x - mean) / scale.
struct InputScaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        return (x - mean).cwiseQuotient(scale);
    }
};

// Raw network in standardized coordinates; exposed so gradients can be
// checked against finite differences.
struct Net {
    Eigen::MatrixXd W1; // hidden_width x d
    Eigen::VectorXd b1; // hidden_width
    Eigen::VectorXd w2; // hidden_width
    double b2 = 0.0;

    double forward(const Eigen::VectorXd& xs) const;
};

struct NetGrad {
    Eigen::MatrixXd W1;
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;
    double b2 = 0.0;
};

// Mean squared error over the given rows and its gradient by backprop.
double loss_and_grad(const Net& net, const Eigen::MatrixXd& Xs, const Eigen::VectorXd& ys,
                     const std::vector<int>& rows, NetGrad& grad);

struct MlpModel {
    int hidden_width = 0;
    Net net;
    InputScaler in_scaler;
    double out_mean = 0.0;
    double out_scale = 1.0;
    // Selection traces, kept for reproducibility.
    std::vector<double> restart_scores;     // held-out RMSE per restart (output units)
    std::vector<int> widths_tried;
    std::vector<double> width_scores;       // learning-base RMSE per width

    double forward(const Eigen::VectorXd& x) const;
};

// Back-propagation training with momentum; `restarts` random
// initializations scored on a seeded holdout split, best one kept.
// Restarts that diverge (non-finite loss) are discarded.
MlpModel train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int hidden_width,
               const MlpConfig& cfg = {});

// Trains one model per width and keeps the one with the smallest RMSE on
// the full learning base; ties go to the smaller width.
MlpModel select_width(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<int>& widths, const MlpConfig& cfg = {});

} // namespace surrokit::neuralnet

#endif
