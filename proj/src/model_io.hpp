#ifndef SURROKIT_MODEL_IO_HPP
#define SURROKIT_MODEL_IO_HPP

#include "diagnostics.hpp"
#include "kernelreg.hpp"
#include "kriging.hpp"
#include "learning_base.hpp"
#include "neuralnet.hpp"

#include <string>
#include <variant>
#include <vector>

namespace surrokit::model {

enum class Method { kriging, kernel, mlp };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct PredictOut {
    double mean = 0.0;
    // Kriging: predictive sd at x; kernel/MLP: the learning-base RMSE
    // estimate, matching the classifier convention.
    double sd = 0.0;
    bool extrapolated = false;
};

// A fitted metamodel plus the physical-to-normalized input map it was
// trained under. Serialization stores only data and parameters; anything
// derived (factorizations, weights, error estimates) is rebuilt on load.
struct FittedModel {
    Method method = Method::kriging;
    std::vector<std::string> names;
    Eigen::VectorXd lo, hi;
    std::variant<kriging::KrigingModel, kernelreg::KernelModel, neuralnet::MlpModel> impl;

    // Training data kept at wrapper level for the MLP (kriging/kernel
    // models already carry theirs).
    Eigen::MatrixXd train_X_;
    Eigen::VectorXd train_y_;

    // Learning-base error estimates (LOO for kriging/kernel, in-sample
    // for MLP); derived, not serialized.
    double rmse_hat = 0.0;
    double q2_hat = 0.0;
    double sd_learn = 0.0;

    int train_size() const;
    int dim() const { return static_cast<int>(lo.size()); }

    Eigen::VectorXd normalize_point(const Eigen::VectorXd& x_physical) const;
    PredictOut predict(const Eigen::VectorXd& x_physical) const;

    const Eigen::VectorXd& train_outputs() const;

    // Signed prediction-minus-observed learning-base errors used for
    // outlier ranking, plus the per-point denominators (kriging only).
    Eigen::VectorXd learning_errors() const;
    Eigen::VectorXd learning_error_sds() const; // kriging only

    std::string summary() const;
};

FittedModel fit_kriging(const LearningBase& base, const kriging::KrigingConfig& cfg = {});
FittedModel fit_kernel(const LearningBase& base, const kernelreg::KernelConfig& cfg = {});
FittedModel fit_mlp(const LearningBase& base, const std::vector<int>& widths,
                    const neuralnet::MlpConfig& cfg = {});

// Full diagnostics of a model against a held-out base: RMSE, Q2, error
// quantiles, CIR (kriging only) plus the model's learning-base estimates.
diagnostics::DiagnosticsReport diagnose_model(const FittedModel& model,
                                              const LearningBase& test);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

} // namespace surrokit::model

#endif
