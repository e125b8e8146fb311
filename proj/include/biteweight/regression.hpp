#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "biteweight/config.hpp"

namespace biteweight::regression {

using Matrix = Eigen::MatrixXd;  // one row per bite
using Vector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// z-score standardization

struct ScalerParams {
    Vector means;
    Vector stds;  // population standard deviation
};

inline constexpr double kDegenerateStd = 1e-12;

ScalerParams fit_scaler(const Matrix& x);
/// (x - mean) / std per column; columns with std <= 1e-12 are only centered.
Matrix apply_scaler(const ScalerParams& params, const Matrix& x);
Vector apply_scaler(const ScalerParams& params, const Vector& x);

// ---------------------------------------------------------------------------
// Linear epsilon-insensitive support vector regression

/// 0.5 * |w|^2 + C * sum_i max(0, |y_i - w.x_i - b| - eps)
double svr_primal_objective(const Matrix& x, const Vector& y, const Vector& w, double b, double c, double eps);

struct SvrSolution {
    Vector w;
    double b = 0.0;
    Vector beta;  // dual coefficients alpha_i - alpha_i^*, in [-C, C], summing to 0
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    long long iterations = 0;
};

/// Solves the training problem on an already standardized matrix with a
/// deterministic SMO over the dual (maximal-violating pair, second-order
/// selection). The bias is the midpoint of the interval of minimizers of the
/// primal for the final w. Throws NotConverged if the duality gap is still
/// above params.gap_tolerance after params.max_passes passes.
SvrSolution solve_linear_svr(const Matrix& x, const Vector& y, const SvrParams& params = {});

/// Bias minimizing sum_i max(0, |r_i - b| - eps); midpoint of the minimizer
/// interval when it is not unique.
double optimal_bias(const Vector& residuals, double eps);

struct SvrModel {
    Vector w;
    double b = 0.0;
    double c = 1.01;
    double epsilon = 0.016;
    ScalerParams scaler;
    double gap = 0.0;
};

/// Standardizes `x`, solves, and keeps the scaler in the model.
SvrModel train_svr(const Matrix& x, const Vector& y, const SvrParams& params = {});
/// w . standardize(x) + b, unclamped.
double predict_svr(const SvrModel& model, const Vector& x);
Vector predict_svr(const SvrModel& model, const Matrix& x);

// ---------------------------------------------------------------------------
// Mean predictor

struct BaselinePredictor {
    double mean_weight_g = 0.0;
};

BaselinePredictor fit_baseline(const Vector& y);
inline double predict_baseline(const BaselinePredictor& model) { return model.mean_weight_g; }

// ---------------------------------------------------------------------------
// Random forest regressor

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // mean training target of the node
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
    std::vector<RegressionTree> trees;
    std::uint64_t seed = 0;
    int n_features = 0;
};

/// Each tree sees a same-size bootstrap resample (unless disabled) drawn from
/// an RNG seeded by (seed, tree index). Splits maximize variance reduction
/// over ceil(d/3) randomly chosen features; nodes split until they hold one
/// sample or have zero target variance.
ForestModel fit_forest(const Matrix& x, const Vector& y, const ForestParams& params = {});
double predict_tree(const RegressionTree& tree, const Vector& x);
double predict_forest(const ForestModel& model, const Vector& x);
Vector predict_forest(const ForestModel& model, const Matrix& x);

}  // namespace biteweight::regression
