#include <cmath>

#include "biteweight/error.hpp"
#include "biteweight/regression.hpp"

namespace biteweight::regression {

ScalerParams fit_scaler(const Matrix& x) {
    if (x.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "cannot fit a scaler on zero rows");
    ScalerParams p;
    p.means.resize(x.cols());
    p.stds.resize(x.cols());
    const auto n = static_cast<double>(x.rows());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double m = x.col(c).sum() / n;
        p.means(c) = m;
        p.stds(c) = std::sqrt((x.col(c).array() - m).square().sum() / n);
    }
    return p;
}

Matrix apply_scaler(const ScalerParams& params, const Matrix& x) {
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out.row(r) = apply_scaler(params, Vector(x.row(r).transpose())).transpose();
    return out;
}

Vector apply_scaler(const ScalerParams& params, const Vector& x) {
    if (x.size() != params.means.size()) throw Error(ErrorCode::InvalidParams, "feature count mismatch");
    Vector out(x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        const double s = params.stds(c) <= kDegenerateStd ? 1.0 : params.stds(c);
        out(c) = (x(c) - params.means(c)) / s;
    }
    return out;
}

}  // namespace biteweight::regression
