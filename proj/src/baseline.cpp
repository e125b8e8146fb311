#include "biteweight/error.hpp"
#include "biteweight/regression.hpp"

namespace biteweight::regression {

BaselinePredictor fit_baseline(const Vector& y) {
    if (y.size() == 0) throw Error(ErrorCode::EmptyTraining, "baseline needs at least one training weight");
    return {y.sum() / static_cast<double>(y.size())};
}

}  // namespace biteweight::regression
