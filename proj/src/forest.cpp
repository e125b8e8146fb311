#include <algorithm>
#include <numeric>
#include <random>

#include "biteweight/error.hpp"
#include "biteweight/regression.hpp"

namespace biteweight::regression {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double sse = 0.0;  // summed squared error of both children
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const Vector& y, int features_per_split, std::mt19937_64& rng)
        : x_(x), y_(y), mtry_(features_per_split), rng_(rng) {}

    RegressionTree build(std::vector<Eigen::Index> rows) {
        tree_.nodes.clear();
        grow(std::move(rows));
        return std::move(tree_);
    }

private:
    int grow(std::vector<Eigen::Index> rows) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        double sum = 0.0;
        bool constant = true;
        for (auto r : rows) {
            sum += y_(r);
            constant = constant && y_(r) == y_(rows.front());
        }
        tree_.nodes[id].value = constant ? y_(rows.front()) : sum / static_cast<double>(rows.size());
        if (rows.size() <= 1 || constant) return id;

        const Split split = best_split(rows);
        if (split.feature < 0) return id;

        std::vector<Eigen::Index> left, right;
        for (auto r : rows) (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        tree_.nodes[id].feature = split.feature;
        tree_.nodes[id].threshold = split.threshold;
        const int l = grow(std::move(left));
        const int r = grow(std::move(right));
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    // Tries a random subset of mtry features; when none of them separates the
    // node, the remaining features are tried in the same random order.
    Split best_split(const std::vector<Eigen::Index>& rows) {
        std::vector<int> order(static_cast<std::size_t>(x_.cols()));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);

        Split best;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k >= static_cast<std::size_t>(mtry_) && best.feature >= 0) break;
            evaluate_feature(rows, order[k], best);
        }
        return best;
    }

    void evaluate_feature(const std::vector<Eigen::Index>& rows, int feature, Split& best) const {
        std::vector<Eigen::Index> sorted = rows;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return x_(a, feature) < x_(b, feature); });
        const std::size_t n = sorted.size();
        double total = 0.0, total_sq = 0.0;
        for (auto r : sorted) {
            total += y_(r);
            total_sq += y_(r) * y_(r);
        }
        double left = 0.0, left_sq = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double v = y_(sorted[k]);
            left += v;
            left_sq += v * v;
            const double xa = x_(sorted[k], feature);
            const double xb = x_(sorted[k + 1], feature);
            if (!(xb > xa)) continue;
            const double nl = static_cast<double>(k + 1);
            const double nr = static_cast<double>(n - k - 1);
            const double right = total - left;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left * left / nl) + (right_sq - right * right / nr);
            if (best.feature < 0 || sse < best.sse) {
                best.feature = feature;
                best.threshold = xa + 0.5 * (xb - xa);
                if (!(best.threshold < xb)) best.threshold = xa;
                best.sse = sse;
            }
        }
    }

    const Matrix& x_;
    const Vector& y_;
    int mtry_;
    std::mt19937_64& rng_;
    RegressionTree tree_;
};

}  // namespace

ForestModel fit_forest(const Matrix& x, const Vector& y, const ForestParams& params) {
    if (x.rows() < 1 || x.rows() != y.size()) throw Error(ErrorCode::EmptyTraining, "forest needs training rows");
    if (params.trees < 1) throw Error(ErrorCode::InvalidParams, "forest needs at least one tree");

    ForestModel model;
    model.seed = params.seed;
    model.n_features = static_cast<int>(x.cols());
    const int d = static_cast<int>(x.cols());
    const int mtry = params.features_per_split > 0 ? std::min(params.features_per_split, d) : std::max(1, (d + 2) / 3);
    const auto n = static_cast<std::size_t>(x.rows());

    for (int t = 0; t < params.trees; ++t) {
        std::seed_seq seq{static_cast<std::uint32_t>(params.seed), static_cast<std::uint32_t>(params.seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::vector<Eigen::Index> rows(n);
        if (params.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& r : rows) r = static_cast<Eigen::Index>(pick(rng));
        } else {
            std::iota(rows.begin(), rows.end(), Eigen::Index{0});
        }
        TreeBuilder builder(x, y, mtry, rng);
        model.trees.push_back(builder.build(std::move(rows)));
    }
    return model;
}

double predict_tree(const RegressionTree& tree, const Vector& x) {
    int node = 0;
    while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = x(nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].value;
}

double predict_forest(const ForestModel& model, const Vector& x) {
    if (x.size() != model.n_features) throw Error(ErrorCode::InvalidParams, "feature count mismatch");
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += predict_tree(tree, x);
    return sum / static_cast<double>(model.trees.size());
}

Vector predict_forest(const ForestModel& model, const Matrix& x) {
    Vector out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) = predict_forest(model, Vector(x.row(r).transpose()));
    return out;
}

}  // namespace biteweight::regression
