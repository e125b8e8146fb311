#pragma once

// Reference implementations used only by tests. Each one is written
// differently from the library code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Linear interpolation by binary search for the bracketing pair.
inline double interpolate(const std::vector<double>& t, const std::vector<double>& v, double at) {
    if (at <= t.front()) return v.front();
    if (at >= t.back()) return v.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), at) - t.begin());
    const std::size_t lo = hi - 1;
    const double a = (at - t[lo]) / (t[hi] - t[lo]);
    return v[lo] + a * (v[hi] - v[lo]);
}

/// Median by full sort of a centered window that shrinks at the edges.
inline std::vector<double> median(const std::vector<double>& x, int order) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(x.size());
    for (int i = 0; i < n; ++i) {
        const int half = std::min({order / 2, i, n - 1 - i});
        std::vector<double> w(x.begin() + (i - half), x.begin() + (i + half + 1));
        std::sort(w.begin(), w.end());
        out[static_cast<std::size_t>(i)] = w[w.size() / 2];
    }
    return out;
}

/// Welford streaming mean and population variance.
struct Streaming {
    long double n = 0, mean = 0, m2 = 0;
    void push(double x) {
        n += 1;
        const long double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double variance() const { return n > 0 ? static_cast<double>(m2 / n) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
};

/// g1 from raw power sums in long double.
inline double skewness(const std::vector<double>& x) {
    long double s1 = 0, s2 = 0, s3 = 0;
    const long double n = static_cast<long double>(x.size());
    for (double v : x) {
        s1 += v;
        s2 += static_cast<long double>(v) * v;
        s3 += static_cast<long double>(v) * v * v;
    }
    const long double mu = s1 / n;
    const long double m2 = s2 / n - mu * mu;
    const long double m3 = s3 / n - 3 * mu * s2 / n + 2 * mu * mu * mu;
    if (m2 <= 1e-12L) return 0.0;
    return static_cast<double>(m3 / std::pow(m2, 1.5L));
}

inline double svr_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b,
                            double c, double eps) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        loss += std::max(0.0, std::abs(y(i) - x.row(i).dot(w) - b) - eps);
    }
    return 0.5 * w.squaredNorm() + c * loss;
}

struct GridResult {
    Eigen::VectorXd w;
    double b = 0.0;
    double objective = std::numeric_limits<double>::infinity();
};

/// Zooming grid search over (w, b) of the primal. Returns an upper bound on
/// the true minimum that tightens with every zoom level.
inline GridResult svr_grid(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double c, double eps,
                           double radius = 4.0, int points = 21, int zooms = 30) {
    const auto d = x.cols();
    const int dims = static_cast<int>(d) + 1;
    std::vector<double> center(static_cast<std::size_t>(dims), 0.0);
    center.back() = y.mean();
    GridResult best;
    double r = radius;
    for (int z = 0; z < zooms; ++z) {
        std::vector<int> idx(static_cast<std::size_t>(dims), 0);
        std::vector<double> best_point = center;
        while (true) {
            Eigen::VectorXd w(d);
            for (Eigen::Index k = 0; k < d; ++k) {
                w(k) = center[static_cast<std::size_t>(k)] + r * (2.0 * idx[static_cast<std::size_t>(k)] / (points - 1) - 1.0);
            }
            const double b = center.back() + r * (2.0 * idx.back() / (points - 1) - 1.0);
            const double obj = svr_objective(x, y, w, b, c, eps);
            if (obj < best.objective) {
                best.objective = obj;
                best.w = w;
                best.b = b;
                for (Eigen::Index k = 0; k < d; ++k) best_point[static_cast<std::size_t>(k)] = w(k);
                best_point.back() = b;
            }
            int k = 0;
            while (k < dims && ++idx[static_cast<std::size_t>(k)] == points) idx[static_cast<std::size_t>(k++)] = 0;
            if (k == dims) break;
        }
        center = best_point;
        r *= 0.5;
    }
    return best;
}

/// Best single split of one feature by enumerating every cut between
/// consecutive distinct sorted values.
struct Split {
    double threshold = 0.0;
    double left_mean = 0.0;
    double right_mean = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

inline Split best_split(std::vector<double> x, std::vector<double> y) {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    Split best;
    for (std::size_t cut = 1; cut < order.size(); ++cut) {
        if (x[order[cut - 1]] == x[order[cut]]) continue;
        double ls = 0, rs = 0;
        for (std::size_t i = 0; i < cut; ++i) ls += y[order[i]];
        for (std::size_t i = cut; i < order.size(); ++i) rs += y[order[i]];
        const double lm = ls / static_cast<double>(cut);
        const double rm = rs / static_cast<double>(order.size() - cut);
        double sse = 0;
        for (std::size_t i = 0; i < cut; ++i) sse += (y[order[i]] - lm) * (y[order[i]] - lm);
        for (std::size_t i = cut; i < order.size(); ++i) sse += (y[order[i]] - rm) * (y[order[i]] - rm);
        if (sse < best.sse) best = {0.5 * (x[order[cut - 1]] + x[order[cut]]), lm, rm, sse};
    }
    return best;
}

/// Intersection by membership counting.
inline std::set<std::string> intersect(const std::map<std::string, std::set<std::string>>& sets) {
    std::map<std::string, std::size_t> count;
    for (const auto& [tag, s] : sets) {
        for (const auto& k : s) count[k]++;
    }
    std::set<std::string> out;
    for (const auto& [k, n] : count) {
        if (n == sets.size()) out.insert(k);
    }
    return out;
}

}  // namespace oracle
