#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "biteweight/error.hpp"
#include "biteweight/regression.hpp"

namespace biteweight::regression {

namespace {

constexpr double kTau = 1e-12;

// Dual of the epsilon-SVR in the 2n-variable form used by SMO solvers:
//   min 0.5 a'Qa + p'a   s.t.  s'a = 0,  0 <= a <= C
// with a = [alpha; alpha*], s = [+1; -1], p = [eps - y; eps + y] and
// Q_tu = s_t s_u K(t mod n, u mod n).
class SmoSolver {
public:
    SmoSolver(const Matrix& x, const Vector& y, double c, double eps)
        : n_(x.rows()), c_(c), kernel_(x * x.transpose()), alpha_(Vector::Zero(2 * n_)), p_(2 * n_) {
        for (Eigen::Index i = 0; i < n_; ++i) {
            p_(i) = eps - y(i);
            p_(i + n_) = eps + y(i);
        }
        grad_ = p_;
    }

    /// Runs SMO iterations until the maximal KKT violation drops below `tol`
    /// or `budget` iterations are spent. Returns the iterations used.
    long long run(double tol, long long budget) {
        long long it = 0;
        while (it < budget) {
            Eigen::Index i = -1, j = -1;
            if (select_pair(tol, i, j)) break;
            update(i, j);
            ++it;
        }
        return it;
    }

    void refresh_gradient() {
        const Vector beta = coefficients();
        const Vector kb = kernel_ * beta;
        for (Eigen::Index t = 0; t < 2 * n_; ++t) grad_(t) = sign(t) * kb(t % n_) + p_(t);
    }

    Vector coefficients() const { return alpha_.head(n_) - alpha_.tail(n_); }

    /// Dual objective in maximization form.
    double dual_objective() const {
        const Vector beta = coefficients();
        return -(0.5 * beta.dot(kernel_ * beta) + p_.dot(alpha_));
    }

private:
    double sign(Eigen::Index t) const { return t < n_ ? 1.0 : -1.0; }
    double k(Eigen::Index t, Eigen::Index u) const { return kernel_(t % n_, u % n_); }
    double q(Eigen::Index t, Eigen::Index u) const { return sign(t) * sign(u) * k(t, u); }
    bool up(Eigen::Index t) const { return sign(t) > 0 ? alpha_(t) < c_ : alpha_(t) > 0.0; }
    bool low(Eigen::Index t) const { return sign(t) > 0 ? alpha_(t) > 0.0 : alpha_(t) < c_; }

    // Returns true when the KKT conditions hold within `tol`.
    bool select_pair(double tol, Eigen::Index& out_i, Eigen::Index& out_j) const {
        const Eigen::Index l = 2 * n_;
        double gmax = -std::numeric_limits<double>::infinity();
        Eigen::Index i = -1;
        for (Eigen::Index t = 0; t < l; ++t) {
            if (up(t) && -sign(t) * grad_(t) >= gmax) {
                gmax = -sign(t) * grad_(t);
                i = t;
            }
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index j = -1;
        for (Eigen::Index t = 0; t < l; ++t) {
            if (!low(t)) continue;
            const double sg = sign(t) * grad_(t);
            gmax2 = std::max(gmax2, sg);
            const double diff = gmax + sg;
            if (i >= 0 && diff > 0.0) {
                double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
                if (quad <= 0.0) quad = kTau;
                const double obj = -(diff * diff) / quad;
                if (obj <= best) {
                    best = obj;
                    j = t;
                }
            }
        }
        if (gmax + gmax2 < tol || i < 0 || j < 0) return true;
        out_i = i;
        out_j = j;
        return false;
    }

    void update(Eigen::Index i, Eigen::Index j) {
        const double old_i = alpha_(i);
        const double old_j = alpha_(j);
        double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (quad <= 0.0) quad = kTau;
        double& ai = alpha_(i);
        double& aj = alpha_(j);
        if (sign(i) != sign(j)) {
            const double delta = (-grad_(i) - grad_(j)) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = -diff; }
            }
            if (diff > 0.0) {
                if (ai > c_) { ai = c_; aj = c_ - diff; }
            } else {
                if (aj > c_) { aj = c_; ai = c_ + diff; }
            }
        } else {
            const double delta = (grad_(i) - grad_(j)) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c_) {
                if (ai > c_) { ai = c_; aj = sum - c_; }
            } else {
                if (aj < 0.0) { aj = 0.0; ai = sum; }
            }
            if (sum > c_) {
                if (aj > c_) { aj = c_; ai = sum - c_; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = sum; }
            }
        }
        const double di = ai - old_i;
        const double dj = aj - old_j;
        for (Eigen::Index t = 0; t < 2 * n_; ++t) grad_(t) += q(i, t) * di + q(j, t) * dj;
    }

    Eigen::Index n_;
    double c_;
    Matrix kernel_;
    Vector alpha_;
    Vector p_;
    Vector grad_;
};

}  // namespace

double svr_primal_objective(const Matrix& x, const Vector& y, const Vector& w, double b, double c, double eps) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double r = y(i) - x.row(i).dot(w) - b;
        loss += std::max(0.0, std::abs(r) - eps);
    }
    return 0.5 * w.squaredNorm() + c * loss;
}

double optimal_bias(const Vector& residuals, double eps) {
    const Eigen::Index n = residuals.size();
    if (n == 0) return 0.0;
    std::vector<double> breakpoints;
    breakpoints.reserve(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        breakpoints.push_back(residuals(i) - eps);
        breakpoints.push_back(residuals(i) + eps);
    }
    std::sort(breakpoints.begin(), breakpoints.end());

    auto loss = [&](double b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::max(0.0, std::abs(residuals(i) - b) - eps);
        return s;
    };
    // The loss is convex and piecewise linear, so its minimizers form an
    // interval whose ends are breakpoints.
    std::vector<double> values(breakpoints.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        values[k] = loss(breakpoints[k]);
        best = std::min(best, values[k]);
    }
    const double slack = 1e-12 * std::max(1.0, best);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        if (values[k] <= best + slack) {
            lo = std::min(lo, breakpoints[k]);
            hi = std::max(hi, breakpoints[k]);
        }
    }
    return 0.5 * (lo + hi);
}

SvrSolution solve_linear_svr(const Matrix& x, const Vector& y, const SvrParams& params) {
    if (x.rows() < 2) throw Error(ErrorCode::EmptyTraining, "SVR needs at least 2 rows");
    if (x.rows() != y.size()) throw Error(ErrorCode::InvalidParams, "row count does not match target count");
    if (!x.allFinite() || !y.allFinite()) throw Error(ErrorCode::InvalidParams, "non-finite training data");
    if (!(params.c > 0.0) || !(params.epsilon >= 0.0)) throw Error(ErrorCode::InvalidParams, "C must be > 0, eps >= 0");

    SmoSolver smo(x, y, params.c, params.epsilon);
    const long long budget = static_cast<long long>(params.max_passes) * 2 * x.rows();

    SvrSolution sol;
    double tol = 1e-10;  // starting KKT tolerance
    while (true) {
        sol.iterations += smo.run(tol, budget - sol.iterations);
        smo.refresh_gradient();

        sol.beta = smo.coefficients();
        sol.w = x.transpose() * sol.beta;
        const Vector residuals = y - x * sol.w;
        sol.b = optimal_bias(residuals, params.epsilon);
        sol.primal = svr_primal_objective(x, y, sol.w, sol.b, params.c, params.epsilon);
        sol.dual = smo.dual_objective();
        sol.gap = std::max(0.0, sol.primal - sol.dual);
        if (sol.gap <= params.gap_tolerance) return sol;
        if (sol.iterations >= budget || tol < 1e-15) {
            throw Error(ErrorCode::NotConverged, "duality gap " + std::to_string(sol.gap) + " after " +
                                                     std::to_string(sol.iterations) + " iterations");
        }
        tol *= 0.1;
    }
}

SvrModel train_svr(const Matrix& x, const Vector& y, const SvrParams& params) {
    SvrModel model;
    model.scaler = fit_scaler(x);
    const auto sol = solve_linear_svr(apply_scaler(model.scaler, x), y, params);
    model.w = sol.w;
    model.b = sol.b;
    model.c = params.c;
    model.epsilon = params.epsilon;
    model.gap = sol.gap;
    return model;
}

double predict_svr(const SvrModel& model, const Vector& x) {
    return model.w.dot(apply_scaler(model.scaler, x)) + model.b;
}

Vector predict_svr(const SvrModel& model, const Matrix& x) {
    Vector out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) = predict_svr(model, Vector(x.row(r).transpose()));
    return out;
}

}  // namespace biteweight::regression
