#pragma once

// Limited-memory quasi-Newton minimizer (two-loop recursion) with an Armijo
// backtracking line search. Works on flat coefficient vectors; the caller
// supplies a fused value-and-gradient callback.

#include <cmath>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace plates {

struct LbfgsOptions {
    double gtol = 1e-9;        // stop when the gradient sup-norm drops below this
    int max_iters = 5000;
    int memory = 10;           // stored curvature pairs
    double armijo_c1 = 1e-4;
    int max_backtracks = 60;
};

enum class LbfgsStatus { Converged, MaxIterations, Stalled };

inline std::string to_string(LbfgsStatus s) {
    switch (s) {
        case LbfgsStatus::Converged: return "converged";
        case LbfgsStatus::MaxIterations: return "max_iterations";
        case LbfgsStatus::Stalled: return "stalled";
    }
    return "unknown";
}

struct LbfgsReport {
    LbfgsStatus status = LbfgsStatus::MaxIterations;
    int iterations = 0;
    double value = 0.0;
    double grad_sup = 0.0;
    std::vector<double> history;  // accepted objective values, start included
};

// fg(x, grad_out) -> objective value; grad_out is resized by the caller.
using ValueGradFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

inline LbfgsReport lbfgs_minimize(const ValueGradFn& fg, std::vector<double>& x,
                                  const LbfgsOptions& opt = {}) {
    const size_t n = x.size();
    auto dot_v = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };
    auto sup = [n](const std::vector<double>& a) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s = std::max(s, std::abs(a[i]));
        return s;
    };

    std::vector<double> g(n), g_new(n), x_new(n), dir(n);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    LbfgsReport rep;
    double f = fg(x, g);
    rep.history.push_back(f);
    rep.value = f;
    rep.grad_sup = sup(g);

    for (int it = 0; it < opt.max_iters; ++it) {
        if (rep.grad_sup <= opt.gtol) {
            rep.status = LbfgsStatus::Converged;
            return rep;
        }

        // two-loop recursion for dir = -H g
        dir = g;
        std::vector<double> alpha(s_hist.size());
        for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
            alpha[static_cast<size_t>(i)] =
                rho_hist[static_cast<size_t>(i)] * dot_v(s_hist[static_cast<size_t>(i)], dir);
            for (size_t k = 0; k < n; ++k)
                dir[k] -= alpha[static_cast<size_t>(i)] * y_hist[static_cast<size_t>(i)][k];
        }
        if (!y_hist.empty()) {
            double yy = dot_v(y_hist.back(), y_hist.back());
            double gamma = (yy > 0.0) ? 1.0 / (rho_hist.back() * yy) : 1.0;
            for (size_t k = 0; k < n; ++k) dir[k] *= gamma;
        }
        for (size_t i = 0; i < s_hist.size(); ++i) {
            double beta = rho_hist[i] * dot_v(y_hist[i], dir);
            for (size_t k = 0; k < n; ++k) dir[k] += (alpha[i] - beta) * s_hist[i][k];
        }
        for (size_t k = 0; k < n; ++k) dir[k] = -dir[k];

        double gd = dot_v(g, dir);
        if (gd >= 0.0) {  // not a descent direction: fall back to steepest descent
            for (size_t k = 0; k < n; ++k) dir[k] = -g[k];
            gd = -dot_v(g, g);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // Armijo backtracking
        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int bt = 0; bt < opt.max_backtracks; ++bt) {
            for (size_t k = 0; k < n; ++k) x_new[k] = x[k] + step * dir[k];
            f_new = fg(x_new, g_new);
            if (f_new <= f + opt.armijo_c1 * step * gd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            rep.status = LbfgsStatus::Stalled;
            return rep;
        }

        // curvature pair update
        std::vector<double> s_vec(n), y_vec(n);
        for (size_t k = 0; k < n; ++k) {
            s_vec[k] = x_new[k] - x[k];
            y_vec[k] = g_new[k] - g[k];
        }
        double ys = dot_v(y_vec, s_vec);
        double yn = std::sqrt(dot_v(y_vec, y_vec));
        double sn = std::sqrt(dot_v(s_vec, s_vec));
        if (ys > 1e-12 * yn * sn) {
            s_hist.push_back(std::move(s_vec));
            y_hist.push_back(std::move(y_vec));
            rho_hist.push_back(1.0 / ys);
            if (static_cast<int>(s_hist.size()) > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        rep.iterations = it + 1;
        rep.value = f;
        rep.grad_sup = sup(g);
        rep.history.push_back(f);
    }
    rep.status = (rep.grad_sup <= opt.gtol) ? LbfgsStatus::Converged : LbfgsStatus::MaxIterations;
    return rep;
}

}  // namespace plates
