#include "codesign/optimizer.hpp"

#include <cmath>

namespace codesign {

BfgsResult bfgs_minimize(const ObjectiveFn& f, Eigen::VectorXd x, const BfgsOptions& opt) {
    const Eigen::Index n = x.size();
    Eigen::VectorXd g(n), g_new(n), x_new(n);
    double fx = f(x, g);
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
    BfgsResult res;
    int stall = 0;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        if (fx <= opt.f_target || g.norm() < opt.grad_tol)
            break;
        Eigen::VectorXd p = -(h * g);
        double slope = p.dot(g);
        if (!(slope < 0)) {
            h.setIdentity();
            p = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        double f_new = 0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + step * p;
            f_new = f(x_new, g_new);
            if (f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (h.isIdentity())
                break;
            h.setIdentity();
            continue;
        }
        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-18) {
            double rho = 1.0 / sy;
            if (it == 0 && h.isIdentity())
                h *= sy / y.squaredNorm();
            Eigen::VectorXd hy = h * y;
            // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) - rho * (hy * s.transpose() + s * hy.transpose());
        }
        if (fx - f_new <= 1e-15 * std::max(1.0, std::abs(fx)))
            ++stall;
        else
            stall = 0;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (stall >= opt.stall_iterations)
            break;
    }
    res.x = x;
    res.f = fx;
    res.iterations = it;
    return res;
}

} // namespace codesign
