#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace spatialsim::testing {

double align_residual(const Configuration& sample, const Configuration& ref) {
    if (sample.size() != ref.size() || ref.size() == 0)
        throw std::invalid_argument("align_residual: size mismatch");
    const int n = static_cast<int>(ref.size());
    Eigen::MatrixXd src(2, n), dst(2, n);
    for (int i = 0; i < n; ++i) {
        src(0, i) = sample.objects[static_cast<std::size_t>(i)].x;
        src(1, i) = sample.objects[static_cast<std::size_t>(i)].y;
        dst(0, i) = ref.objects[static_cast<std::size_t>(i)].x;
        dst(1, i) = ref.objects[static_cast<std::size_t>(i)].y;
    }
    const Eigen::Matrix3d t = Eigen::umeyama(src, dst, true);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        Eigen::Vector3d p(src(0, i), src(1, i), 1.0);
        Eigen::Vector3d q = t * p;
        const double dx = q(0) - dst(0, i);
        const double dy = q(1) - dst(1, i);
        worst = std::max(worst, std::hypot(dx, dy));
    }
    return worst;
}

double finite_diff(const std::function<double()>& f, Matrix* param, int r, int c,
                   double h) {
    const double saved = (*param)(r, c);
    (*param)(r, c) = saved + h;
    const double up = f();
    (*param)(r, c) = saved - h;
    const double down = f();
    (*param)(r, c) = saved;
    return (up - down) / (2.0 * h);
}

}  // namespace spatialsim::testing
