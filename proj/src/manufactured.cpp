#include "cutfem/manufactured.hpp"

#include <cmath>

namespace cutfem {

namespace {

struct Exponent {
    double g;
    Vec3 grad;
};

Exponent exponent(const Vec3& y) {
    return {-y.x() * (y.x() - 1.0) - y.y() * (y.y() - 1.0), Vec3(1.0 - 2.0 * y.x(), 1.0 - 2.0 * y.y(), 0.0)};
}

const Eigen::Matrix3d& hess_g() {
    static const Eigen::Matrix3d h = Eigen::Vector3d(-2.0, -2.0, 0.0).asDiagonal();
    return h;
}

}  // namespace

ManufacturedProblem::ManufacturedProblem(const Sphere& sphere, const ModelCoefficients& coeffs)
    : sphere_(sphere), surface_(ImplicitSurface(sphere)), coeffs_(coeffs) {
    coeffs_.validate();
}

double ManufacturedProblem::u_bulk(const Vec3& x) const {
    return std::exp(exponent(x - sphere_.center).g);
}

Vec3 ManufacturedProblem::grad_u_bulk(const Vec3& x) const {
    const Exponent e = exponent(x - sphere_.center);
    return std::exp(e.g) * e.grad;
}

double ManufacturedProblem::f_bulk(const Vec3& x) const {
    const Exponent e = exponent(x - sphere_.center);
    // Laplacian of exp(g) is exp(g) (|grad g|^2 + lap g), lap g = -4.
    return -coeffs_.k_B * std::exp(e.g) * (e.grad.squaredNorm() - 4.0);
}

// q = b_B + (k_B / r) s with s = y.grad g, a quadratic polynomial in y.
double ManufacturedProblem::u_surface_ambient(const Vec3& x) const {
    const Vec3 y = x - sphere_.center;
    const Exponent e = exponent(y);
    const double q = coeffs_.b_B + coeffs_.k_B / sphere_.radius * y.dot(e.grad);
    return std::exp(e.g) * q / coeffs_.b_S;
}

Vec3 ManufacturedProblem::grad_u_surface_ambient(const Vec3& x) const {
    const Vec3 y = x - sphere_.center;
    const Exponent e = exponent(y);
    const double c = coeffs_.k_B / sphere_.radius;
    const double q = coeffs_.b_B + c * y.dot(e.grad);
    const Vec3 grad_q = c * Vec3(1.0 - 4.0 * y.x(), 1.0 - 4.0 * y.y(), 0.0);
    return std::exp(e.g) / coeffs_.b_S * (grad_q + q * e.grad);
}

Eigen::Matrix3d ManufacturedProblem::hess_u_surface_ambient(const Vec3& x) const {
    const Vec3 y = x - sphere_.center;
    const Exponent e = exponent(y);
    const double c = coeffs_.k_B / sphere_.radius;
    const double q = coeffs_.b_B + c * y.dot(e.grad);
    const Vec3 grad_q = c * Vec3(1.0 - 4.0 * y.x(), 1.0 - 4.0 * y.y(), 0.0);
    const Eigen::Matrix3d hess_q = c * Eigen::Vector3d(-4.0, -4.0, 0.0).asDiagonal().toDenseMatrix();
    const Eigen::Matrix3d hq = hess_q + grad_q * e.grad.transpose() + e.grad * grad_q.transpose() +
                               q * (e.grad * e.grad.transpose() + hess_g());
    return std::exp(e.g) / coeffs_.b_S * hq;
}

double ManufacturedProblem::u_surface(const Vec3& x) const {
    return u_surface_ambient(surface_.closest_point(x));
}

Vec3 ManufacturedProblem::surface_grad_u_surface(const Vec3& x) const {
    const Vec3 p = surface_.closest_point(x);
    const Vec3 n = surface_.extended_normal(p);
    const Vec3 g = grad_u_surface_ambient(p);
    return g - n.dot(g) * n;
}

double ManufacturedProblem::surface_laplacian_u_surface(const Vec3& x) const {
    // Laplace-Beltrami of the trace of an ambient function w:
    //   tr(H) - n.H.n - kappa n.grad w,  kappa = total curvature.
    const Vec3 p = surface_.closest_point(x);
    const Vec3 n = surface_.extended_normal(p);
    const Eigen::Matrix3d hess = hess_u_surface_ambient(p);
    const Vec3 grad = grad_u_surface_ambient(p);
    return hess.trace() - n.dot(hess * n) - surface_.total_curvature(p) * n.dot(grad);
}

double ManufacturedProblem::f_surface(const Vec3& x) const {
    const Vec3 p = surface_.closest_point(x);
    const Vec3 n = surface_.extended_normal(p);
    return -coeffs_.k_S * surface_laplacian_u_surface(p) + coeffs_.k_B * n.dot(grad_u_bulk(p));
}

double ManufacturedProblem::compatibility_residual(const Vec3& x) const {
    const Vec3 p = surface_.closest_point(x);
    const Vec3 n = surface_.extended_normal(p);
    return -coeffs_.k_B * n.dot(grad_u_bulk(p)) - (coeffs_.b_B * u_bulk(p) - coeffs_.b_S * u_surface_ambient(p));
}

}  // namespace cutfem
