#pragma once

// Free-space Green kernels of -Delta - lambda for lambda < 0:
//   2-d: G(x,y) = K_0(kappa |x-y|) / (2 pi),   kappa = sqrt(-lambda)
//   3-d: G(x,y) = exp(-kappa |x-y|) / (4 pi |x-y|)
// plus the gradient of the 2-d kernel in its second argument.

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "dshell/common.hpp"
#include "dshell/specfun.hpp"

namespace dshell {

/// Point on the negative real spectral axis.
struct SpectralPoint {
    double lambda;  // < 0
    double kappa;   // sqrt(-lambda) > 0

    static SpectralPoint from_lambda(double lam) {
        if (!(lam < 0.0))
            throw DomainError("SpectralPoint: lambda must be negative, got " + std::to_string(lam));
        return {lam, std::sqrt(-lam)};
    }
    static SpectralPoint from_kappa(double kap) {
        if (!(kap > 0.0))
            throw DomainError("SpectralPoint: kappa must be positive, got " + std::to_string(kap));
        return {-kap * kap, kap};
    }
};

namespace kernel_detail {

inline void check_offdiag(double r, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("green kernel: kappa must be positive");
    if (!(r > 0.0))
        throw DomainError("green kernel: coincident points (singular); use singularity-split quadrature");
}

}  // namespace kernel_detail

inline double green_2d(const Eigen::Vector2d& x, const Eigen::Vector2d& y, double kappa) {
    double r = (x - y).norm();
    kernel_detail::check_offdiag(r, kappa);
    return bessel_ik(0, kappa * r).K / (2.0 * pi);
}

inline double green_3d(const Eigen::Vector3d& x, const Eigen::Vector3d& y, double kappa) {
    double r = (x - y).norm();
    kernel_detail::check_offdiag(r, kappa);
    return std::exp(-kappa * r) / (4.0 * pi * r);
}

/// Gradient of green_2d in the second argument:
/// grad_y G = -(kappa/2pi) K_0'(kappa r) (y-x)/r with K_0' = -K_1.
inline Eigen::Vector2d green_2d_grad_y(const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                                       double kappa) {
    Eigen::Vector2d d = y - x;
    double r = d.norm();
    kernel_detail::check_offdiag(r, kappa);
    double k1 = bessel_ik(1, kappa * r).K;
    return (kappa * k1 / (2.0 * pi * r)) * (-d);
}

/// Normal derivative of G in y: grad_y G . nu(y). Diagnostic double-layer
/// kernel only; no solver component is built on it.
inline double green_2d_dnu_y(const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                             const Eigen::Vector2d& nu, double kappa) {
    return green_2d_grad_y(x, y, kappa).dot(nu);
}

}  // namespace dshell
