#pragma once

// Independent brute-force reference generators. Nothing here shares code with
// the production modules: Bessel values come from integral representations or
// Miller recurrences, bound states from radial ODE shooting, and single-layer
// mode eigenvalues from direct quadrature of the periodized kernel.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dshell/common.hpp"

namespace dshell::oracle {

using Fn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// quadrature primitives

/// Trapezoid rule on [0,T] for an even integrand that decays to ~0 before T.
/// Successive halving; converges geometrically for analytic integrands.
inline double trapezoid_even_decay(const Fn& f, double T, double tol = 1e-14) {
    int n = 16;
    double h = T / n;
    double s = 0.5 * f(0.0);
    for (int j = 1; j < n; ++j) s += f(j * h);
    s += 0.5 * f(T);
    double prev = s * h;
    for (int level = 0; level < 14; ++level) {
        double mid = 0.0;
        for (int j = 0; j < n; ++j) mid += f((j + 0.5) * h);
        n *= 2;
        h *= 0.5;
        s += mid;
        double cur = s * h;
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)) && level > 1) return cur;
        prev = cur;
    }
    return prev;
}

namespace quad_detail {

inline const double gauss7_x[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                                   0.0,                 0.4058451513773972,  0.7415311855993945,
                                   0.9491079123427585};
inline const double gauss7_w[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                   0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                   0.1294849661688697};

inline double gauss7(const Fn& f, double a, double b) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += gauss7_w[i] * f(c + hw * gauss7_x[i]);
    return s * hw;
}

inline double adaptive_gauss_rec(const Fn& f, double a, double b, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = gauss7(f, a, m), right = gauss7(f, m, b);
    if (depth > 48) return left + right;
    if (std::abs(left + right - whole) <= tol) return left + right;
    return adaptive_gauss_rec(f, a, m, left, 0.5 * tol, depth + 1) +
           adaptive_gauss_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace quad_detail

/// Adaptive 7-point Gauss quadrature with interval bisection.
inline double adaptive_gauss(const Fn& f, double a, double b, double tol = 1e-12) {
    using namespace quad_detail;
    return adaptive_gauss_rec(f, a, b, gauss7(f, a, b), tol, 0);
}

/// Tanh-sinh (double-exponential) quadrature on [a,b]; the trapezoid rule in
/// the transformed variable, refined by halving. Tolerates integrable
/// endpoint singularities; nodes approach but never reach the endpoints.
/// max_levels >= 0 forces exactly that many refinements (no early exit).
inline double tanh_sinh(const Fn& f, double a, double b, double tol = 1e-13, int max_levels = -1) {
    const double tmax = 3.8;
    const double hw = 0.5 * (b - a);
    auto pair_sum = [&](double t) {
        double u = 0.5 * pi * std::sinh(t);
        double ch = std::cosh(u);
        double w = 0.5 * pi * std::cosh(t) / (ch * ch);
        if (w < 1e-18) return 0.0;
        double dist = hw * 2.0 / (std::exp(2.0 * u) + 1.0);  // hw*(1 - tanh u), stable
        return w * (f(b - dist) + f(a + dist));
    };
    double h = 0.5;
    double s = 0.5 * pi * f(a + hw);  // t = 0 node
    for (double t = h; t <= tmax; t += h) s += pair_sum(t);
    double prev = s * h * hw;
    for (int level = 0; level < 12; ++level) {
        double acc = 0.0;
        for (double t = 0.5 * h; t <= tmax; t += h) acc += pair_sum(t);
        s += acc;
        h *= 0.5;
        double cur = s * h * hw;
        if (max_levels >= 0 && level + 1 >= max_levels) return cur;
        if (max_levels < 0 && level > 1 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// independent special-function references

/// K_l(z) = int_0^inf exp(-z cosh t) cosh(l t) dt, by trapezoid quadrature.
inline double bessel_k_integral(int l, double z) {
    if (!(z > 0.0)) throw DomainError("oracle bessel_k_integral: z must be positive");
    double T = 2.0;
    for (int it = 0; it < 40; ++it) T = std::acosh((745.0 + l * T) / z);
    return trapezoid_even_decay([&](double t) { return std::exp(-z * std::cosh(t)) * std::cosh(l * t); }, T);
}

/// I_l(z) = (1/pi) int_0^pi exp(z cos t) cos(l t) dt, by trapezoid quadrature.
inline double bessel_i_integral(int l, double z) {
    if (!(z > 0.0)) throw DomainError("oracle bessel_i_integral: z must be positive");
    double v = trapezoid_even_decay([&](double t) { return std::exp(z * std::cos(t)) * std::cos(l * t); }, pi);
    return v / pi;
}

/// Miller-style downward recurrence for I_l(x), normalized by I_0 from its
/// integral representation.
inline double bessel_i_miller(int l, double x) {
    int start = l + 20 + static_cast<int>(2.0 * std::sqrt(40.0 * (l + 1) + x * x));
    double fp = 0.0, fc = 1e-280, norm0 = 0.0;
    double target = 0.0;
    for (int j = start; j >= 0; --j) {
        double fm = fp + (2.0 * (j + 1) / x) * fc;
        fp = fc;
        fc = fm;
        if (std::abs(fc) > 1e250) {
            fc *= 1e-250;
            fp *= 1e-250;
            target *= 1e-250;
            norm0 *= 1e-250;
        }
        if (j == l) target = fc;
        if (j == 0) norm0 = fc;
    }
    return target / norm0 * bessel_i_integral(0, x);
}

/// Miller-style downward recurrence for the modified spherical i_l(x),
/// normalized by i_0(x) = sinh(x)/x.
inline double sph_bessel_i_miller(int l, double x) {
    int start = l + 20 + static_cast<int>(2.0 * std::sqrt(40.0 * (l + 1) + x * x));
    double fp = 0.0, fc = 1e-280, norm0 = 0.0, target = 0.0;
    for (int j = start; j >= 0; --j) {
        double fm = fp + ((2.0 * (j + 1) + 1.0) / x) * fc;
        fp = fc;
        fc = fm;
        if (std::abs(fc) > 1e250) {
            fc *= 1e-250;
            fp *= 1e-250;
            target *= 1e-250;
            norm0 *= 1e-250;
        }
        if (j == l) target = fc;
        if (j == 0) norm0 = fc;
    }
    return target / norm0 * (std::sinh(x) / x);
}

// ---------------------------------------------------------------------------
// single-layer mode eigenvalue by direct quadrature

/// l-th Fourier coefficient of theta -> R/(2 pi) K_0(2 kappa R sin(theta/2)).
/// Uses the integral representation of K_0, not the production Bessel code.
/// `order` caps the refinement of the singularity-adapted trapezoid rule.
inline double mode_fourier_single_layer(int l, double kappa, double R, int order = 512) {
    if (order < 512) throw DomainError("oracle mode_fourier_single_layer: order must be >= 512");
    // symmetric in theta <-> 2pi - theta; integrate twice [0, pi], log-singular at 0
    auto g = [&](double theta) {
        double arg = 2.0 * kappa * R * std::sin(0.5 * theta);
        return bessel_k_integral(0, arg) * std::cos(l * theta);
    };
    int levels = static_cast<int>(std::lround(std::log2(order / 15.0)));
    double v = tanh_sinh(g, 0.0, pi, 1e-13, levels);
    return 2.0 * v * R / (2.0 * pi);
}

// ---------------------------------------------------------------------------
// radial shooting

struct ShootingProblem {
    int dimension = 2;   // n in {2, 3}
    int angular = 0;     // l
    double radius = 1.0; // interface radius R
    bool delta_prime = false;
    double strength = 0.0;  // alpha (delta) or beta (delta')
    double r_min_factor = 1e-4;   // r_min = r_min_factor * R
    double r_max_pad = 30.0;      // r_max >= R + r_max_pad / kappa
    double log_step = 1e-3;       // outward sweep step in s = ln r
    double kappa_step = 4e-3;     // inward sweep step, in units of 1/kappa
};

namespace shoot_detail {

struct State {
    double u, v;
};

/// Outward sweep in s = ln r:  w'' = (2-n) w' + (L + kappa^2 e^{2s}) w.
inline State integrate_out(const ShootingProblem& p, double kappa, double r_min, double R) {
    const double L = (p.dimension == 2) ? double(p.angular) * p.angular
                                        : double(p.angular) * (p.angular + 1);
    const double cn = 2.0 - p.dimension;
    double s0 = std::log(r_min), s1 = std::log(R);
    int n = std::max(64, static_cast<int>(std::ceil((s1 - s0) / p.log_step)));
    double h = (s1 - s0) / n;
    // regular solution u ~ r^l (1 + c r^2), scaled by r_min^{-l}
    const double c2 = (p.dimension == 2) ? kappa * kappa / (4.0 * (p.angular + 1))
                                         : kappa * kappa / (2.0 * (2 * p.angular + 3));
    double w = 1.0 + c2 * r_min * r_min;
    double wp = p.angular * w + 2.0 * c2 * r_min * r_min;
    auto rhs = [&](double s, double ww, double wwp, double& dw, double& dwp) {
        double r2 = std::exp(2.0 * s);
        dw = wwp;
        dwp = cn * wwp + (L + kappa * kappa * r2) * ww;
    };
    double s = s0;
    for (int i = 0; i < n; ++i) {
        double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
        rhs(s, w, wp, k1w, k1v);
        rhs(s + 0.5 * h, w + 0.5 * h * k1w, wp + 0.5 * h * k1v, k2w, k2v);
        rhs(s + 0.5 * h, w + 0.5 * h * k2w, wp + 0.5 * h * k2v, k3w, k3v);
        rhs(s + h, w + h * k3w, wp + h * k3v, k4w, k4v);
        w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        wp += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        s += h;
        if (std::abs(w) > 1e200 || std::abs(wp) > 1e200) {
            w *= 1e-200;
            wp *= 1e-200;
        }
    }
    return {w, wp / R};  // u = w, u' = w'/r
}

/// Inward sweep in r from the decaying asymptotic.
inline State integrate_in(const ShootingProblem& p, double kappa, double R, double r_max) {
    const double L = (p.dimension == 2) ? double(p.angular) * p.angular
                                        : double(p.angular) * (p.angular + 1);
    const double nm1 = p.dimension - 1.0;
    int n = std::max(64, static_cast<int>(std::ceil((r_max - R) / (p.kappa_step / kappa))));
    double h = -(r_max - R) / n;
    double u = 1.0;
    double v = -kappa - nm1 / (2.0 * r_max);
    auto rhs = [&](double r, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = (kappa * kappa + L / (r * r)) * uu - (nm1 / r) * vv;
    };
    double r = r_max;
    for (int i = 0; i < n; ++i) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        rhs(r, u, v, k1u, k1v);
        rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
        rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
        rhs(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        r += h;
        if (std::abs(u) > 1e200 || std::abs(v) > 1e200) {
            u *= 1e-200;
            v *= 1e-200;
        }
    }
    return {u, v};
}

}  // namespace shoot_detail

/// Interface-condition determinant whose roots in kappa are bound states
/// lambda = -kappa^2. Scale-invariant: both half-solutions are renormalized
/// at the interface.
inline double shoot_matching(const ShootingProblem& p, double kappa) {
    if (!(kappa > 0.0)) throw DomainError("shoot_matching: kappa must be positive");
    const double R = p.radius;
    const double r_min = p.r_min_factor * R;
    const double r_max = R + p.r_max_pad / kappa;
    auto in = shoot_detail::integrate_out(p, kappa, r_min, R);
    auto ex = shoot_detail::integrate_in(p, kappa, R, r_max);
    double ni = std::hypot(in.u, in.v), ne = std::hypot(ex.u, ex.v);
    in.u /= ni;
    in.v /= ni;
    ex.u /= ne;
    ex.v /= ne;
    if (!p.delta_prime) {
        // u continuous, u'(R+) - u'(R-) = -alpha u(R)
        return in.u * ex.v - in.v * ex.u + p.strength * in.u * ex.u;
    }
    // u' continuous, -beta u'(R) = u(R+) - u(R-)
    return in.v * ex.u - in.u * ex.v + p.strength * in.v * ex.v;
}

// ---------------------------------------------------------------------------
// root bracketing

/// Bisection to `tol`; no derivative assumptions. Returns nullopt when the
/// bracket carries no sign change.
inline std::optional<double> bessel_root_bisect(const Fn& f, double lo, double hi, double tol = 1e-12) {
    if (lo == hi) throw DomainError("bessel_root_bisect: degenerate bracket");
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) return std::nullopt;
    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// All sign-change roots of f on [lo, hi] found by an n_scan lattice scan.
inline std::vector<double> scan_roots(const Fn& f, double lo, double hi, int n_scan, double tol = 1e-12) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= n_scan; ++i) {
        double x = lo + (hi - lo) * i / n_scan;
        double fx = f(x);
        if (prev_f == 0.0)
            roots.push_back(prev_x);
        else if ((prev_f > 0) != (fx > 0)) {
            auto r = bessel_root_bisect(f, prev_x, x, tol);
            if (r) roots.push_back(*r);
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

/// Bound states of the radial problem on a kappa bracket, via determinant scan.
inline std::vector<double> shoot_bound_state_kappas(const ShootingProblem& p, double kappa_lo,
                                                    double kappa_hi, int n_scan = 256,
                                                    double tol = 1e-10) {
    return scan_roots([&](double k) { return shoot_matching(p, k); }, kappa_lo, kappa_hi, n_scan, tol);
}

/// Interior/exterior Neumann-to-Dirichlet mode values by shooting:
/// m_i = u_reg(R)/u_reg'(R) and m_e = -u_dec(R)/u_dec'(R).
inline std::pair<double, double> shoot_ntd_values(int dimension, int angular, double R,
                                                  double kappa) {
    ShootingProblem p;
    p.dimension = dimension;
    p.angular = angular;
    p.radius = R;
    auto in = shoot_detail::integrate_out(p, kappa, p.r_min_factor * R, R);
    auto ex = shoot_detail::integrate_in(p, kappa, R, R + p.r_max_pad / kappa);
    return {in.u / in.v, -ex.u / ex.v};
}

}  // namespace dshell::oracle
