#pragma once

// Modified Bessel functions I_l, K_l and modified spherical Bessel functions
// i_l, k_l with first derivatives, for integer order l >= 0 and real x > 0.
//
// Evaluation strategy (switchover at x = 2 for K):
//   I_l  — ascending power series at every x; all terms are positive, so the
//          sum carries no cancellation and is accurate to a few ulps wherever
//          the value is representable.
//   K_0, K_1 — log-type power series for x <= 2, Steed's continued fraction
//          (CF2) for x > 2; higher orders by upward recurrence, which is
//          stable because K_l grows with the order.
//   i_l, k_l — same scheme with the half-integer-order recurrences and the
//          normalization i_0(x) = sinh(x)/x, k_0(x) = e^{-x}/x.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dshell/common.hpp"

namespace dshell {

struct BesselPair {
    int order = 0;
    double x = 0.0;
    double I = 0.0;
    double K = 0.0;
    double Ip = 0.0;
    double Kp = 0.0;
};

struct SphBesselPair {
    int order = 0;
    double x = 0.0;
    double i = 0.0;
    double k = 0.0;
    double ip = 0.0;
    double kp = 0.0;
};

namespace specfun_detail {

inline constexpr double x_max = 700.0;   // exp overflow guard
inline constexpr int l_max = 200;
inline constexpr double series_eps = 1e-18;

inline void check_args(int l, double x) {
    if (!(x > 0.0)) throw DomainError("bessel: argument must be positive, got x=" + std::to_string(x));
    if (x >= x_max)
        throw ScaledEvalError("bessel: x=" + std::to_string(x) +
                              " >= 700 would overflow; evaluate exp-scaled ratios instead");
    if (l < 0 || l > l_max) throw DomainError("bessel: order out of range [0,200], got l=" + std::to_string(l));
}

/// Ascending series for I_l(x); valid for all x > 0.
inline double bessel_i_series(int l, double x) {
    double t = 1.0;
    for (int j = 1; j <= l; ++j) t *= 0.5 * x / j;  // (x/2)^l / l!
    if (t == 0.0)
        throw ScaledEvalError("bessel: I_" + std::to_string(l) + "(" + std::to_string(x) +
                              ") underflows; evaluate exp-scaled ratios instead");
    double q = 0.25 * x * x;
    double sum = t;
    for (int k = 1; k < 40000; ++k) {
        t *= q / (static_cast<double>(k) * (k + l));
        sum += t;
        if (t < series_eps * sum) break;
    }
    return sum;
}

/// K_0 and K_1 for 0 < x <= 2 from the classical log series.
inline void bessel_k01_series(double x, double& k0, double& k1) {
    double q = 0.25 * x * x;
    double lt = std::log(0.5 * x);

    double t = 1.0, h = 0.0, s0 = 0.0, i0 = 1.0;
    for (int k = 1; k < 60; ++k) {
        t *= q / (static_cast<double>(k) * k);
        h += 1.0 / k;
        i0 += t;
        s0 += t * h;
        if (t < series_eps * i0) break;
    }
    k0 = -(lt + euler_gamma) * i0 + s0;

    // K_1(x) = 1/x + ln(x/2) I_1(x) - (x/4) sum_k [H_k + H_{k+1} - 2 gamma] q^k / (k!(k+1)!)
    double u = 1.0, i1 = 1.0, s1 = (1.0 - 2.0 * euler_gamma), hk = 0.0, hk1 = 1.0;
    s1 = u * (hk + hk1 - 2.0 * euler_gamma);
    for (int k = 1; k < 60; ++k) {
        u *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        i1 += u;
        s1 += u * (hk + hk1 - 2.0 * euler_gamma);
        if (u < series_eps * i1) break;
    }
    i1 *= 0.5 * x;
    k1 = 1.0 / x + lt * i1 - 0.25 * x * s1;
}

/// K_0 and K_1 for x > 2 via Steed's continued fraction (CF2).
inline void bessel_k01_cf2(double x, double& k0, double& k1) {
    const double eps = std::numeric_limits<double>::epsilon();
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= eps) break;
    }
    h = a1 * h;
    k0 = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
    k1 = k0 * (x + 0.5 - h) / x;
}

}  // namespace specfun_detail

/// I_l, K_l and derivatives at a single order.
inline BesselPair bessel_ik(int l, double x) {
    using namespace specfun_detail;
    check_args(l, x);

    double k0, k1;
    if (x <= 2.0)
        bessel_k01_series(x, k0, k1);
    else
        bessel_k01_cf2(x, k0, k1);

    double km = k0, kl = (l == 0) ? k0 : k1;  // K_{l-1}, K_l  (km = K_1 at l=0)
    if (l == 0) km = k1;                      // K_0' = -K_1
    for (int j = 1; j < l; ++j) {
        double knext = km + (2.0 * j / x) * kl;
        if (!std::isfinite(knext))
            throw ScaledEvalError("bessel: K_" + std::to_string(l) + "(" + std::to_string(x) +
                                  ") overflows; evaluate exp-scaled ratios instead");
        km = kl;
        kl = knext;
    }

    BesselPair out;
    out.order = l;
    out.x = x;
    out.K = kl;
    out.Kp = (l == 0) ? -k1 : -(km + (l / x) * kl);
    out.I = bessel_i_series(l, x);
    double im = (l == 0) ? bessel_i_series(1, x) : bessel_i_series(l - 1, x);
    out.Ip = (l == 0) ? im : im - (l / x) * out.I;
    return out;
}

/// All orders 0..lmax at once; K by one recurrence sweep, I by series per order.
inline std::vector<BesselPair> bessel_ik_upto(int lmax, double x) {
    using namespace specfun_detail;
    check_args(lmax, x);

    std::vector<BesselPair> out(lmax + 1);
    std::vector<double> K(lmax + 2);
    if (x <= 2.0)
        bessel_k01_series(x, K[0], K[1]);
    else
        bessel_k01_cf2(x, K[0], K[1]);
    for (int j = 1; j <= lmax; ++j) {
        K[j + 1] = K[j - 1] + (2.0 * j / x) * K[j];
        if (!std::isfinite(K[j + 1]))
            throw ScaledEvalError("bessel: K_" + std::to_string(j + 1) + "(" + std::to_string(x) +
                                  ") overflows; evaluate exp-scaled ratios instead");
    }
    std::vector<double> I(lmax + 2);
    for (int j = 0; j <= lmax + 1; ++j) I[j] = bessel_i_series(j, x);
    for (int j = 0; j <= lmax; ++j) {
        out[j].order = j;
        out[j].x = x;
        out[j].I = I[j];
        out[j].K = K[j];
        out[j].Ip = (j == 0) ? I[1] : I[j - 1] - (j / x) * I[j];
        out[j].Kp = (j == 0) ? -K[1] : -(K[j - 1] + (j / x) * K[j]);
    }
    return out;
}

/// Ascending series for i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x); i_0 = sinh(x)/x.
inline double sph_bessel_i_series(int l, double x) {
    using namespace specfun_detail;
    double t = 1.0;
    for (int j = 1; j <= l; ++j) t *= x / (2 * j + 1);  // x^l / (2l+1)!!
    if (t == 0.0)
        throw ScaledEvalError("bessel: i_" + std::to_string(l) + "(" + std::to_string(x) +
                              ") underflows; evaluate exp-scaled ratios instead");
    double q = 0.5 * x * x;
    double sum = t;
    for (int k = 1; k < 40000; ++k) {
        t *= q / (static_cast<double>(k) * (2 * l + 2 * k + 1));
        sum += t;
        if (t < series_eps * sum) break;
    }
    return sum;
}

/// i_l, k_l and derivatives; normalization i_0 = sinh(x)/x, k_0 = e^{-x}/x.
inline SphBesselPair sph_bessel_ik(int l, double x) {
    using namespace specfun_detail;
    check_args(l, x);

    double k0 = std::exp(-x) / x;
    double km = k0, kl = (l == 0) ? k0 : k0 * (1.0 + 1.0 / x);
    if (l == 0) km = k0;  // k_{-1} = k_0
    for (int j = 1; j < l; ++j) {
        double knext = km + ((2.0 * j + 1.0) / x) * kl;
        if (!std::isfinite(knext))
            throw ScaledEvalError("bessel: k_" + std::to_string(l) + "(" + std::to_string(x) +
                                  ") overflows; evaluate exp-scaled ratios instead");
        km = kl;
        kl = knext;
    }

    SphBesselPair out;
    out.order = l;
    out.x = x;
    out.k = kl;
    out.kp = -km - ((l + 1.0) / x) * kl;
    out.i = sph_bessel_i_series(l, x);
    double im = (l == 0) ? std::cosh(x) / x : sph_bessel_i_series(l - 1, x);  // i_{-1} = cosh(x)/x
    out.ip = im - ((l + 1.0) / x) * out.i;
    return out;
}

inline std::vector<SphBesselPair> sph_bessel_ik_upto(int lmax, double x) {
    std::vector<SphBesselPair> out(lmax + 1);
    for (int j = 0; j <= lmax; ++j) out[j] = sph_bessel_ik(j, x);
    return out;
}

}  // namespace dshell
