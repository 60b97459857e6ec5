#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dshell {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Invalid or degenerate geometry (non-regular parametrization, bad grid).
class GeometryError : public Error {
  public:
    using Error::Error;
};

/// Evaluation would overflow or underflow; a scaled formulation is required.
class ScaledEvalError : public Error {
  public:
    using Error::Error;
};

/// Requested (geometry, interaction, backend) combination is not supported.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Run-configuration violation; maps to exit code 2 in the CLI.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Failure while assembling a discrete operator.
class AssemblyError : public Error {
  public:
    using Error::Error;
};

/// Failure inside an eigenvalue / root-finding procedure.
class SolverError : public Error {
  public:
    using Error::Error;
};

/// Thread cap: min(hardware, SOLVER_THREADS if set). At least 1.
inline unsigned max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SOLVER_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

/// Least-squares slope and intercept of log(y_k) vs log(k) over 1-based
/// indices k in [k_lo, k_hi]. Non-positive y are skipped.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
};

template <typename Seq>
LogLogFit fit_loglog(const Seq& y, int k_lo, int k_hi) {
    LogLogFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = k_lo; k <= k_hi && k <= static_cast<int>(y.size()); ++k) {
        double v = y[k - 1];
        if (!(v > 0.0)) continue;
        double lx = std::log(static_cast<double>(k)), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    fit.points = m;
    if (m >= 2) {
        double den = m * sxx - sx * sx;
        fit.slope = (m * sxy - sx * sy) / den;
        fit.intercept = (sy - fit.slope * sx) / m;
    }
    return fit;
}

/// Deterministic parallel loop over [0, n). Each index is processed exactly
/// once; the partition depends only on n and the thread cap, so results are
/// identical for any cap as long as the body writes disjoint outputs.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned nt = max_threads();
    if (nt <= 1 || n < 2 * nt) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace dshell
