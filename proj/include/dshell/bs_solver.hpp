#pragma once

// Negative point spectrum via the Birman-Schwinger characterization:
// lambda < 0 is an eigenvalue iff 1 is an eigenvalue of the strength-weighted
// Weyl operator at lambda. Crossings are located by sign-bracketed bisection
// on a refining kappa lattice; no monotonicity of the branches is assumed.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dshell/boundary_ops.hpp"
#include "dshell/common.hpp"

namespace dshell {

struct InteractionSpec {
    enum class Kind { delta, delta_prime };

    Kind kind = Kind::delta;
    double strength = 0.0;                    // constant alpha or beta
    std::optional<Eigen::VectorXd> samples;   // sampled alpha on the grid (delta on curves only)

    static constexpr double beta_min = 1e-8;

    static InteractionSpec delta(double alpha) {
        InteractionSpec s;
        s.kind = Kind::delta;
        s.strength = alpha;
        return s;
    }
    static InteractionSpec delta_sampled(Eigen::VectorXd alpha_samples) {
        InteractionSpec s;
        s.kind = Kind::delta;
        s.samples = std::move(alpha_samples);
        return s;
    }
    static InteractionSpec delta_prime(double beta) {
        if (!(std::abs(beta) >= beta_min))
            throw ConfigError("delta': |beta| must be >= " + std::to_string(beta_min) +
                              " (1/beta must stay bounded)");
        InteractionSpec s;
        s.kind = Kind::delta_prime;
        s.strength = beta;
        return s;
    }

    bool constant() const { return !samples.has_value(); }
};

struct BoundState {
    double lambda_star = 0.0;
    int multiplicity = 1;
    double residual = 0.0;            // smallest |1 - mu_j| at lambda_star
    int mode = -1;                    // angular order on separable backends, -1 otherwise
    std::string backend;              // "modes" or "nystrom"
    Eigen::MatrixXd eigendensities;   // boundary kernel basis, nystrom backend only
};

struct BsOptions {
    double tol = 1e-8;              // residual tolerance at the located crossing
    int lattice_per_decade = 64;    // log-spaced kappa points per decade
    int max_refinements = 6;        // lattice doubling cap
    double overlap_threshold = 0.6; // eigenvector matching floor (nystrom branches)
    double mult_tol = 1e-7;         // kernel-dimension counting tolerance
};

namespace bs_detail {

/// Mode Birman-Schwinger value mu_l(kappa): alpha m_tilde_l or m_hat_l / beta.
inline double mode_bs_value(const InteractionSpec& spec, const Geometry& g, int l, double kappa) {
    ModeWeylValues v = mode_weyl(g, l, kappa);
    return spec.kind == InteractionSpec::Kind::delta ? spec.strength * v.m_tilde
                                                     : v.m_hat / spec.strength;
}

/// Supremum of the mode BS branch over lambda < 0 (the kappa -> 0+ limit of
/// the small-argument Bessel asymptotics). Infinite for mode 0.
inline double mode_bs_sup(const InteractionSpec& spec, const Geometry& g, int l) {
    const double R = g.radius;
    const bool circle = g.surface == Geometry::Surface::circle;
    if (spec.kind == InteractionSpec::Kind::delta) {
        if (spec.strength <= 0.0) return 0.0;
        if (circle) return l == 0 ? std::numeric_limits<double>::infinity() : spec.strength * R / (2.0 * l);
        return l == 0 ? spec.strength * R : spec.strength * R / (2.0 * l + 1.0);
    }
    if (spec.strength <= 0.0) return 0.0;  // m_hat > 0: no crossing for beta < 0
    if (l == 0) return std::numeric_limits<double>::infinity();
    double hat_sup = circle ? 2.0 * R / l : R / l + R / (l + 1.0);
    return hat_sup / spec.strength;
}

inline void check_backend(const InteractionSpec& spec, const Geometry& g) {
    if (g.backend == Geometry::Backend::nystrom) {
        if (spec.kind == InteractionSpec::Kind::delta_prime)
            throw UnsupportedError(
                "unsupported configuration: delta' requires a circle/sphere mode backend");
    } else {
        if (!spec.constant())
            throw UnsupportedError("sampled strengths require the Nystrom backend");
    }
    if (spec.kind == InteractionSpec::Kind::delta && spec.samples &&
        g.backend == Geometry::Backend::nystrom && spec.samples->size() != g.grid_n)
        throw ConfigError("sampled alpha length must equal the grid size N");
}

/// Symmetrized Birman-Schwinger matrix S^{1/2} D_alpha S^{1/2} together with
/// the pieces needed for eigendensity reconstruction.
struct NystromBs {
    Eigen::MatrixXd bs;        // symmetric
    Eigen::MatrixXd sym_sqrt;  // S^{1/2}
    BoundaryGrid grid;
};

inline NystromBs nystrom_bs_matrix(double lambda, const InteractionSpec& spec, const Geometry& g) {
    auto sp = SpectralPoint::from_lambda(lambda);
    auto op = assemble_single_layer(build_grid(g.curve, g.grid_n), sp.kappa);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.sym);
    if (es.info() != Eigen::Success) throw SolverError("bs_solver: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd root =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    Eigen::VectorXd alpha = spec.constant()
                                ? Eigen::VectorXd::Constant(g.grid_n, spec.strength)
                                : *spec.samples;
    NystromBs out;
    out.bs = root * alpha.asDiagonal() * root;
    out.bs = 0.5 * (out.bs + out.bs.transpose()).eval();
    out.sym_sqrt = std::move(root);
    out.grid = op.grid;
    return out;
}

struct Lattice {
    std::vector<double> kappas;  // ascending
};

inline Lattice log_lattice(double k_lo, double k_hi, int per_decade) {
    Lattice lat;
    double decades = std::log10(k_hi / k_lo);
    int n = std::max(8, static_cast<int>(std::ceil(decades * per_decade)) + 1);
    lat.kappas.resize(n);
    for (int i = 0; i < n; ++i)
        lat.kappas[i] = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (n - 1));
    return lat;
}

}  // namespace bs_detail

/// Eigenvalues of the Birman-Schwinger operator at lambda, sorted descending.
/// Delta on curves: spectrum of M^{1/2} alpha M^{1/2} (equals that of
/// alpha M-tilde). Separable backends: strength-weighted mode values with
/// angular multiplicity.
inline std::vector<double> bs_eigenvalues(double lambda, const InteractionSpec& spec,
                                          const Geometry& g) {
    bs_detail::check_backend(spec, g);
    SpectralPoint sp = SpectralPoint::from_lambda(lambda);
    std::vector<double> vals;
    if (g.backend == Geometry::Backend::nystrom) {
        auto nb = bs_detail::nystrom_bs_matrix(lambda, spec, g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nb.bs, Eigen::EigenvaluesOnly);
        vals.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    } else {
        for (int l = 0; l <= g.l_max; ++l) {
            double mu = bs_detail::mode_bs_value(spec, g, l, sp.kappa);
            for (int c = 0; c < g.mode_multiplicity(l); ++c) vals.push_back(mu);
        }
    }
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

namespace bs_detail {

/// Crossings of one scalar mode branch on the lattice, bisected to tol.
inline std::vector<double> mode_branch_crossings(const InteractionSpec& spec, const Geometry& g,
                                                 int l, const Lattice& lat, double tol) {
    std::vector<double> roots;
    auto f = [&](double k) { return mode_bs_value(spec, g, l, k) - 1.0; };
    double fprev = f(lat.kappas.front());
    for (std::size_t i = 1; i < lat.kappas.size(); ++i) {
        double fcur = f(lat.kappas[i]);
        if (fprev == 0.0) roots.push_back(lat.kappas[i - 1]);
        if ((fprev > 0) != (fcur > 0)) {
            double lo = lat.kappas[i - 1], hi = lat.kappas[i], flo = fprev;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                double mid = 0.5 * (lo + hi), fm = f(mid);
                if (std::abs(fm) < 1e-3 * tol) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        fprev = fcur;
    }
    return roots;
}

struct NystromSnapshot {
    Eigen::VectorXd mu;   // descending
    Eigen::MatrixXd vec;  // matching eigenvectors (columns)
};

inline NystromSnapshot nystrom_snapshot(double kappa, const InteractionSpec& spec,
                                        const Geometry& g) {
    auto nb = nystrom_bs_matrix(-kappa * kappa, spec, g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nb.bs);
    if (es.info() != Eigen::Success) throw SolverError("bs_solver: eigendecomposition failed");
    NystromSnapshot s;
    s.mu = es.eigenvalues().reverse();
    s.vec = es.eigenvectors().rowwise().reverse();
    return s;
}

/// Branch value at kappa continuing the branch whose eigenvector is `dir`.
/// Degenerate eigenvalues are handled as clusters: the branch continues into
/// the cluster with the largest subspace projection of dir. A projection
/// below the threshold is a tracking ambiguity.
inline std::pair<double, Eigen::VectorXd> branch_value(const NystromSnapshot& snap,
                                                       const Eigen::VectorXd& dir,
                                                       double overlap_threshold, double kappa) {
    const int n = static_cast<int>(snap.mu.size());
    double best_proj = -1.0, best_mu = 0.0;
    Eigen::VectorXd best_vec;
    for (int i = 0; i < n;) {
        int j = i + 1;
        while (j < n && std::abs(snap.mu[j] - snap.mu[i]) < 1e-8 * (std::abs(snap.mu[i]) + 1e-30))
            ++j;
        Eigen::VectorXd coef = snap.vec.middleCols(i, j - i).transpose() * dir;
        double proj = coef.norm();
        if (proj > best_proj) {
            best_proj = proj;
            best_mu = snap.mu[i];
            best_vec = snap.vec.middleCols(i, j - i) * coef / proj;
        }
        i = j;
    }
    if (best_proj < overlap_threshold)
        throw SolverError("bs_solver: branch-tracking ambiguity near kappa=" +
                          std::to_string(kappa) + " (subspace overlap " +
                          std::to_string(best_proj) + ")");
    return {best_mu, best_vec};
}

}  // namespace bs_detail

/// All bound states in the bracket [lambda_min, lambda_max], lambda_max < 0.
/// The kappa lattice is refined (doubled) until the crossing count is stable
/// twice in a row; each crossing is bisected until its residual is below tol.
inline std::vector<BoundState> find_bound_states(const InteractionSpec& spec, const Geometry& g,
                                                 double lambda_min, double lambda_max,
                                                 const BsOptions& opt = {}) {
    bs_detail::check_backend(spec, g);
    if (!(lambda_min < lambda_max) || !(lambda_max < 0.0))
        throw DomainError("find_bound_states: need lambda_min < lambda_max < 0");
    const double k_lo = std::sqrt(-lambda_max), k_hi = std::sqrt(-lambda_min);

    std::vector<BoundState> states;

    if (g.backend == Geometry::Backend::modes) {
        // per-mode scalar branches; crossings counted across refinements
        std::vector<std::vector<double>> roots_per_mode;
        int stable = 0;
        for (int refine = 0, per_dec = opt.lattice_per_decade; refine <= opt.max_refinements;
             ++refine, per_dec *= 2) {
            auto lat = bs_detail::log_lattice(k_lo, k_hi, per_dec);
            std::vector<std::vector<double>> roots(g.l_max + 1);
            std::size_t total = 0, prev_total = 0;
            for (auto& r : roots_per_mode) prev_total += r.size();
            for (int l = 0; l <= g.l_max; ++l) {
                if (bs_detail::mode_bs_sup(spec, g, l) <= 1.0) continue;  // no crossing possible
                roots[l] = bs_detail::mode_branch_crossings(spec, g, l, lat, opt.tol);
                total += roots[l].size();
            }
            bool same = !roots_per_mode.empty() && total == prev_total;
            roots_per_mode = std::move(roots);
            stable = same ? stable + 1 : 0;
            if (stable >= 2) break;
        }
        for (int l = 0; l < static_cast<int>(roots_per_mode.size()); ++l) {
            for (double kappa : roots_per_mode[l]) {
                BoundState bsb;
                bsb.lambda_star = -kappa * kappa;
                bsb.mode = l;
                bsb.multiplicity = g.mode_multiplicity(l);
                bsb.backend = "modes";
                bsb.residual = std::abs(bs_detail::mode_bs_value(spec, g, l, kappa) - 1.0);
                states.push_back(std::move(bsb));
            }
        }
    } else {
        // dense branches with eigenvector tracking
        struct Crossing {
            double kappa;
            Eigen::VectorXd dir;
            int branch;
        };
        std::vector<Crossing> crossings;
        int stable = 0;
        std::size_t prev_count = 0;
        for (int refine = 0, per_dec = opt.lattice_per_decade; refine <= opt.max_refinements;
             ++refine, per_dec *= 2) {
            auto lat = bs_detail::log_lattice(k_lo, k_hi, per_dec);
            std::vector<bs_detail::NystromSnapshot> snaps(lat.kappas.size());
            for (std::size_t i = 0; i < lat.kappas.size(); ++i)
                snaps[i] = bs_detail::nystrom_snapshot(lat.kappas[i], spec, g);
            std::vector<Crossing> found;
            const int n_branch = static_cast<int>(snaps[0].mu.size());
            for (int b = 0; b < n_branch; ++b) {
                Eigen::VectorXd dir = snaps[0].vec.col(b);
                double fprev = snaps[0].mu[b] - 1.0;
                for (std::size_t i = 1; i < snaps.size(); ++i) {
                    auto [mu, vec] =
                        bs_detail::branch_value(snaps[i], dir, opt.overlap_threshold,
                                                lat.kappas[i]);
                    double fcur = mu - 1.0;
                    if ((fprev > 0) != (fcur > 0)) {
                        // bisect inside [kappas[i-1], kappas[i]] along this branch
                        double lo = lat.kappas[i - 1], hi = lat.kappas[i], flo = fprev;
                        Eigen::VectorXd bdir = dir;
                        for (int it = 0; it < 120 && hi - lo > 1e-14 * hi; ++it) {
                            double mid = 0.5 * (lo + hi);
                            auto snap = bs_detail::nystrom_snapshot(mid, spec, g);
                            auto [fm_mu, fm_vec] =
                                bs_detail::branch_value(snap, bdir, opt.overlap_threshold, mid);
                            double fm = fm_mu - 1.0;
                            bdir = fm_vec;
                            if (std::abs(fm) < 1e-3 * opt.tol) {
                                lo = hi = mid;
                                break;
                            }
                            if ((fm > 0) == (flo > 0)) {
                                lo = mid;
                                flo = fm;
                            } else {
                                hi = mid;
                            }
                        }
                        found.push_back({0.5 * (lo + hi), bdir, b});
                    }
                    fprev = fcur;
                    dir = vec;
                }
            }
            bool same = refine > 0 && found.size() == prev_count;
            prev_count = found.size();
            crossings = std::move(found);
            stable = same ? stable + 1 : 0;
            if (stable >= 2) break;
        }
        // deduplicate branch coincidences (degenerate pairs bisect to the same kappa)
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& a, const Crossing& b) { return a.kappa < b.kappa; });
        for (std::size_t i = 0; i < crossings.size();) {
            double kappa = crossings[i].kappa;
            std::size_t j = i + 1;
            while (j < crossings.size() && std::abs(crossings[j].kappa - kappa) < 1e-7 * kappa) ++j;
            auto snap = bs_detail::nystrom_snapshot(kappa, spec, g);
            int mult = 0;
            std::vector<int> kernel_idx;
            for (int b = 0; b < snap.mu.size(); ++b)
                if (std::abs(snap.mu[b] - 1.0) < opt.mult_tol) {
                    ++mult;
                    kernel_idx.push_back(b);
                }
            BoundState bsb;
            bsb.lambda_star = -kappa * kappa;
            bsb.multiplicity = std::max<int>(mult, static_cast<int>(j - i));
            bsb.backend = "nystrom";
            bsb.residual = (snap.mu.array() - 1.0).abs().minCoeff();
            auto nb = bs_detail::nystrom_bs_matrix(-kappa * kappa, spec, g);
            bsb.eigendensities.resize(g.grid_n, kernel_idx.size());
            Eigen::VectorXd wsq = nb.grid.weights.array().sqrt();
            for (std::size_t c = 0; c < kernel_idx.size(); ++c) {
                Eigen::VectorXd dens =
                    (nb.sym_sqrt * snap.vec.col(kernel_idx[c])).cwiseQuotient(wsq);
                bsb.eigendensities.col(c) = dens / dens.norm();
            }
            states.push_back(std::move(bsb));
            i = j;
        }
    }

    std::sort(states.begin(), states.end(),
              [](const BoundState& a, const BoundState& b) { return a.lambda_star < b.lambda_star; });
    return states;
}

struct BsCount {
    int count = 0;         // BS eigenvalues above 1 at lambda = -eps, with multiplicity
    int mode_cutoff = -1;  // largest mode that can still cross (separable backends)
};

/// Finiteness of the negative spectrum: eigenvalue count of the BS operator
/// at lambda = -eps exceeding 1.
inline BsCount count_bound_states(const InteractionSpec& spec, const Geometry& g,
                                  double eps = 1e-6) {
    if (!(eps > 0.0)) throw DomainError("count_bound_states: eps must be positive");
    bs_detail::check_backend(spec, g);
    BsCount out;
    if (g.backend == Geometry::Backend::modes) {
        double kappa = std::sqrt(eps);
        for (int l = 0; l <= g.l_max; ++l) {
            if (bs_detail::mode_bs_sup(spec, g, l) > 1.0) out.mode_cutoff = l;
            if (bs_detail::mode_bs_value(spec, g, l, kappa) > 1.0) out.count += g.mode_multiplicity(l);
        }
    } else {
        for (double mu : bs_eigenvalues(-eps, spec, g))
            if (mu > 1.0) ++out.count;
    }
    return out;
}

}  // namespace dshell
