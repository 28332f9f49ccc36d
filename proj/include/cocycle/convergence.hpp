#pragma once

#include "cocycle/attractor.hpp"
#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/types.hpp"

#include <functional>
#include <vector>

namespace cocycle {

/// Empirical contraction evidence: alpha_hat is the sup of sampled difference
/// quotients |f(y,u1)-f(y,u2)| / |u1-u2| and the witness pair attains it.
struct ContractionCertificate {
    enum class Kind { uniform, strict, violated };
    Kind kind = Kind::violated;
    double alpha_hat = 0.0;
    double margin = 0.05;  // uniform means alpha_hat < 1 - margin
    BasePoint witness_y;
    Vec witness_u1, witness_u2;
    long samples = 0;
};

/// Samples adjacent grid pairs, tiny centered pairs around every grid point
/// (these expose sup quotients attained in the small-separation limit), and
/// pair_count random pairs drawn from the grid's bounding box.
ContractionCertificate verify_contraction(const CocycleDef& c, const BaseFlow& flow,
                                          const std::vector<Vec>& fiber_grid,
                                          const std::vector<BasePoint>& base_samples,
                                          int pair_count, std::uint64_t seed,
                                          double margin = 0.05);

/// d_n = |phi(n,u1,y) - phi(n,u2,y)| for n = 0..N, with the certificate's
/// bounds re-checked on the way: geometric domination for uniform
/// certificates, strict decrease while d_n > 0 for strict ones.
struct SeparationReport {
    std::vector<double> d;
    double worst_ratio = 0.0;        // max_n d_n / (alpha_hat^n d_0), uniform only
    bool uniform_bound_ok = true;    // d_n <= alpha_hat^n d_0 (1 + 1e-9)
    bool strictly_decreasing = true;
};

SeparationReport separation_decay(const CocycleDef& c, const BaseFlow& flow,
                                  const BasePoint& y, const Vec& u1, const Vec& u2, long N,
                                  const ContractionCertificate* cert = nullptr);

/// The invariant section gamma on a finite anchor orbit sigma(j, y0).
struct SectionEstimate {
    BasePoint y0;
    int m = 0;
    std::vector<Vec> values;  // gamma at sigma(j, y0), j = 0..m-1
    double residual = 0.0;    // max_j |gamma_{j+1} - phi(1, gamma_j, sigma(j,y0))|
    long iterations = 0;
    long warmup = 0;          // extra backward orbit length feeding the left edge
    double alpha_hat = 0.0;
    double tol = 0.0;
};

/// One pullback sweep of the section map: values'[j] = phi(1, values[j-1])
/// over orbit[j-1], with the left edge frozen. orbit and values have equal
/// length; orbit[j] is the base point under values[j].
std::vector<Vec> section_sweep(const CocycleDef& c, const std::vector<BasePoint>& orbit,
                               const std::vector<Vec>& values);

/// Fixed-point iteration for gamma from the zero seed. The orbit is extended
/// warmup = ceil(log(tol)/log(alpha_hat)) steps into the past so the frozen
/// edge is forgotten by the time it reaches the reported range; stops when
/// the sweep's sup-change is <= tol. Requires a uniform certificate.
SectionEstimate solve_section(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y0,
                              int m, double tol, long max_iter,
                              const ContractionCertificate& cert);

/// Checks prod_{k<n} omega(sigma(k,y)) <= calN * nu^n for n = 1..N in log
/// space (equality-tolerant at 1e-9); reports the worst ratio and where.
struct ProductReport {
    bool ok = false;
    double worst_ratio = 0.0;
    long worst_n = 0;
};

ProductReport product_condition(const std::function<double(const BasePoint&)>& omega_vals,
                                const BaseFlow& flow, const BasePoint& y, long N,
                                double calN, double nu);

/// (1/n) sum_{k<n} ln omega(sigma(k,y)).
double birkhoff_mu(const std::function<double(const BasePoint&)>& omega_vals,
                   const BaseFlow& flow, const BasePoint& y, long n);

/// Evolves every point of every fiber forward T steps from the fiber's own
/// base point and reports the max pairwise distance at T; singleton fibers
/// pass vacuously.
struct WeakConvergenceReport {
    struct Fiber {
        int index = 0;
        size_t point_count = 0;
        double max_pairwise = 0.0;
        bool ok = true;
    };
    std::vector<Fiber> fibers;
    bool all_ok = true;
};

WeakConvergenceReport weak_convergence_probe(const CocycleDef& c, const BaseFlow& flow,
                                             const AttractorEstimate& est, long horizon,
                                             double tol);

}  // namespace cocycle
