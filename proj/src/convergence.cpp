#include "cocycle/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cocycle {

namespace {

double quotient(const CocycleDef& c, const BasePoint& y, const Vec& u1, const Vec& u2) {
    const double den = (u1 - u2).norm();
    if (den == 0.0) return 0.0;
    return (step(c, y, u1) - step(c, y, u2)).norm() / den;
}

double unit_double(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace

ContractionCertificate verify_contraction(const CocycleDef& c, const BaseFlow& flow,
                                          const std::vector<Vec>& fiber_grid,
                                          const std::vector<BasePoint>& base_samples,
                                          int pair_count, std::uint64_t seed, double margin) {
    if (pair_count < 1) throw DomainError("verify_contraction: pair_count must be >= 1");
    if (fiber_grid.size() < 2) throw DomainError("verify_contraction: grid must hold >= 2 points");
    if (base_samples.empty()) throw DomainError("verify_contraction: no base samples");
    (void)flow;

    ContractionCertificate cert;
    cert.margin = margin;
    cert.alpha_hat = -1.0;

    auto consider = [&](const BasePoint& y, const Vec& u1, const Vec& u2) {
        if ((u1 - u2).norm() == 0.0) return;
        const double q = quotient(c, y, u1, u2);
        ++cert.samples;
        if (q > cert.alpha_hat) {
            cert.alpha_hat = q;
            cert.witness_y = y;
            cert.witness_u1 = u1;
            cert.witness_u2 = u2;
        }
    };

    Vec lo = fiber_grid.front(), hi = fiber_grid.front();
    for (const auto& u : fiber_grid) {
        lo = lo.cwiseMin(u);
        hi = hi.cwiseMax(u);
    }

    for (const auto& y : base_samples) {
        for (size_t i = 0; i + 1 < fiber_grid.size(); ++i)
            consider(y, fiber_grid[i], fiber_grid[i + 1]);
        // centered tiny pairs catch sup quotients reached only in the
        // small-separation limit (derivative-type witnesses)
        for (const auto& u : fiber_grid) {
            const double h = 1e-6 * std::max(1.0, u.lpNorm<Eigen::Infinity>());
            for (Eigen::Index ax = 0; ax < u.size(); ++ax) {
                Vec a = u, b = u;
                a[ax] -= h;
                b[ax] += h;
                consider(y, a, b);
            }
        }
    }

    std::mt19937_64 gen(seed);
    for (int k = 0; k < pair_count; ++k) {
        const auto& y = base_samples[static_cast<size_t>(gen() % base_samples.size())];
        Vec u1(lo.size()), u2(lo.size());
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            u1[i] = lo[i] + (hi[i] - lo[i]) * unit_double(gen);
            u2[i] = lo[i] + (hi[i] - lo[i]) * unit_double(gen);
        }
        consider(y, u1, u2);
    }

    if (cert.alpha_hat < 0.0) cert.alpha_hat = 0.0;
    if (cert.alpha_hat < 1.0 - margin)
        cert.kind = ContractionCertificate::Kind::uniform;
    else if (cert.alpha_hat < 1.0)
        cert.kind = ContractionCertificate::Kind::strict;
    else
        cert.kind = ContractionCertificate::Kind::violated;
    return cert;
}

SeparationReport separation_decay(const CocycleDef& c, const BaseFlow& flow,
                                  const BasePoint& y, const Vec& u1, const Vec& u2, long N,
                                  const ContractionCertificate* cert) {
    if (N < 1) throw DomainError("separation_decay: need N >= 1");
    if ((u1 - u2).norm() == 0.0) throw DomainError("separation_decay: u1 and u2 coincide");
    const Trajectory a = evolve(c, flow, y, u1, N);
    const Trajectory b = evolve(c, flow, y, u2, N);

    SeparationReport report;
    report.d.reserve(static_cast<size_t>(N) + 1);
    for (long n = 0; n <= N; ++n)
        report.d.push_back((a.state_at(n) - b.state_at(n)).norm());

    if (cert != nullptr && cert->kind == ContractionCertificate::Kind::uniform) {
        const double d0 = report.d.front();
        double bound = d0;
        for (long n = 1; n <= N; ++n) {
            bound *= cert->alpha_hat;
            const double ratio = (bound > 0.0)
                                     ? report.d[static_cast<size_t>(n)] / bound
                                     : (report.d[static_cast<size_t>(n)] == 0.0 ? 0.0 : 1e300);
            report.worst_ratio = std::max(report.worst_ratio, ratio);
            if (!(report.d[static_cast<size_t>(n)] <= bound * (1.0 + 1e-9)))
                report.uniform_bound_ok = false;
        }
    }
    if (cert != nullptr && cert->kind != ContractionCertificate::Kind::violated) {
        for (long n = 0; n < N; ++n) {
            const double dn = report.d[static_cast<size_t>(n)];
            if (dn > 0.0 && !(report.d[static_cast<size_t>(n + 1)] < dn)) {
                report.strictly_decreasing = false;
                break;
            }
            if (dn == 0.0) break;
        }
    }
    return report;
}

std::vector<Vec> section_sweep(const CocycleDef& c, const std::vector<BasePoint>& orbit,
                               const std::vector<Vec>& values) {
    if (orbit.size() != values.size() || values.empty())
        throw DomainError("section_sweep: orbit and values must match and be nonempty");
    std::vector<Vec> next(values.size());
    next[0] = values[0];  // frozen left edge
    for (size_t j = 1; j < values.size(); ++j) next[j] = step(c, orbit[j - 1], values[j - 1]);
    return next;
}

SectionEstimate solve_section(const CocycleDef& c, const BaseFlow& flow, const BasePoint& y0,
                              int m, double tol, long max_iter,
                              const ContractionCertificate& cert) {
    if (cert.kind != ContractionCertificate::Kind::uniform)
        throw DiagnosticError("solve_section: a uniform contraction certificate is required");
    if (m < 1) throw DomainError("solve_section: orbit length must be >= 1");
    if (!(tol > 0.0)) throw DomainError("solve_section: tol must be positive");
    if (max_iter < 1) throw DomainError("solve_section: max_iter must be >= 1");

    const double alpha = cert.alpha_hat;
    long warmup = 1;
    if (alpha > 0.0 && alpha < 1.0)
        warmup = std::max<long>(1, static_cast<long>(std::ceil(std::log(tol) / std::log(alpha))));

    const size_t total = static_cast<size_t>(warmup) + static_cast<size_t>(m);
    std::vector<BasePoint> orbit(total);
    for (size_t idx = 0; idx < total; ++idx)
        orbit[idx] = advance(flow, y0, static_cast<double>(static_cast<long>(idx) - warmup));

    std::vector<Vec> eta(total, Vec::Zero(c.fiber_dim));
    long iterations = 0;
    double change = std::numeric_limits<double>::infinity();
    while (change > tol) {
        if (iterations >= max_iter)
            throw ConvergenceError("solve_section: no convergence after " +
                                       std::to_string(max_iter) +
                                       " sweeps; last sup-change " + std::to_string(change),
                                   change);
        std::vector<Vec> next = section_sweep(c, orbit, eta);
        change = 0.0;
        for (size_t j = 1; j < total; ++j) change = std::max(change, (next[j] - eta[j]).norm());
        eta = std::move(next);
        ++iterations;
    }

    SectionEstimate est;
    est.y0 = y0;
    est.m = m;
    est.iterations = iterations;
    est.warmup = warmup;
    est.alpha_hat = alpha;
    est.tol = tol;
    est.values.assign(eta.begin() + warmup, eta.end());
    for (int j = 0; j + 1 < m; ++j) {
        const double r =
            (est.values[static_cast<size_t>(j) + 1] -
             step(c, orbit[static_cast<size_t>(warmup + j)], est.values[static_cast<size_t>(j)]))
                .norm();
        est.residual = std::max(est.residual, r);
    }
    return est;
}

ProductReport product_condition(const std::function<double(const BasePoint&)>& omega_vals,
                                const BaseFlow& flow, const BasePoint& y, long N,
                                double calN, double nu) {
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("product_condition: nu must lie in (0,1)");
    if (!(calN > 0.0)) throw DomainError("product_condition: calN must be positive");
    if (N < 1) throw DomainError("product_condition: need N >= 1");

    ProductReport report;
    report.ok = true;
    const double log_calN = std::log(calN);
    const double log_nu = std::log(nu);
    double log_prod = 0.0;
    BasePoint yk = y;
    for (long n = 1; n <= N; ++n) {
        const double w = omega_vals(yk);
        if (!(w > 0.0)) throw DomainError("product_condition: omega must be positive on the orbit");
        log_prod += std::log(w);
        const double log_gap = log_prod - (log_calN + n * log_nu);
        if (log_gap > 1e-9) report.ok = false;
        const double ratio = std::exp(log_gap);
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_n = n;
        }
        yk = advance(flow, yk, 1.0);
    }
    return report;
}

double birkhoff_mu(const std::function<double(const BasePoint&)>& omega_vals,
                   const BaseFlow& flow, const BasePoint& y, long n) {
    if (n < 1) throw DomainError("birkhoff_mu: need n >= 1");
    double sum = 0.0;
    BasePoint yk = y;
    for (long k = 0; k < n; ++k) {
        const double w = omega_vals(yk);
        if (!(w > 0.0)) throw DomainError("birkhoff_mu: omega must be positive on the orbit");
        sum += std::log(w);
        yk = advance(flow, yk, 1.0);
    }
    return sum / static_cast<double>(n);
}

WeakConvergenceReport weak_convergence_probe(const CocycleDef& c, const BaseFlow& flow,
                                             const AttractorEstimate& est, long horizon,
                                             double tol) {
    if (horizon < 1) throw DomainError("weak_convergence_probe: need horizon >= 1");
    WeakConvergenceReport report;
    for (size_t f = 0; f < est.fibers.size(); ++f) {
        WeakConvergenceReport::Fiber entry;
        entry.index = static_cast<int>(f);
        entry.point_count = est.fibers[f].points.size();
        if (entry.point_count >= 2) {
            std::vector<Vec> finals;
            finals.reserve(entry.point_count);
            for (const auto& p : est.fibers[f].points)
                finals.push_back(evolve(c, flow, est.fibers[f].y, p, horizon).states.back());
            for (size_t i = 0; i < finals.size(); ++i)
                for (size_t j = i + 1; j < finals.size(); ++j)
                    entry.max_pairwise = std::max(entry.max_pairwise,
                                                  (finals[i] - finals[j]).norm());
            entry.ok = entry.max_pairwise < tol;
        }
        report.all_ok = report.all_ok && entry.ok;
        report.fibers.push_back(entry);
    }
    return report;
}

}  // namespace cocycle
