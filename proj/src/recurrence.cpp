#include "cocycle/recurrence.hpp"

#include <algorithm>
#include <cmath>

namespace cocycle {

AlmostPeriodReport almost_periods(const Trajectory& traj, const BaseFlow& flow,
                                  double eps, long scan_max) {
    if (!(eps > 0.0)) throw DomainError("almost_periods: epsilon must be positive");
    if (scan_max < 1) throw DomainError("almost_periods: scan range must reach at least 1");
    const long len = traj.t_max() - traj.t_min();
    if (len < 4 * scan_max)
        throw DiagnosticError("almost_periods: window too small for scan range " +
                              std::to_string(scan_max) + "; need half-width N >= " +
                              std::to_string(2 * scan_max));
    const bool with_base = !traj.base_orbit.empty();

    AlmostPeriodReport report;
    report.epsilon = eps;
    report.t_lo = traj.t_min();
    report.t_hi = traj.t_max();
    report.scan_max = scan_max;
    report.edge_margin = scan_max;
    report.sup_displacement.resize(static_cast<size_t>(scan_max), 0.0);

    const long count = len + 1;
    for (long tau = 1; tau <= scan_max; ++tau) {
        double sup = 0.0;
        for (long i = 0; i + tau < count; ++i) {
            const auto a = static_cast<size_t>(i);
            const auto b = static_cast<size_t>(i + tau);
            double d = (traj.states[b] - traj.states[a]).norm();
            if (with_base)
                d = std::max(d, base_distance(flow, traj.base_orbit[b], traj.base_orbit[a]));
            sup = std::max(sup, d);
        }
        report.sup_displacement[static_cast<size_t>(tau - 1)] = sup;
        if (sup < eps) report.periods.push_back(tau);
    }

    long gap = 0, prev = 0;
    for (long p : report.periods) {
        gap = std::max(gap, p - prev);
        prev = p;
    }
    report.max_gap = gap;
    // dense at the scanned scale: gaps do not grow toward the scan edge
    report.relatively_dense =
        !report.periods.empty() && (scan_max - report.periods.back()) <= report.max_gap;
    return report;
}

bool relative_density(const AlmostPeriodReport& report, long L) {
    if (L < 1) throw DomainError("relative_density: segment length must be positive");
    if (report.scan_max < 3 * L)
        throw DiagnosticError("relative_density: scan range " + std::to_string(report.scan_max) +
                              " too short to judge segments of length " + std::to_string(L) +
                              "; need at least " + std::to_string(3 * L));
    if (report.periods.empty()) return false;
    long prev = 0;
    for (long p : report.periods) {
        if (p - prev > L) return false;  // the segment [prev+1, prev+L] has no period
        prev = p;
    }
    return report.scan_max - prev < L;  // trailing segment, when it fits in range
}

TailReport asymptotic_match(const Trajectory& traj, const Trajectory& ref,
                            long tail_start, double tol) {
    const long lo = std::max({traj.t_min(), ref.t_min(), tail_start});
    const long hi = std::min(traj.t_max(), ref.t_max());
    if (lo > hi)
        throw DiagnosticError("asymptotic_match: trajectories do not overlap beyond t = " +
                              std::to_string(tail_start));
    TailReport report;
    report.t_start = lo;
    report.tol = tol;
    report.d.reserve(static_cast<size_t>(hi - lo + 1));
    for (long t = lo; t <= hi; ++t)
        report.d.push_back((traj.state_at(t) - ref.state_at(t)).norm());
    const size_t n = report.d.size();
    const size_t quarter_start = n - std::max<size_t>(n / 4, 1);
    for (size_t k = quarter_start; k < n; ++k)
        report.tail_max = std::max(report.tail_max, report.d[k]);
    report.verdict = report.tail_max < tol;
    return report;
}

std::vector<CompatibilityVerdict> compatibility_probe(
    const Trajectory& traj, const BaseFlow& flow,
    const std::vector<std::vector<long>>& candidate_sequences, double delta,
    double delta_prime) {
    if (traj.base_orbit.empty())
        throw DiagnosticError("compatibility_probe: trajectory carries no base orbit");
    std::vector<CompatibilityVerdict> verdicts;
    for (const auto& seq : candidate_sequences) {
        CompatibilityVerdict v;
        bool inside = !seq.empty();
        for (long t : seq)
            if (t < traj.t_min() || t > traj.t_max()) inside = false;
        if (!inside) {
            v.skipped = true;
            v.note = seq.empty() ? "empty sequence" : "sequence leaves the trajectory window";
            verdicts.push_back(v);
            continue;
        }
        for (size_t i = 0; i < seq.size(); ++i) {
            for (size_t j = i + 1; j < seq.size(); ++j) {
                v.base_diameter = std::max(
                    v.base_diameter,
                    base_distance(flow, traj.base_at(seq[i]), traj.base_at(seq[j])));
                v.fiber_diameter = std::max(
                    v.fiber_diameter, (traj.state_at(seq[i]) - traj.state_at(seq[j])).norm());
            }
        }
        v.base_ok = v.base_diameter <= delta;
        v.fiber_ok = v.fiber_diameter <= delta_prime;
        v.implication = !v.base_ok || v.fiber_ok;
        verdicts.push_back(v);
    }
    return verdicts;
}

}  // namespace cocycle
