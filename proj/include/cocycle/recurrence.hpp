#pragma once

#include "cocycle/base_flow.hpp"
#include "cocycle/cocycle.hpp"
#include "cocycle/types.hpp"

#include <string>
#include <vector>

namespace cocycle {

/// Finite-window almost-period scan result. All claims are scale-qualified:
/// the window, epsilon and scan range always travel with the verdict.
struct AlmostPeriodReport {
    double epsilon = 0.0;
    long t_lo = 0, t_hi = 0;      // scanned trajectory window
    long scan_max = 0;            // shifts tried: tau = 1..scan_max
    std::vector<long> periods;    // taus whose sup displacement < epsilon
    std::vector<double> sup_displacement;  // per tau, index tau-1
    long max_gap = 0;             // gap structure of periods, measured from 0
    bool relatively_dense = false;
    long edge_margin = 0;         // window length sacrificed to shifting
};

/// tau is an epsilon-almost period iff the sup over t of the product-metric
/// distance between trajectory points t+tau and t stays below epsilon.
/// The metric is max(fiber Euclidean, base circular distance) when the
/// trajectory carries a base orbit, fiber-only otherwise.
AlmostPeriodReport almost_periods(const Trajectory& traj, const BaseFlow& flow,
                                  double eps, long scan_max);

/// True iff every length-L integer segment inside [1, scan_max] contains a
/// detected period. Requires the report to have scanned at least 3L.
bool relative_density(const AlmostPeriodReport& report, long L);

/// Forward-tail comparison of two trajectories; the verdict checks the max
/// distance over the last quarter of the overlap against tol.
struct TailReport {
    long t_start = 0;
    std::vector<double> d;  // d[k] = |u_{t_start+k} - u^ref_{t_start+k}|
    double tail_max = 0.0;
    double tol = 0.0;
    bool verdict = false;
};

TailReport asymptotic_match(const Trajectory& traj, const Trajectory& ref,
                            long tail_start, double tol);

/// Finite-scale comparability probe: along each candidate time sequence,
/// base returns within delta should force fiber returns within delta_prime.
struct CompatibilityVerdict {
    bool skipped = false;
    std::string note;
    double base_diameter = 0.0;
    double fiber_diameter = 0.0;
    bool base_ok = false;
    bool fiber_ok = false;
    bool implication = false;  // base_ok => fiber_ok
};

std::vector<CompatibilityVerdict> compatibility_probe(
    const Trajectory& traj, const BaseFlow& flow,
    const std::vector<std::vector<long>>& candidate_sequences, double delta,
    double delta_prime);

}  // namespace cocycle
