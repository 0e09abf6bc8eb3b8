#pragma once

#include <cstdint>
#include <vector>

#include "relsub/subdiff.hpp"

namespace relsub {

/// Sampling schedule for the brute-force estimator. Radii decay geometrically
/// (r0 * rho^j); identical schedules (including seed) give bit-identical
/// results, serial or parallel.
struct Schedule {
    double r0 = 1.0;
    double rho = 0.5;
    int steps = 16;
    int grid_density = 64;
    std::vector<double> epi_offsets{0.0, 1e-6, 1e-3, 1e-1, 1.0};
    std::uint64_t seed = 0;

    std::vector<double> radii() const;
};

/// Flattened epigraph samples near (xbar, f(xbar)): per radius, coefficient
/// pairs (a, b) such that the pairing quotient of the scalar candidate s at
/// that sample is s*a - b.
struct EpiSampleTable {
    std::vector<std::vector<std::pair<double, double>>> per_radius;
};

EpiSampleTable collect_epi_samples_1d(const PiecewiseFunc& f, const ClosedSet& omega,
                                      double xbar, const Schedule& sched);

/// Kernel shared by the reconstruction loops: for every candidate, the
/// extrapolated epigraph limsup quotient (median of the last three per-radius
/// maxima). `serial` forces the reference path; the OpenMP path writes
/// per-candidate slots and folds in index order, so both agree bitwise.
std::vector<double> epi_quotient_kernel(const EpiSampleTable& table,
                                        const std::vector<double>& candidates, bool serial);

/// Sampled limsup of the epsilon-normal pairing quotient over epi f_omega at
/// (xbar, f(xbar)) with functional (xstar, -1).
double quotient_limsup_epi(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                           const Vec& xstar, const Schedule& sched);

/// Sampled tangent-cone membership: dist(xbar + t v, S)/t along the radius
/// schedule.
Trit tangent_member(const ClosedSet& s, const Vec& xbar, const Vec& v, const Schedule& sched,
                    double tol);

/// Sampled membership of xstar in the eps-regular subdifferential relative to
/// omega (quotient test + tangent test).
Trit member_eps_regular(const PiecewiseFunc& f, const ClosedSet& omega, const Vec& xbar,
                        const Vec& xstar, double eps, const Schedule& sched, double tol);

struct CandidateSample {
    double candidate;
    Trit verdict;
};

/// Brute-force reconstruction of the 1-D eps-regular relative subdifferential
/// over a candidate grid with boundary bisection. Unbounded sets are capped
/// at the grid bound and flagged.
SubdiffSet reconstruct_1d(const PiecewiseFunc& f, const ClosedSet& omega, double xbar, double eps,
                          const Schedule& sched, double tol,
                          std::vector<CandidateSample>* csv = nullptr);

/// Sampled limiting subdifferential relative to omega: reconstructions along
/// admissible approach points with eps_k tied to the radius schedule, combined
/// by the numerical outer limit.
SubdiffSet limiting_estimate(const PiecewiseFunc& f, const ClosedSet& omega, double xbar,
                             const Schedule& sched);

} // namespace relsub
