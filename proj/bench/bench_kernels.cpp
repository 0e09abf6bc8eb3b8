// Timing harness for the estimator grid kernels: OpenMP path vs the serial
// reference, plus a whole-query reconstruction comparison.

#include <chrono>
#include <cstdio>

#include "relsub/estimator.hpp"
#include "relsub/parallel.hpp"
#include "relsub/problem.hpp"

using namespace relsub;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PiecewiseFunc make_fn() {
    std::vector<Piece> ps;
    ps.push_back(Piece{GuardRegion::interval(parse_interval_set("(-1, inf)")),
                       parse_expr("1/(x+1) - 1 + exp(x)")});
    PiecewiseFunc f(1, std::move(ps));
    validate(f);
    return f;
}

}  // namespace

int main() {
    PiecewiseFunc f = make_fn();
    ClosedSet omega = ClosedSet::interval1d(parse_interval_set("[-0.5, 2]"));
    Schedule sched;
    sched.grid_density = 256;

    EpiSampleTable table = collect_epi_samples_1d(f, omega, 0.25, sched);
    std::size_t rows = 0;
    for (const auto& r : table.per_radius) rows += r.size();

    const int n_cand = 1 << 15;
    std::vector<double> cands(n_cand);
    for (int i = 0; i < n_cand; ++i) cands[i] = -12.0 + 24.0 * i / (n_cand - 1);

    std::printf("epi quotient kernel: %zu samples x %d candidates, %d thread(s)\n", rows, n_cand,
                max_threads());

    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> serial = epi_quotient_kernel(table, cands, true);
    double ts = seconds(t0);

    t0 = std::chrono::steady_clock::now();
    std::vector<double> parallel = epi_quotient_kernel(table, cands, false);
    double tp = seconds(t0);

    bool identical = serial == parallel;
    std::printf("  serial    %8.3f ms\n", 1e3 * ts);
    std::printf("  parallel  %8.3f ms   speedup %.2fx   bitwise-equal %s\n", 1e3 * tp, ts / tp,
                identical ? "yes" : "NO");

    t0 = std::chrono::steady_clock::now();
    SubdiffSet wide = reconstruct_1d(f, omega, 0.25, 0.1, sched, 1e-4);
    double tw = seconds(t0);

    set_thread_cap(1);
    t0 = std::chrono::steady_clock::now();
    SubdiffSet narrow = reconstruct_1d(f, omega, 0.25, 0.1, sched, 1e-4);
    double tn = seconds(t0);
    set_thread_cap(0);

    std::printf("reconstruct_1d: parallel %.3f ms, single-thread %.3f ms, sets %s\n", 1e3 * tw,
                1e3 * tn, wide.set == narrow.set ? "match" : "DIFFER");
    std::printf("  set = %s\n", wide.set.to_string().c_str());
    return identical && wide.set == narrow.set ? 0 : 1;
}
