#include "relsub/parallel.hpp"

#include <cstdlib>
#include <string>

namespace relsub {

namespace {

int g_cap = 0;  // 0 = environment default

int env_threads() {
    static int cached = [] {
        const char* s = std::getenv("RELSUB_THREADS");
        if (!s) return 0;
        try {
            int n = std::stoi(s);
            return n > 0 ? n : 1;
        } catch (...) {
            return 0;
        }
    }();
    return cached;
}

}  // namespace

int max_threads() {
    int cap = g_cap > 0 ? g_cap : env_threads();
#ifdef _OPENMP
    int hw = omp_get_max_threads();
    if (cap <= 0) return hw;
    return cap < hw ? cap : hw;
#else
    return cap > 0 ? 1 : 1;
#endif
}

bool parallel_enabled() {
#ifdef _OPENMP
    return max_threads() > 1;
#else
    return false;
#endif
}

void set_thread_cap(int n) { g_cap = n; }

} // namespace relsub
