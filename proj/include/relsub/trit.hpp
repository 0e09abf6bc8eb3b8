#pragma once

#include <string>

namespace relsub {

/// Three-valued verdict with a numeric margin. `margin` is meaningful for
/// in/out; unknown carries a diagnostic note instead.
struct Trit {
    enum class V { in, out, unknown };
    V v = V::unknown;
    double margin = 0.0;
    std::string note;

    static Trit in(double margin = 0.0) { return {V::in, margin, {}}; }
    static Trit out(double margin = 0.0) { return {V::out, margin, {}}; }
    static Trit unknown(std::string note = {}) { return {V::unknown, 0.0, std::move(note)}; }

    bool is_in() const { return v == V::in; }
    bool is_out() const { return v == V::out; }
    bool is_unknown() const { return v == V::unknown; }

    const char* name() const {
        switch (v) {
            case V::in: return "in";
            case V::out: return "out";
            default: return "unknown";
        }
    }
};

} // namespace relsub
