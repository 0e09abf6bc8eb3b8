#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <vector>

namespace relsub {

/// Point/vector in R^n, n <= 3.
struct Vec {
    int dim = 1;
    std::array<double, 3> x{0.0, 0.0, 0.0};

    Vec() = default;
    explicit Vec(double a) : dim(1), x{a, 0.0, 0.0} {}
    Vec(double a, double b) : dim(2), x{a, b, 0.0} {}
    Vec(double a, double b, double c) : dim(3), x{a, b, c} {}
    static Vec zero(int d) {
        Vec v;
        v.dim = d;
        return v;
    }
    static Vec from(const std::vector<double>& c) {
        assert(c.size() >= 1 && c.size() <= 3);
        Vec v;
        v.dim = static_cast<int>(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) v.x[i] = c[i];
        return v;
    }

    double operator[](int i) const { return x[i]; }
    double& operator[](int i) { return x[i]; }

    friend Vec operator+(Vec a, const Vec& b) {
        for (int i = 0; i < a.dim; ++i) a.x[i] += b.x[i];
        return a;
    }
    friend Vec operator-(Vec a, const Vec& b) {
        for (int i = 0; i < a.dim; ++i) a.x[i] -= b.x[i];
        return a;
    }
    friend Vec operator*(double s, Vec a) {
        for (int i = 0; i < a.dim; ++i) a.x[i] *= s;
        return a;
    }
    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.x[i] != b.x[i]) return false;
        return true;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a.x[i] * b.x[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    assert(n > 0.0);
    return (1.0 / n) * a;
}

} // namespace relsub
