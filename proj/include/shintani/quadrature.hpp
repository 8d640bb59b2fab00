#pragma once

#include "shintani/numeric.hpp"

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace shintani::quad {

template <class T>
struct Rule {
    std::vector<T> nodes;    // on [-1, 1]
    std::vector<T> weights;
};

namespace detail {
template <class T>
Rule<T> compute_rule(int n) {
    using std::cos;
    using std::abs;
    Rule<T> r;
    r.nodes.resize(n);
    r.weights.resize(n);
    T eps;
    if constexpr (std::is_same_v<T, double>) eps = 1e-15;
    else eps = T(1) / T("1e48");
    const double pid = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        T x = T(std::cos(pid * (i + 0.75) / (n + 0.5)));
        T dp(0);
        for (int it = 0; it < 100; ++it) {
            T p0(1), p1(x);
            for (int j = 2; j <= n; ++j) {
                T p2 = (T(2 * j - 1) * x * p1 - T(j - 1) * p0) / T(j);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = T(1);
            dp = T(n) * (x * p1 - p0) / (x * x - T(1));
            T dx = p1 / dp;
            x -= dx;
            if (abs(dx) < eps) {
                // refresh derivative at the converged node
                p0 = T(1);
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    T p2 = (T(2 * j - 1) * x * p1 - T(j - 1) * p0) / T(j);
                    p0 = p1;
                    p1 = p2;
                }
                dp = T(n) * (x * p1 - p0) / (x * x - T(1));
                break;
            }
        }
        T w = T(2) / ((T(1) - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.weights[i] = w;
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    return r;
}
}  // namespace detail

// Cached Gauss-Legendre rule; thread-safe.
template <class T>
const Rule<T>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, Rule<T>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_rule<T>(n)).first;
    return it->second;
}

template <class T, class F>
auto fixed_gl(F&& f, const T& a, const T& b, int n) -> decltype(f(a)) {
    const auto& r = gauss_legendre<T>(n);
    T half = (b - a) / 2, mid = (a + b) / 2;
    decltype(f(a)) s{};
    for (int i = 0; i < n; ++i) s += f(mid + half * r.nodes[i]) * r.weights[i];
    return s * half;
}

template <class V>
struct Result {
    V value{};
    double error_estimate = 0.0;
    bool converged = true;
    long evaluations = 0;
};

struct Options {
    double abs_tol = 1e-25;
    int nodes = 24;          // per panel
    int max_depth = 40;
    int initial_panels = 1;
    long max_evaluations = 400000;  // beyond this, remaining panels are accepted as they stand
};

template <class V>
double magnitude(const V& v) {
    using std::abs;
    if constexpr (std::is_same_v<V, Complex>) return to_double(shintani::abs(v));
    else if constexpr (std::is_same_v<V, Real>) return to_double(abs(v));
    else return static_cast<double>(abs(v));
}

// Adaptive composite Gauss-Legendre: a panel is accepted when its n-node value
// agrees with the sum over its two halves.
template <class T, class F>
auto adaptive(F&& f, const T& a, const T& b, Options opt = {}) -> Result<decltype(f(a))> {
    using V = decltype(f(a));
    Result<V> res;
    if (a == b) return res;
    struct Panel { T lo, hi; V whole; int depth; };
    std::vector<Panel> stack;
    T width = (b - a) / T(opt.initial_panels);
    for (int i = opt.initial_panels - 1; i >= 0; --i) {
        T lo = a + width * T(i), hi = (i + 1 == opt.initial_panels) ? b : a + width * T(i + 1);
        stack.push_back({lo, hi, fixed_gl(f, lo, hi, opt.nodes), 0});
        res.evaluations += opt.nodes;
    }
    double total_width = magnitude(T(b - a));
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        T m = (p.lo + p.hi) / 2;
        V left = fixed_gl(f, p.lo, m, opt.nodes);
        V right = fixed_gl(f, m, p.hi, opt.nodes);
        res.evaluations += 2 * opt.nodes;
        double diff = magnitude(V(left + right - p.whole));
        double share = opt.abs_tol * magnitude(T(p.hi - p.lo)) / total_width;
        if (diff <= share || p.depth >= opt.max_depth || res.evaluations >= opt.max_evaluations) {
            if (diff > share) res.converged = false;
            res.value += left + right;
            res.error_estimate += diff;
        } else {
            stack.push_back({m, p.hi, right, p.depth + 1});
            stack.push_back({p.lo, m, left, p.depth + 1});
        }
    }
    return res;
}

}  // namespace shintani::quad
