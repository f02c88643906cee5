// quadrature.hpp — Globally adaptive Gauss-Kronrod (7/15) integration
//
// The integration range is pre-split at caller-supplied breakpoints (peaks,
// oscillation half-periods); the panel with the largest error estimate is
// bisected until the global tolerance is met. No global state: concurrent
// calls are independent.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "qbath/errors.hpp"

namespace qbath::quad {

struct Options {
    double abs_tol{1e-10};
    double rel_tol{1e-9};
    std::size_t max_panels{4'000'000};
};

template <class T>
struct Result {
    T value{};
    double error{0.0};
    std::size_t panels{0};
};

namespace detail {

inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    double floor;  // round-off limit of this panel's estimate
};

// One 15-point Kronrod panel with the QUADPACK error heuristic.
template <class T, class F>
Panel<T> kronrod15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T resk = fc * wgk[7];
    T resg = fc * wg[3];
    double resabs = magnitude(fc) * wgk[7];
    std::array<T, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        resk += (f1[j] + f2[j]) * wgk[j];
        resabs += (magnitude(f1[j]) + magnitude(f2[j])) * wgk[j];
        if (j % 2 == 1) resg += (f1[j] + f2[j]) * wg[j / 2];
    }
    const T mean = resk * 0.5;
    double resasc = magnitude(fc - mean) * wgk[7];
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));
    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = magnitude((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double floor = 50.0 * eps * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(floor, err);
    return {a, b, resk * half, err, floor};
}

} // namespace detail

// Integrate f over [points.front(), points.back()], with the interior points
// used as initial panel boundaries. Points must be sorted ascending.
template <class T, class F>
Result<T> integrate(const F& f, const std::vector<double>& points, const Options& opt = {}) {
    if (points.size() < 2) throw NumericalError("integrate: need at least two breakpoints");
    using detail::Panel;
    auto worse = [](const Panel<T>& x, const Panel<T>& y) { return x.error < y.error; };
    std::priority_queue<Panel<T>, std::vector<Panel<T>>, decltype(worse)> heap(worse);

    T total{};
    double total_err = 0.0;
    double total_floor = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        auto pnl = detail::kronrod15<T>(f, points[i], points[i + 1]);
        total += pnl.value;
        total_err += pnl.error;
        total_floor += pnl.floor;
        heap.push(pnl);
    }
    auto converged = [&] {
        const double target = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
        return total_err <= std::max(target, 2.0 * total_floor);
    };
    while (!converged()) {
        if (heap.size() >= opt.max_panels)
            throw NumericalError("integrate: panel budget exhausted before reaching tolerance");
        Panel<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NumericalError("integrate: panel width reached machine resolution");
        auto left = detail::kronrod15<T>(f, worst.a, mid);
        auto right = detail::kronrod15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in panel order so that the value does not carry the
    // incremental update round-off.
    std::vector<Panel<T>> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
    Result<T> r;
    for (const auto& pnl : panels) {
        r.value += pnl.value;
        r.error += pnl.error;
    }
    r.panels = panels.size();
    return r;
}

template <class T, class F>
Result<T> integrate(const F& f, double a, double b, const Options& opt = {}) {
    return integrate<T>(f, std::vector<double>{a, b}, opt);
}

} // namespace qbath::quad
