#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration and compensated
// summation. Header-only so the integrands inline into the hot loops of the
// Matsubara sums.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace casimir {

/// Neumaier's variant of Kahan summation. Order-dependent but deterministic:
/// adding the same sequence always yields the same bits.
class NeumaierSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    NeumaierSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double abs_value;  // integral of |f|, for the roundoff floor
};

/// One 15-point Kronrod panel with the QUADPACK error heuristic. The nodes
/// are interior, so f is never evaluated at lo or hi.
template <class F>
Panel kronrod15(F& f, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    std::array<double, 7> f_left{};
    std::array<double, 7> f_right{};
    const double f_center = f(center);

    double res_kronrod = f_center * kKronrodWeights[7];
    double res_gauss = f_center * kGaussWeights[3];
    double res_abs = std::abs(res_kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        f_left[j] = f(center - dx);
        f_right[j] = f(center + dx);
        const double pair = f_left[j] + f_right[j];
        res_kronrod += kKronrodWeights[j] * pair;
        res_abs += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1) res_gauss += kGaussWeights[j / 2] * pair;
    }

    const double mean = 0.5 * res_kronrod;
    double res_asc = kKronrodWeights[7] * std::abs(f_center - mean);
    for (int j = 0; j < 7; ++j) {
        res_asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }

    const double hlen = std::abs(half);
    double err = std::abs((res_kronrod - res_gauss) * half);
    res_asc *= hlen;
    res_abs *= hlen;
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * res_abs, err);
    }
    return Panel{lo, hi, res_kronrod * half, err, res_abs};
}

}  // namespace detail

/// Integrates f over [lo, hi] by repeatedly bisecting the panel with the
/// largest error estimate until the total error is below
/// max(abs_tol, rel_tol * |I|) or max_subdivisions panels exist.
///
/// Convergence is also declared when the remaining error sits at the
/// floating-point floor (about 100 ulp of the integral of |f|), since further
/// bisection cannot reduce it.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double lo, double hi, double rel_tol,
                                    double abs_tol = 0.0, int max_subdivisions = 200) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto worse = [](const detail::Panel& a, const detail::Panel& b) { return a.error < b.error; };

    std::vector<detail::Panel> heap;
    heap.reserve(static_cast<std::size_t>(max_subdivisions) + 1);
    heap.push_back(detail::kronrod15(f, lo, hi));

    auto totals = [&heap](double& value, double& error, double& abs_value) {
        NeumaierSum v;
        NeumaierSum e;
        NeumaierSum a;
        for (const auto& p : heap) {
            v += p.value;
            e += p.error;
            a += p.abs_value;
        }
        value = v.value();
        error = e.value();
        abs_value = a.value();
    };

    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;
    totals(value, error, abs_value);

    auto done = [&] {
        const double target = std::max({abs_tol, rel_tol * std::abs(value), 100.0 * eps * abs_value});
        return error <= target;
    };

    while (!done() && static_cast<int>(heap.size()) < max_subdivisions) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        const detail::Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // Panel cannot be split further in double precision.
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        heap.push_back(detail::kronrod15(f, worst.lo, mid));
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(detail::kronrod15(f, mid, worst.hi));
        std::push_heap(heap.begin(), heap.end(), worse);
        totals(value, error, abs_value);
    }

    return QuadratureResult{value, error, static_cast<int>(heap.size()), done()};
}

}  // namespace casimir
