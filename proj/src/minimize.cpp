#include "cvnoise/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace cvnoise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isnan(v) ? kInf : v; }

}  // namespace

MinimizeResult minimize_periodic(const std::function<double(double)>& f, const GridGoldenOptions& opt) {
    MinimizeResult res;
    res.value = kInf;
    res.argmin = opt.lo;
    auto eval = [&](double x) {
        ++res.evals;
        return sanitize(f(x));
    };

    const int n = std::max(opt.grid, 2);
    const double h = opt.period / n;
    std::vector<double> xs(n), vs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = opt.lo + h * i;
        vs[i] = eval(xs[i]);
        if (vs[i] < res.value) {
            res.value = vs[i];
            res.argmin = xs[i];
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const int k = std::min(opt.brackets, n);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](int a, int b) { return vs[a] < vs[b]; });

    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int r = 0; r < k; ++r) {
        if (!std::isfinite(vs[order[r]])) break;
        double a = xs[order[r]] - h, b = xs[order[r]] + h;
        double c = b - ratio * (b - a), d = a + ratio * (b - a);
        double fc = eval(c), fd = eval(d);
        while (b - a > opt.tolerance) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = eval(d);
            }
        }
        const double x = 0.5 * (a + b);
        const double v = eval(x);
        if (v < res.value) {
            res.value = v;
            res.argmin = x;
        }
    }
    return res;
}

}  // namespace cvnoise
