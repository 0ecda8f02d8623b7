#include "cg/stats.hpp"

#include <algorithm>
#include <cmath>

namespace cg {

double kolmogorov_pvalue(double d, std::size_t n) {
    double sn = std::sqrt(static_cast<double>(n));
    double lam = (sn + 0.12 + 0.11 / sn) * d;
    if (lam < 0.2) return 1.0;
    double sum = 0, sign = 1;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * k * k * lam * lam);
        sum += sign * term;
        if (term < 1e-18) break;
        sign = -sign;
    }
    return std::clamp(2 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return {d, kolmogorov_pvalue(d, xs.size())};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

MeanErr mean_stderr(const std::vector<double>& x) {
    double n = static_cast<double>(x.size());
    double m = 0;
    for (double v : x) m += v;
    m /= n;
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (n - 1) / n)};
}

} // namespace cg
