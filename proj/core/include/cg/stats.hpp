#pragma once

#include <functional>
#include <vector>

namespace cg {

// Two-sided one-sample Kolmogorov-Smirnov test against a continuous CDF.
struct KsResult {
    double d = 0;
    double p = 0;
};
KsResult ks_test(std::vector<double> xs, const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov tail Q(lambda) with Stephens' small-sample correction.
double kolmogorov_pvalue(double d, std::size_t n);

struct LinearFit {
    double slope = 0, intercept = 0, r2 = 0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct MeanErr {
    double mean = 0, stderr_ = 0;
};
MeanErr mean_stderr(const std::vector<double>& x);

} // namespace cg
