#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace iprob::stats {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

// median of per-block means, spread-based standard error (32 blocks default)
MeanStderr median_of_means(const std::vector<double>& xs, int blocks = 32);

// Pearson chi-square p-value of observed counts against expected
// probabilities; bins with expected count < 5 are pooled.
double chisq_pvalue(const std::map<std::int64_t, std::int64_t>& observed,
                    const std::map<std::int64_t, double>& probabilities, std::int64_t n_samples);

// two-sample Kolmogorov-Smirnov asymptotic p-value
double ks2_pvalue(std::vector<double> a, std::vector<double> b);

// total variation distance between an empirical law (counts) and a pmf
double tv_distance(const std::map<std::int64_t, std::int64_t>& counts,
                   const std::map<std::int64_t, double>& pmf, std::int64_t n_samples);

double regularized_gamma_q(double a, double x);  // upper incomplete / Gamma(a)

}  // namespace iprob::stats
