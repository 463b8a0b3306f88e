#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stablenoise {

// (1/n) sum exp(i theta x_j)
std::complex<double> empirical_char_fn(std::span<const double> x, double theta);

// max over the grid of |empirical - target|
double char_distance(std::span<const double> x, const std::function<std::complex<double>(double)>& target,
                     std::span<const double> thetas);

// Evenly spaced theta grid on [-T, T] without 0.
std::vector<double> theta_grid(double T, int count);

struct ks_result {
    double statistic = 0.0;
    double pvalue = 1.0;
    double n_eff = 0.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic p-value; n, m >= 100.
ks_result ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample KS against a continuous CDF; n >= 100.
ks_result ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

// Hill estimate of the tail index from the k largest |x|; 0 < k < n/2.
double hill_estimator(std::span<const double> x, std::size_t k);

struct chi2_result {
    double statistic = 0.0;
    int dof = 0;
    double pvalue = 1.0;
};

// Pearson goodness of fit; expected counts must be positive.
chi2_result chi_square_test(std::span<const double> observed, std::span<const double> expected, int fitted = 0);

struct sample_stats {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  // of the mean
    std::size_t n = 0;
};

sample_stats describe(std::span<const double> x);

// Standard error of the sample variance (fourth-moment estimate).
double variance_std_error(std::span<const double> x);

// Median of |x|; a scale estimate that exists for every alpha.
double median_abs(std::span<const double> x);

// Replica values, one row per replica and one column per point.
struct replica_set {
    std::vector<std::string> columns;
    std::vector<double> values;  // row-major

    std::size_t rows() const { return columns.empty() ? 0 : values.size() / columns.size(); }
    std::vector<double> column(std::size_t j) const;
    // replica,point,value with 17 significant digits
    std::string to_csv() const;
};

struct convergence_report {
    std::string parameter;              // name of the schedule parameter
    std::vector<double> schedule;
    std::vector<double> ks;
    std::vector<double> pvalues;
    std::vector<double> char_distance;  // empty when no target given
    double level = 0.01;
    bool decreasing = false;
    bool final_accepted = false;
    bool pass = false;

    std::string to_json() const;
};

struct convergence_options {
    std::string parameter = "h";
    double level = 0.01;
    std::vector<double> thetas = {0.25, 0.5, 1.0, 2.0, 4.0};
    bool require_final_acceptance = true;
};

// For each schedule value s, compares sample(s) with the reference sample
// (KS) and with target (char distance, when set). pass requires strictly
// decreasing KS statistics and, optionally, p >= level at the last value.
convergence_report convergence_study(const std::vector<double>& schedule,
                                     const std::function<std::vector<double>(double)>& sample,
                                     std::span<const double> reference,
                                     const std::function<std::complex<double>(double)>& target = {},
                                     const convergence_options& o = {});

}  // namespace stablenoise
