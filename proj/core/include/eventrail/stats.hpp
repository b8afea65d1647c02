#pragma once

#include <span>
#include <vector>

namespace eventrail::stats {

// Linear interpolation between closest ranks: for a sorted sample x[0..n-1]
// and probability p, h = (n-1)p and the result is
// x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)]).
// Every quantile in the library (signature bands, wait quartiles, stability
// quartiles) goes through this one function.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::vector<double> values, double p);

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> values);

}  // namespace eventrail::stats
