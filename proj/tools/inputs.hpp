#pragma once

#include <string>
#include <vector>

#include "stablenoise/filter.hpp"
#include "stablenoise/space.hpp"

namespace stablenoise::cli {

// "0.5,0.1,0.02"; strictly monotone when `monotone` is set.
std::vector<double> parse_list(const std::string& s, const std::string& what, bool monotone = false);

// identity
// geometric:r,K
// power:beta,K[,c0[,minus]]   (plus weight 1)
// coeffs:c_-K,...,c_K
filter_spec parse_filter(const std::string& s);

// box(a1,b1[,a2,b2,...]) or sphere(q)
space_ptr parse_space(const std::string& s);

// Rows of comma or whitespace separated reals; '#' starts a comment and a
// non-numeric first line is taken as a header.
std::vector<std::vector<double>> read_points(const std::string& path);

}  // namespace stablenoise::cli
