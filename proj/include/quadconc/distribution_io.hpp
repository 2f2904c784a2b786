#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "quadconc/distribution.hpp"

namespace quadconc {

// JSON forms:
//   {"kind": "gaussian", "sigma": 1.0}
//   {"kind": "uniform", "half_width": 1.0}        (alias "uniform_symmetric")
//   {"kind": "rademacher", "scale": 1.0}
//   {"kind": "finite_discrete", "values": [...], "probs": [...]}  (alias "finite")
DistributionSpec read_distribution_json(std::istream& in);
void write_distribution_json(std::ostream& out, const DistributionSpec& d);

// A distributions file holds either one object (applied to every coordinate)
// or an array. With n_expected > 0 a single object is replicated n_expected
// times and an array must have exactly n_expected elements.
std::vector<DistributionSpec> load_distributions(const std::string& path,
                                                 std::size_t n_expected);

DistributionSpec load_distribution(const std::string& path);

}  // namespace quadconc
