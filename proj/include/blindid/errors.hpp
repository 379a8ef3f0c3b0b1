#pragma once

#include <stdexcept>
#include <string>

namespace blindid {

// Matrix handed to a solver does not have the rank its contract requires.
class rank_error : public std::runtime_error {
 public:
  explicit rank_error(const std::string& what) : std::runtime_error(what) {}
};

// Signal/noise eigenvalue split of a covariance is not resolvable.
class degenerate_split_error : public std::runtime_error {
 public:
  explicit degenerate_split_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Eigen-spectrum of the subspace quadratic form contradicts the requested
// kernel dimension (kernel larger than expected, or no separating gap).
class kernel_extraction_error : public std::runtime_error {
 public:
  explicit kernel_extraction_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Every coordinate normalization functional vanishes on the kernel span.
class normalization_error : public std::runtime_error {
 public:
  explicit normalization_error(const std::string& what)
      : std::runtime_error(what) {}
};

// No exponent on the search grid satisfies the identifiability condition.
class feasible_p_not_found : public std::runtime_error {
 public:
  feasible_p_not_found(const std::string& what, double margin_at_floor)
      : std::runtime_error(what), margin_at_floor(margin_at_floor) {}
  double margin_at_floor;
};

}  // namespace blindid
