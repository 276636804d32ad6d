#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Randomized property checks shared by the unit tests and the acceptance run.
namespace propsuite {

struct Outcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0 && cases > 0; }
};

Outcome polar_involution(std::uint64_t seed, std::size_t cases);
Outcome face_partition(std::uint64_t seed, std::size_t cases);
Outcome nondegeneracy_dual_primal(std::uint64_t seed, std::size_t cases);
Outcome single_vs_all_faces(std::uint64_t seed, std::size_t cases);
Outcome union_of_polars(std::uint64_t seed, std::size_t cases);
Outcome lp_vs_vertices(std::uint64_t seed, std::size_t cases);
Outcome witness_reverification(std::uint64_t seed, std::size_t cases);

/// Every property with `cases` cases each.
std::vector<Outcome> run_all(std::uint64_t seed, std::size_t cases);

}  // namespace propsuite
