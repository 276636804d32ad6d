#include <doctest.h>

#include "property_suite.hpp"

namespace {

constexpr std::uint64_t kSeed = 20261019;
constexpr std::size_t kCases = 200;

void expect(const propsuite::Outcome& o) {
  INFO(o.name << ": " << o.failures << " of " << o.cases << " failed; first: " << o.first_failure);
  CHECK(o.cases >= kCases);
  CHECK(o.ok());
}

}  // namespace

TEST_CASE("polar involution") { expect(propsuite::polar_involution(kSeed, kCases)); }
TEST_CASE("face lattice partitions the cone") { expect(propsuite::face_partition(kSeed + 1, kCases)); }
TEST_CASE("dual and primal non-degeneracy agree") { expect(propsuite::nondegeneracy_dual_primal(kSeed + 2, kCases)); }
TEST_CASE("single-face and all-faces regularity agree") { expect(propsuite::single_vs_all_faces(kSeed + 3, kCases)); }
TEST_CASE("union of face polars") { expect(propsuite::union_of_polars(kSeed + 4, kCases)); }
TEST_CASE("LP optimum matches vertex enumeration") { expect(propsuite::lp_vs_vertices(kSeed + 5, kCases)); }
TEST_CASE("FAILS witnesses re-verify") { expect(propsuite::witness_reverification(kSeed + 6, kCases)); }
