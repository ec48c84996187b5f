#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include <doctest.h>

#include "fwsparse/errors.hpp"
#include "fwsparse/rng.hpp"

using namespace fwsparse;

namespace {

// Reference outputs computed with an independent implementation of the
// same generator (64-bit increment 0x9E3779B97F4A7C15, the usual two
// xor-multiply finalizer rounds).
struct StreamVector {
  std::uint64_t seed;
  std::uint64_t out[4];
};

constexpr StreamVector kStreams[] = {
    {0x0ULL,
     {0xe220a8397b1dcdafULL, 0x6e789e6aa1b965f4ULL, 0x06c45d188009454fULL,
      0xf88bb8a8724c81ecULL}},
    {0x1ULL,
     {0x910a2dec89025cc1ULL, 0xbeeb8da1658eec67ULL, 0xf893a2eefb32555eULL,
      0x71c18690ee42c90bULL}},
    {0x1234abcd5678ef90ULL,
     {0xffb1af1a2bbd6efaULL, 0x0bec8767f60fb894ULL, 0x32fae208b3dbe2b8ULL,
      0xbc3e2268df1259baULL}},
};

}  // namespace

TEST_CASE("generator reproduces the reference stream") {
  for (const StreamVector& vec : kStreams) {
    SplitMix64 rng(vec.seed);
    for (std::uint64_t expected : vec.out) {
      CHECK(rng.next_u64() == expected);
    }
  }
}

TEST_CASE("unit draws map the reference words into the open interval") {
  SplitMix64 rng(1);
  // ((word >> 11) + 0.5) * 2^-53 applied to the seed-1 stream.
  CHECK(rng.next_unit_open() == doctest::Approx(0.566561575172281).epsilon(1e-15));
  CHECK(rng.next_unit_open() == doctest::Approx(0.7457817572627012).epsilon(1e-15));
  CHECK(rng.next_unit_open() == doctest::Approx(0.9710027535867962).epsilon(1e-15));
}

TEST_CASE("unit draws stay strictly inside (0,1) with a centered mean") {
  SplitMix64 rng(123);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("normal quantile matches independently computed values") {
  // References from a separately implemented inverse CDF; both routes are
  // accurate to a few ulps, so 1e-14 relative leaves margin.
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.25) ==
        doctest::Approx(-0.6744897501960817).epsilon(1e-14));
  CHECK(normal_quantile(0.75) ==
        doctest::Approx(0.6744897501960817).epsilon(1e-14));
  CHECK(normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.0013498980316300933) ==
        doctest::Approx(-3.0).epsilon(1e-14));
  // Intermediate branch of the approximation (r between 1.6 and 5).
  CHECK(normal_quantile(1e-10) ==
        doctest::Approx(-6.361340902404056).epsilon(1e-14));
  // Far branches on both sides (r beyond 5).
  CHECK(normal_quantile(5.551115123125783e-17) ==
        doctest::Approx(-8.292361075813597).epsilon(1e-14));
  CHECK(normal_quantile(0.9999999999999999) ==
        doctest::Approx(8.209536151601387).epsilon(1e-14));
}

TEST_CASE("normal quantile is antisymmetric about one half") {
  for (double p : {0.25, 0.1, 0.01}) {
    CHECK(normal_quantile(p) ==
          doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-13));
  }
  // Deep in the tail the comparison is limited by rounding 1 - p, not by
  // the approximation itself.
  CHECK(normal_quantile(1e-6) ==
        doctest::Approx(-normal_quantile(1.0 - 1e-6)).epsilon(1e-9));
}

TEST_CASE("normal quantile rejects arguments outside (0,1)") {
  CHECK_THROWS_AS(normal_quantile(0.0), RangeError);
  CHECK_THROWS_AS(normal_quantile(1.0), RangeError);
  CHECK_THROWS_AS(normal_quantile(-0.5), RangeError);
  CHECK_THROWS_AS(normal_quantile(2.0), RangeError);
  CHECK_THROWS_AS(normal_quantile(std::numeric_limits<double>::quiet_NaN()),
                  RangeError);
}

TEST_CASE("normal draws are the quantile of the unit draws") {
  SplitMix64 draws(77);
  SplitMix64 mirror(77);
  for (int i = 0; i < 100; ++i) {
    CHECK(draws.next_normal() == normal_quantile(mirror.next_unit_open()));
  }
}

TEST_CASE("derived seeds are random access into the base stream") {
  for (std::uint64_t base : {std::uint64_t{1}, std::uint64_t{0xDEADBEEF},
                             std::uint64_t{0x1234abcd5678ef90}}) {
    SplitMix64 rng(base);
    for (std::uint64_t j = 0; j < 10; ++j) {
      CHECK(derive_seed(base, j) == rng.next_u64());
    }
  }
}

TEST_CASE("bounded draws respect the bound") {
  SplitMix64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.next_below(1) == 0);
  }
  int counts[10] = {};
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t v = rng.next_below(10);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (int c : counts) CHECK(c > 800);
  CHECK_THROWS_AS(rng.next_below(0), RangeError);
}

TEST_CASE("distinct index samples are sorted, in range, and distinct") {
  SplitMix64 rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const auto idx = sample_distinct_indices(5, 40, rng);
    REQUIRE(idx.size() == 5);
    std::set<Eigen::Index> seen(idx.begin(), idx.end());
    CHECK(seen.size() == 5);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      CHECK(idx[i] >= 0);
      CHECK(idx[i] < 40);
      if (i > 0) CHECK(idx[i] > idx[i - 1]);
    }
  }
}

TEST_CASE("distinct index samples handle the edge sizes") {
  SplitMix64 rng(3);
  const auto all = sample_distinct_indices(6, 6, rng);
  REQUIRE(all.size() == 6);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);
  CHECK(sample_distinct_indices(0, 6, rng).empty());
  CHECK_THROWS_AS(sample_distinct_indices(7, 6, rng), RangeError);
  CHECK_THROWS_AS(sample_distinct_indices(-1, 6, rng), RangeError);
  CHECK_THROWS_AS(sample_distinct_indices(1, -1, rng), RangeError);
}
