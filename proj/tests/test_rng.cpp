#include <doctest.h>

#include <cmath>
#include <vector>

#include "rlab/rng.hpp"

using rlab::Rng;
using rlab::derive_seed;

TEST_CASE("same seed reproduces the raw stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("uniform is the top-53-bit transform of the raw stream") {
  Rng raw(7), transformed(7);
  for (int i = 0; i < 200; ++i) {
    const double expected =
        static_cast<double>(raw.next_u64() >> 11) * 0x1.0p-53;
    CHECK(transformed.uniform() == expected);
  }
}

TEST_CASE("uniform stays in [0,1) with the right mean") {
  Rng rng(1);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the empirical mean is ~0.0009; 0.005 is > 5 sigma.
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform(lo,hi) respects the interval") {
  Rng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-0.6, -0.4);
    CHECK(x >= -0.6);
    CHECK(x < -0.4);
  }
}

TEST_CASE("uniform_int covers [0,n) evenly") {
  Rng rng(3);
  const int n = 5;
  const int draws = 50000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) {
    const int k = rng.uniform_int(n);
    REQUIRE(k >= 0);
    REQUIRE(k < n);
    ++counts[k];
  }
  // Binomial sd per bucket is sqrt(draws * 0.2 * 0.8) ~ 89.4.
  const double expected = static_cast<double>(draws) / n;
  for (int c : counts) {
    CHECK(std::abs(c - expected) < 4.0 * 89.5);
  }
}

TEST_CASE("uniform_int(1) is always zero") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    CHECK(rng.uniform_int(1) == 0);
  }
}

TEST_CASE("derive_seed separates substreams deterministically") {
  const std::uint64_t base = 42;
  CHECK(derive_seed(base, 0) == derive_seed(base, 0));
  CHECK(derive_seed(base, 0) != derive_seed(base, 1));
  CHECK(derive_seed(base, 0) != derive_seed(base, 2));
  CHECK(derive_seed(base, 1) != derive_seed(base, 2));
  CHECK(derive_seed(base, 0) != derive_seed(base + 1, 0));
  CHECK(derive_seed(base, rlab::seed_stream::kDataset) !=
        derive_seed(base, rlab::seed_stream::kEnv));
}

TEST_CASE("derived substreams produce unrelated draws") {
  Rng env(derive_seed(9, rlab::seed_stream::kEnv));
  Rng net(derive_seed(9, rlab::seed_stream::kNet));
  int agree = 0;
  for (int i = 0; i < 64; ++i) {
    if (env.next_u64() == net.next_u64()) ++agree;
  }
  CHECK(agree == 0);
}
