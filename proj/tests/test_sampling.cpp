// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/rng.hpp"
#include "mimomc/sampling.hpp"

#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>
#include <sstream>

using namespace mimomc;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Config;
}

// Independent restatement of the seed mixing from its documented formula.
std::uint64_t mix_oracle(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

TEST_CASE("derive_row_seed follows its formula and is deterministic", "[sampling]") {
  const std::uint64_t g = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t s : {0ULL, 0xABCDULL, ~0ULL}) {
    std::uint64_t z = mix_oracle(s + g);
    z = mix_oracle((z ^ 3) + g);
    z = mix_oracle((z ^ 1) + g);
    CHECK(derive_row_seed(s, 3, 1) == z);
  }
  CHECK(derive_row_seed(0xABCD, 3, 1) == derive_row_seed(0xABCD, 3, 1));
}

TEST_CASE("derive_row_seed separates neighbouring antennas and pulses", "[sampling][property]") {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> small(0, 200);
  for (int t = 0; t < 10000; ++t) {
    const std::uint64_t s = gen();
    const auto l = static_cast<std::uint64_t>(small(gen));
    const auto q = static_cast<std::uint64_t>(small(gen));
    REQUIRE(derive_row_seed(s, l, q) != derive_row_seed(s, l + 1, q));
    REQUIRE(derive_row_seed(s, l, q) != derive_row_seed(s, l, q + 1));
  }
}

TEST_CASE("draw_indices edge cases", "[sampling]") {
  const auto all = draw_indices(5, 9, 9);
  std::vector<int> want(9);
  std::iota(want.begin(), want.end(), 0);
  CHECK(all == want);
  CHECK(draw_indices(5, 9, 0).empty());
  CHECK(draw_indices(5, 0, 0).empty());
  CHECK(kind_of([] { draw_indices(1, 4, 5); }) == ErrorKind::Domain);
  CHECK(kind_of([] { draw_indices(1, 4, -1); }) == ErrorKind::Domain);
}

TEST_CASE("draw_indices matches a partial Fisher-Yates oracle", "[sampling]") {
  for (std::uint64_t seed : {1ULL, 99ULL, 12345ULL}) {
    std::vector<int> pool(40);
    std::iota(pool.begin(), pool.end(), 0);
    Xoshiro256 rng(seed);
    for (int i = 0; i < 13; ++i) std::swap(pool[i], pool[i + static_cast<int>(rng.uniform_below(40 - i))]);
    std::vector<int> want(pool.begin(), pool.begin() + 13);
    std::sort(want.begin(), want.end());
    CHECK(draw_indices(seed, 40, 13) == want);
  }
}

TEST_CASE("draw_indices returns sorted distinct in-range indices", "[sampling][property]") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const int u = 1 + static_cast<int>(seed % 50);
    const int c = static_cast<int>(seed % (u + 1));
    const auto idx = draw_indices(seed, u, c);
    REQUIRE(static_cast<int>(idx.size()) == c);
    REQUIRE(std::is_sorted(idx.begin(), idx.end()));
    REQUIRE(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
    for (int i : idx) REQUIRE((i >= 0 && i < u));
  }
}

TEST_CASE("draw_indices is uniform over indices", "[sampling][property]") {
  const int draws = 100000;
  std::vector<int> hits(4, 0);
  for (int s = 0; s < draws; ++s)
    for (int i : draw_indices(static_cast<std::uint64_t>(s) * 7919 + 1, 4, 2)) ++hits[i];
  for (int h : hits) CHECK(std::abs(h / double(draws) - 0.5) < 0.01);
}

TEST_CASE("mask structure and occupancy", "[sampling]") {
  const auto m = make_mask(Scheme::SubNyquist, 20, 256, 128, 42, 3);
  CHECK(m.size() == 20u * 128u);
  CHECK(m.occupancy() == 0.5);
  CHECK(m.indicator().sum() == 20 * 128);
  for (int l = 0; l < 20; ++l) {
    CHECK(m.per_row_seed[l] == derive_row_seed(42, l, 3));
    CHECK(m.per_row_indices[l] == draw_indices(m.per_row_seed[l], 256, 128));
    for (int j : m.per_row_indices[l]) CHECK(m.contains(l, j));
  }
  const auto other_pulse = make_mask(Scheme::SubNyquist, 20, 256, 128, 42, 4);
  CHECK(other_pulse.per_row_indices != m.per_row_indices);

  const auto full = full_mask(Scheme::MatchedFilterBank, 3, 5);
  CHECK(full.occupancy() == 1.0);
  CHECK_THROWS_AS(make_mask(Scheme::MatchedFilterBank, 0, 5, 1, 1, 1), Error);
  CHECK_THROWS_AS(make_mask(Scheme::MatchedFilterBank, 3, 5, 6, 1, 1), Error);
}

TEST_CASE("entry inclusion probability is L / n_cols", "[sampling][property]") {
  const int masks = 10000, rows = 3, cols = 8, per_row = 3;
  RMatrix count = RMatrix::Zero(rows, cols);
  for (int s = 0; s < masks; ++s) count += make_mask(Scheme::MatchedFilterBank, rows, cols, per_row, s, 1).indicator();
  const RMatrix freq = count / masks;
  CHECK((freq.array() - 3.0 / 8.0).abs().maxCoeff() < 0.015);
}

TEST_CASE("observe examples", "[sampling]") {
  std::mt19937_64 gen(3);
  const CMatrix x = testing::random_complex(6, 7, gen);
  CHECK(observe(x, full_mask(Scheme::MatchedFilterBank, 6, 7)).values == x);
  CHECK(observe(x, make_mask(Scheme::MatchedFilterBank, 6, 7, 0, 1, 1)).values.isZero(0.0));
  const auto m = make_mask(Scheme::MatchedFilterBank, 6, 7, 3, 1, 1);
  CHECK(project(x, m).norm() <= x.norm());
  CHECK_THROWS_AS(observe(CMatrix::Zero(6, 6), m), Error);
}

TEST_CASE("projection is idempotent and self-adjoint", "[sampling][property]") {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 50; ++t) {
    const auto m = make_mask(Scheme::SubNyquist, 9, 13, 1 + t % 13, gen(), 1);
    const CMatrix x = testing::random_complex(9, 13, gen), y = testing::random_complex(9, 13, gen);
    const CMatrix px = project(x, m);
    REQUIRE(project(px, m) == px);
    const cd lhs = (px.conjugate().cwiseProduct(y)).sum();
    const cd rhs = (x.conjugate().cwiseProduct(project(y, m))).sum();
    REQUIRE(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("fusion center reassembles the observed matrix from packets", "[sampling]") {
  std::mt19937_64 gen(23);
  const CMatrix x = testing::random_complex(10, 20, gen);
  const auto m = make_mask(Scheme::MatchedFilterBank, 10, 20, 10, 777, 2);
  const auto packets = antenna_packets(x, m);
  const ObservedMatrix fused = assemble_fusion_matrix(packets, Scheme::MatchedFilterBank, 10, 20, 10);
  CHECK(fused.values == observe(x, m).values);
  CHECK(fused.mask.per_row_indices == m.per_row_indices);
  CHECK(fused.mask.occupancy() == 0.5);

  auto shuffled = packets;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(assemble_fusion_matrix(shuffled, Scheme::MatchedFilterBank, 10, 20, 10).values == fused.values);
}

TEST_CASE("fusion center protocol errors", "[sampling][error]") {
  std::mt19937_64 gen(29);
  const CMatrix x = testing::random_complex(4, 8, gen);
  const auto m = make_mask(Scheme::SubNyquist, 4, 8, 3, 5, 1);
  const auto packets = antenna_packets(x, m);

  auto missing = packets;
  missing.pop_back();
  CHECK(kind_of([&] { assemble_fusion_matrix(missing, Scheme::SubNyquist, 4, 8, 3); }) == ErrorKind::Protocol);

  auto duplicate = packets;
  duplicate[1].antenna = 0;
  CHECK(kind_of([&] { assemble_fusion_matrix(duplicate, Scheme::SubNyquist, 4, 8, 3); }) == ErrorKind::Protocol);

  auto out_of_range = packets;
  out_of_range[2].antenna = 9;
  CHECK(kind_of([&] { assemble_fusion_matrix(out_of_range, Scheme::SubNyquist, 4, 8, 3); }) == ErrorKind::Protocol);

  auto short_packet = packets;
  short_packet[0].samples.pop_back();
  CHECK(kind_of([&] { assemble_fusion_matrix(short_packet, Scheme::SubNyquist, 4, 8, 3); }) == ErrorKind::Protocol);

  // a wrong seed is detectable as a row mismatch against the reference
  auto wrong_seed = packets;
  wrong_seed[2].seed ^= 1;
  const auto fused = assemble_fusion_matrix(wrong_seed, Scheme::SubNyquist, 4, 8, 3);
  CHECK(fused.mask.per_row_indices[2] != m.per_row_indices[2]);
  CHECK(fused.values.row(2) != observe(x, m).values.row(2));
}

TEST_CASE("mask CSV round trip and validation", "[sampling]") {
  const auto m = make_mask(Scheme::MatchedFilterBank, 5, 12, 4, 31, 1);
  std::stringstream ss;
  write_mask_csv(ss, m);
  const std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')).rfind("0," + std::to_string(m.per_row_seed[0]) + ",4,", 0) == 0);

  std::istringstream in(text);
  const auto back = read_mask_csv(in, Scheme::MatchedFilterBank, 12);
  CHECK(back.n_rows == 5);
  CHECK(back.per_row_count == 4);
  CHECK(back.per_row_indices == m.per_row_indices);
  CHECK(back.per_row_seed == m.per_row_seed);

  std::string tampered = text;
  const auto pos = tampered.find('\n') - 1;  // last index of row 0
  tampered[pos] = tampered[pos] == '0' ? '1' : '0';
  std::istringstream bad(tampered);
  CHECK(kind_of([&] { read_mask_csv(bad, Scheme::MatchedFilterBank, 12); }) == ErrorKind::Protocol);

  std::istringstream shortline("0,1\n");
  CHECK(kind_of([&] { read_mask_csv(shortline, Scheme::MatchedFilterBank, 12); }) == ErrorKind::Protocol);
}
