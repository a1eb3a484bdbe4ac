// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#include "mimomc/sampling.hpp"

#include "mimomc/rng.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace mimomc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::string dims(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}
} // namespace

double ObservationMask::occupancy() const {
  return static_cast<double>(size()) / (static_cast<double>(n_rows) * n_cols);
}

RMatrix ObservationMask::indicator() const {
  RMatrix m = RMatrix::Zero(n_rows, n_cols);
  for (int l = 0; l < n_rows; ++l)
    for (int j : per_row_indices[l]) m(l, j) = 1.0;
  return m;
}

bool ObservationMask::contains(int row, int col) const {
  const auto& idx = per_row_indices.at(row);
  return std::binary_search(idx.begin(), idx.end(), col);
}

std::uint64_t derive_row_seed(std::uint64_t master_seed, std::uint64_t antenna_index,
                              std::uint64_t pulse_index) {
  std::uint64_t z = splitmix64_mix(master_seed + kGolden);
  z = splitmix64_mix((z ^ antenna_index) + kGolden);
  z = splitmix64_mix((z ^ pulse_index) + kGolden);
  return z;
}

std::vector<int> draw_indices(std::uint64_t seed, int universe_size, int count) {
  if (count < 0 || universe_size < 0 || count > universe_size)
    throw Error(ErrorKind::Domain, "cannot draw " + std::to_string(count) + " of " +
                                       std::to_string(universe_size) + " indices");
  std::vector<int> pool(static_cast<std::size_t>(universe_size));
  std::iota(pool.begin(), pool.end(), 0);
  Xoshiro256 rng(seed);
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(universe_size - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

ObservationMask make_mask(Scheme scheme, int n_rows, int n_cols, int per_row_count,
                          std::uint64_t mask_seed, int pulse_index) {
  if (n_rows <= 0 || n_cols <= 0) throw Error(ErrorKind::Domain, "mask dimensions must be positive");
  ObservationMask m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.per_row_count = per_row_count;
  m.scheme = scheme;
  m.per_row_indices.reserve(n_rows);
  m.per_row_seed.reserve(n_rows);
  for (int l = 0; l < n_rows; ++l) {
    const auto s = derive_row_seed(mask_seed, static_cast<std::uint64_t>(l),
                                   static_cast<std::uint64_t>(pulse_index));
    m.per_row_seed.push_back(s);
    m.per_row_indices.push_back(draw_indices(s, n_cols, per_row_count));
  }
  return m;
}

ObservationMask full_mask(Scheme scheme, int n_rows, int n_cols) {
  return make_mask(scheme, n_rows, n_cols, n_cols, 0, 1);
}

CMatrix project(const CMatrix& x, const ObservationMask& mask) {
  if (x.rows() != mask.n_rows || x.cols() != mask.n_cols)
    throw Error(ErrorKind::DimensionMismatch,
                "matrix " + dims(x.rows(), x.cols()) + " vs mask " + dims(mask.n_rows, mask.n_cols));
  CMatrix y = CMatrix::Zero(x.rows(), x.cols());
  for (int l = 0; l < mask.n_rows; ++l)
    for (int j : mask.per_row_indices[l]) y(l, j) = x(l, j);
  return y;
}

ObservedMatrix observe(const CMatrix& full, const ObservationMask& mask) {
  return ObservedMatrix{project(full, mask), mask};
}

std::vector<AntennaPacket> antenna_packets(const CMatrix& full, const ObservationMask& mask) {
  if (full.rows() != mask.n_rows || full.cols() != mask.n_cols)
    throw Error(ErrorKind::DimensionMismatch, "matrix does not match mask");
  std::vector<AntennaPacket> packets;
  packets.reserve(mask.n_rows);
  for (int l = 0; l < mask.n_rows; ++l) {
    AntennaPacket p;
    p.antenna = l;
    p.seed = mask.per_row_seed[l];
    for (int j : mask.per_row_indices[l]) p.samples.push_back(full(l, j));
    packets.push_back(std::move(p));
  }
  return packets;
}

ObservedMatrix assemble_fusion_matrix(const std::vector<AntennaPacket>& packets, Scheme scheme,
                                      int n_rows, int n_cols, int per_row_count) {
  if (static_cast<int>(packets.size()) != n_rows)
    throw Error(ErrorKind::Protocol, "expected " + std::to_string(n_rows) + " antenna packets, got " +
                                         std::to_string(packets.size()));
  ObservedMatrix out;
  out.values = CMatrix::Zero(n_rows, n_cols);
  out.mask.n_rows = n_rows;
  out.mask.n_cols = n_cols;
  out.mask.per_row_count = per_row_count;
  out.mask.scheme = scheme;
  out.mask.per_row_indices.resize(n_rows);
  out.mask.per_row_seed.resize(n_rows);
  std::vector<bool> seen(static_cast<std::size_t>(n_rows), false);
  for (const auto& p : packets) {
    if (p.antenna < 0 || p.antenna >= n_rows || seen[p.antenna])
      throw Error(ErrorKind::Protocol, "bad or duplicate antenna index " + std::to_string(p.antenna));
    if (static_cast<int>(p.samples.size()) != per_row_count)
      throw Error(ErrorKind::Protocol, "antenna " + std::to_string(p.antenna) + " sent " +
                                           std::to_string(p.samples.size()) + " samples, expected " +
                                           std::to_string(per_row_count));
    seen[p.antenna] = true;
    auto idx = draw_indices(p.seed, n_cols, per_row_count);
    for (int j = 0; j < per_row_count; ++j) out.values(p.antenna, idx[j]) = p.samples[j];
    out.mask.per_row_seed[p.antenna] = p.seed;
    out.mask.per_row_indices[p.antenna] = std::move(idx);
  }
  return out;
}

void write_mask_csv(std::ostream& os, const ObservationMask& mask) {
  for (int l = 0; l < mask.n_rows; ++l) {
    os << l << ',' << mask.per_row_seed[l] << ',' << mask.per_row_count;
    for (int j : mask.per_row_indices[l]) os << ',' << j;
    os << '\n';
  }
}

ObservationMask read_mask_csv(std::istream& is, Scheme scheme, int n_cols) {
  ObservationMask m;
  m.n_cols = n_cols;
  m.scheme = scheme;
  std::string line;
  int expected_row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 3) throw Error(ErrorKind::Protocol, "short mask line: " + line);
    const int l = std::stoi(fields[0]);
    const auto seed = std::stoull(fields[1]);
    const int count = std::stoi(fields[2]);
    if (l != expected_row++) throw Error(ErrorKind::Protocol, "mask rows out of order");
    if (static_cast<int>(fields.size()) != 3 + count)
      throw Error(ErrorKind::Protocol, "row " + std::to_string(l) + " index count mismatch");
    if (m.n_rows == 0) m.per_row_count = count;
    else if (count != m.per_row_count) throw Error(ErrorKind::Protocol, "rows have different L");
    std::vector<int> idx;
    for (int j = 0; j < count; ++j) idx.push_back(std::stoi(fields[3 + j]));
    if (idx != draw_indices(seed, n_cols, count))
      throw Error(ErrorKind::Protocol, "row " + std::to_string(l) + " indices do not match its seed");
    m.per_row_seed.push_back(seed);
    m.per_row_indices.push_back(std::move(idx));
    ++m.n_rows;
  }
  return m;
}

} // namespace mimomc
