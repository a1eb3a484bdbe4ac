// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/signal_model.hpp"
#include "mimomc/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mimomc {

/// Row-structured observation pattern: receive antenna l forwards the
/// entries at columns per_row_indices[l], which the fusion center
/// regenerates from per_row_seed[l].
struct ObservationMask {
  int n_rows = 0;
  int n_cols = 0;
  int per_row_count = 0;  ///< L1 (scheme I) or L2 (scheme II)
  Scheme scheme = Scheme::MatchedFilterBank;
  std::vector<std::vector<int>> per_row_indices;
  std::vector<std::uint64_t> per_row_seed;

  std::size_t size() const { return static_cast<std::size_t>(n_rows) * per_row_count; }
  /// Occupancy ratio |Omega| / (n_rows n_cols).
  double occupancy() const;
  /// 0/1 indicator matrix of Omega.
  RMatrix indicator() const;
  bool contains(int row, int col) const;
};

struct ObservedMatrix {
  CMatrix values;  ///< zero outside Omega
  ObservationMask mask;
};

/// Mixes (master, l, q) into a row seed:
///   z = mix(master + g); z = mix(z ^ l + g); z = mix(z ^ q + g)
/// with mix the SplitMix64 finalizer and g = 0x9E3779B97F4A7C15.
std::uint64_t derive_row_seed(std::uint64_t master_seed, std::uint64_t antenna_index,
                              std::uint64_t pulse_index);

/// Uniform `count`-subset of {0, ..., universe_size - 1}, sorted ascending.
/// Partial Fisher-Yates: for i < count, swap(a[i], a[i + uniform_below(U - i)]).
std::vector<int> draw_indices(std::uint64_t seed, int universe_size, int count);

/// Draws one independent index set per row from derive_row_seed(mask_seed, l, q).
ObservationMask make_mask(Scheme scheme, int n_rows, int n_cols, int per_row_count,
                          std::uint64_t mask_seed, int pulse_index);

/// Mask observing every entry.
ObservationMask full_mask(Scheme scheme, int n_rows, int n_cols);

/// P_Omega applied to a plain matrix.
CMatrix project(const CMatrix& x, const ObservationMask& mask);

ObservedMatrix observe(const CMatrix& full, const ObservationMask& mask);
inline ObservedMatrix observe(const DataMatrix& full, const ObservationMask& mask) {
  return observe(full.values, mask);
}

/// What receive antenna l forwards to the fusion center.
struct AntennaPacket {
  int antenna = 0;
  std::vector<cd> samples;
  std::uint64_t seed = 0;
};

/// Receive-side half of the protocol: the samples row l of `full` forwards.
std::vector<AntennaPacket> antenna_packets(const CMatrix& full, const ObservationMask& mask);

/// Fusion-center half: regenerates each row's index set from the packet seed
/// and scatters the samples. Throws Error(Protocol) on count or antenna
/// inconsistencies.
ObservedMatrix assemble_fusion_matrix(const std::vector<AntennaPacket>& packets, Scheme scheme,
                                      int n_rows, int n_cols, int per_row_count);

/// Row-major CSV, one line per row: l,s_l,L,idx_0,...,idx_{L-1}
void write_mask_csv(std::ostream& os, const ObservationMask& mask);
ObservationMask read_mask_csv(std::istream& is, Scheme scheme, int n_cols);

} // namespace mimomc
