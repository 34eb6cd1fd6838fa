// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "ionpulse/types.hpp"

namespace ionpulse::tables {

enum class StateKind { dicke, noon };

/// A published reference sequence: N pulses driving N ions into the named
/// state class. Areas/phases in units of pi, as printed (phases folded
/// into [0, 2)); quoted_total_area is the source's 3-decimal A_tot.
struct Row {
  StateKind kind;
  int n_ions;
  double quoted_total_area;
  PulseSequence sequence;
};

/// Rows available for a state kind (N = 3..10 for both).
const std::vector<Row>& rows(StateKind kind);

/// Lookup by (kind, N); empty when there is no such row.
std::optional<Row> find_row(StateKind kind, int n_ions);

/// Conventional excitation number for Dicke reference rows: floor(N/2).
inline int default_dicke_excitation(int n_ions) { return n_ions / 2; }

}  // namespace ionpulse::tables
