// SPDX-License-Identifier: Apache-2.0
#include "ionpulse/tables.hpp"

namespace ionpulse::tables {

namespace {

Row make_row(StateKind kind, int n_ions, double total,
             std::initializer_list<std::pair<double, double>> pulses) {
  std::vector<Pulse> seq;
  seq.reserve(pulses.size());
  for (const auto& [area, phase] : pulses) seq.emplace_back(area, phase);
  return Row{kind, n_ions, total, PulseSequence(std::move(seq))};
}

std::vector<Row> build_dicke_rows() {
  std::vector<Row> rows;
  rows.push_back(make_row(StateKind::dicke, 3, 2.53,
      {{0.369, 0}, {0.484, 2.39}, {1.682, 2.976}}));
  rows.push_back(make_row(StateKind::dicke, 4, 2.28,
      {{0.805, 0}, {0.495, 1.728}, {0.793, 0.566}, {0.191, 0.079}}));
  rows.push_back(make_row(StateKind::dicke, 5, 2.11,
      {{0.795, 0}, {0.278, 0.403}, {0.480, 0.075}, {0.223, 0.309}, {0.333, 0.915}}));
  rows.push_back(make_row(StateKind::dicke, 6, 2.12,
      {{0.562, 0}, {0.315, 1.478}, {0.343, 0.854}, {0.277, 0.417}, {0.126, 0.091},
       {0.501, 1.423}}));
  rows.push_back(make_row(StateKind::dicke, 7, 2.15,
      {{0.107, 0}, {0.584, 1.694}, {0.562, 1.566}, {0.497, 1.313}, {0.039, 1.956},
       {0.158, 1.301}, {0.206, 1.847}}));
  rows.push_back(make_row(StateKind::dicke, 8, 2.46,
      {{0.539, 0}, {0.216, 0.389}, {0.459, 0.098}, {0.251, 1.560}, {0.464, 0.816},
       {0.25, 0.388}, {0.25, 2.078}, {0.03, 1.607}}));
  rows.push_back(make_row(StateKind::dicke, 9, 3.35,
      {{0.51, 0}, {0.234, 0.83}, {0.9, 0.304}, {0.19, 2.025}, {0.352, 0.164},
       {0.379, 0.556}, {0.358, 0.097}, {0.199, 0.239}, {0.231, 0.471}}));
  rows.push_back(make_row(StateKind::dicke, 10, 3.89,
      {{0.621, 0}, {0.367, 1.147}, {0.097, 0.994}, {0.616, 1.709}, {0.113, 0.263},
       {0.203, 0.661}, {0.579, 0.328}, {0.223, 0.831}, {0.775, 0.909}, {0.292, 0.462}}));
  return rows;
}

std::vector<Row> build_noon_rows() {
  std::vector<Row> rows;
  rows.push_back(make_row(StateKind::noon, 3, 1.60,
      {{0.696, 0}, {0.640, 1.511}, {0.259, 1.962}}));
  rows.push_back(make_row(StateKind::noon, 4, 1.63,
      {{0.402, 0}, {0.291, 0.151}, {0.667, 1.819}, {0.271, 1.465}}));
  rows.push_back(make_row(StateKind::noon, 5, 1.88,
      {{0.494, 0}, {0.249, 0.652}, {0.651, 1.271}, {0.313, 0.806}, {0.175, 1.175}}));
  rows.push_back(make_row(StateKind::noon, 6, 1.83,
      {{0.284, 0}, {0.235, 0.219}, {0.099, 0.701}, {0.673, 1.178}, {0.403, 0.665},
       {0.136, 1.022}}));
  rows.push_back(make_row(StateKind::noon, 7, 2.06,
      {{0.278, 0}, {0.300, 0.266}, {0.338, 0.034}, {0.541, 1.895}, {0.277, 2.138},
       {0.137, 0.662}, {0.187, 0.070}}));
  rows.push_back(make_row(StateKind::noon, 8, 2.33,
      {{0.259, 0}, {0.923, 0.209}, {0.346, 0.408}, {0.428, 1.572}, {0.003, 1.705},
       {0.204, 1.216}, {0.003, 2.11}, {0.162, 1.543}}));
  rows.push_back(make_row(StateKind::noon, 9, 2.46,
      {{0.395, 0}, {0.146, 2.556}, {0.186, 1.336}, {0.237, 1.854}, {0.680, 0.740},
       {0.452, 1.660}, {0.169, 0.862}, {0.007, 0.222}, {0.186, 1.555}}));
  rows.push_back(make_row(StateKind::noon, 10, 2.93,
      {{0.476, 0}, {0.239, 1.247}, {0.289, 1.380}, {0.256, 0.305}, {0.228, 2.021},
       {0.415, 0.220}, {0.388, 0.749}, {0.059, 1.718}, {0.529, 1.823}, {0.047, 0.861}}));
  return rows;
}

}  // namespace

const std::vector<Row>& rows(StateKind kind) {
  static const std::vector<Row> dicke = build_dicke_rows();
  static const std::vector<Row> noon = build_noon_rows();
  return kind == StateKind::dicke ? dicke : noon;
}

std::optional<Row> find_row(StateKind kind, int n_ions) {
  for (const auto& row : rows(kind))
    if (row.n_ions == n_ions) return row;
  return std::nullopt;
}

}  // namespace ionpulse::tables
