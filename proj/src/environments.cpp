#include "olab/environments.hpp"

#include <algorithm>
#include <cmath>

namespace olab {

FeatureMap::FeatureMap(int num_states, int dim, std::vector<double> values)
    : num_states_(num_states), dim_(dim), values_(std::move(values)) {
  if (num_states <= 0 || dim <= 0 || values_.size() != static_cast<std::size_t>(num_states) * dim) {
    throw std::invalid_argument("FeatureMap: shape mismatch");
  }
  nonzeros_.resize(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    const auto r = row(s);
    for (int j = 0; j < dim; ++j) {
      if (r[j] != 0.0) nonzeros_[s].push_back(j);
    }
  }
}

FeatureMap FeatureMap::one_hot(int num_states) {
  std::vector<double> v(static_cast<std::size_t>(num_states) * num_states, 0.0);
  for (int s = 0; s < num_states; ++s) v[static_cast<std::size_t>(s) * num_states + s] = 1.0;
  return FeatureMap(num_states, num_states, std::move(v));
}

FeatureMap tile_coding(std::span<const double> xs, std::span<const double> ys, int tilings, int tiles) {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("tile_coding: coordinate mismatch");
  if (tilings <= 0 || tiles <= 0) throw std::invalid_argument("tile_coding: bad grid");
  const int n = static_cast<int>(xs.size());
  const int per_tiling = tiles * tiles;
  const int dim = tilings * per_tiling;
  std::vector<double> v(static_cast<std::size_t>(n) * dim, 0.0);
  for (int s = 0; s < n; ++s) {
    for (int k = 0; k < tilings; ++k) {
      const double offset = static_cast<double>(k) / (static_cast<double>(tilings) * tiles);
      auto cell = [&](double c) {
        const int i = static_cast<int>(std::floor((c + offset) * tiles));
        return std::clamp(i, 0, tiles - 1);
      };
      const int idx = k * per_tiling + cell(ys[s]) * tiles + cell(xs[s]);
      v[static_cast<std::size_t>(s) * dim + idx] = 1.0;
    }
  }
  return FeatureMap(n, dim, std::move(v));
}

namespace {

struct Cell {
  int row;
  int col;
};

// Builds a gridworld MDP over the given open cells. With probability `slip`
// the intended move is replaced by a uniformly random one; blocked moves stay.
MdpSpec grid_mdp(int rows, int cols, const std::vector<Cell>& cells, int horizon, double slip,
                 const std::vector<double>& reward_per_state, int start_state) {
  const int S = static_cast<int>(cells.size());
  const int A = grid::kNumMoves;
  std::vector<int> index(static_cast<std::size_t>(rows) * cols, -1);
  for (int s = 0; s < S; ++s) index[static_cast<std::size_t>(cells[s].row) * cols + cells[s].col] = s;

  auto move = [&](int s, int a) {
    int r = cells[s].row;
    int c = cells[s].col;
    switch (a) {
      case grid::Up: --r; break;
      case grid::Down: ++r; break;
      case grid::Left: --c; break;
      case grid::Right: ++c; break;
      default: break;
    }
    if (r < 0 || r >= rows || c < 0 || c >= cols) return s;
    const int t = index[static_cast<std::size_t>(r) * cols + c];
    return t < 0 ? s : t;
  };

  std::vector<double> P(static_cast<std::size_t>(S) * A * S, 0.0);
  std::vector<double> R(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double* row = P.data() + (static_cast<std::size_t>(s) * A + a) * S;
      row[move(s, a)] += 1.0 - slip;
      for (int b = 0; b < A; ++b) row[move(s, b)] += slip / A;
      R[static_cast<std::size_t>(s) * A + a] = reward_per_state[s];
    }
  }
  std::vector<double> d0(static_cast<std::size_t>(S), 0.0);
  d0[start_state] = 1.0;
  return build_mdp(S, A, horizon, std::move(P), std::move(R), std::move(d0));
}

}  // namespace

Environment make_two_rooms(const TwoRoomsParams& params) {
  constexpr int kSize = 5;
  constexpr int kWallCol = 2;
  constexpr int kDoorRow = 2;
  std::vector<Cell> cells;
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      if (c == kWallCol && r != kDoorRow) continue;
      cells.push_back({r, c});
    }
  }
  const int S = static_cast<int>(cells.size());
  std::vector<double> reward(static_cast<std::size_t>(S), 0.0);
  std::vector<int> regions(static_cast<std::size_t>(S), 0);
  std::vector<double> xs(static_cast<std::size_t>(S));
  std::vector<double> ys(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    if (cells[s].row == kSize - 1 && cells[s].col == kSize - 1) reward[s] = 1.0;
    regions[s] = cells[s].col < kWallCol ? 0 : 1;
    xs[s] = (cells[s].col + 0.5) / kSize;
    ys[s] = (cells[s].row + 0.5) / kSize;
  }
  return Environment{"two_rooms",
                     grid_mdp(kSize, kSize, cells, params.horizon, params.slip, reward, 0),
                     std::move(regions),
                     2,
                     tile_coding(xs, ys),
                     false};
}

Environment make_chain(const ChainParams& params) {
  const int S = params.length;
  if (S < 2) throw std::invalid_argument("make_chain: need at least two states");
  constexpr int A = 2;  // 0 = left, 1 = right
  std::vector<double> P(static_cast<std::size_t>(S) * A * S, 0.0);
  std::vector<double> R(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) {
    const int left = std::max(s - 1, 0);
    const int right = std::min(s + 1, S - 1);
    for (int a = 0; a < A; ++a) {
      double* row = P.data() + (static_cast<std::size_t>(s) * A + a) * S;
      row[a == 0 ? left : right] += 1.0 - params.slip;
      row[a == 0 ? right : left] += params.slip;
    }
  }
  R[0 * A + 0] = 0.1;
  R[static_cast<std::size_t>(S - 1) * A + 1] = 1.0;
  std::vector<double> d0(static_cast<std::size_t>(S), 0.0);
  d0[1] = 1.0;

  std::vector<int> regions(static_cast<std::size_t>(S));
  std::vector<double> xs(static_cast<std::size_t>(S));
  std::vector<double> ys(static_cast<std::size_t>(S), 0.5);
  for (int s = 0; s < S; ++s) {
    regions[s] = s < S / 2 ? 0 : 1;
    xs[s] = (s + 0.5) / S;
  }
  return Environment{"chain", build_mdp(S, A, params.horizon, std::move(P), std::move(R), std::move(d0)),
                     std::move(regions), 2, tile_coding(xs, ys), false};
}

Environment make_point_mass(const PointMassParams& params) {
  const int G = params.grid;
  if (G < 3) throw std::invalid_argument("make_point_mass: grid too small");
  std::vector<Cell> cells;
  for (int r = 0; r < G; ++r) {
    for (int c = 0; c < G; ++c) cells.push_back({r, c});
  }
  const int S = G * G;
  std::vector<double> reward(static_cast<std::size_t>(S), 0.0);
  std::vector<int> regions(static_cast<std::size_t>(S));
  std::vector<double> xs(static_cast<std::size_t>(S));
  std::vector<double> ys(static_cast<std::size_t>(S));
  for (int s = 0; s < S; ++s) {
    const auto [r, c] = cells[s];
    if (r >= G - 2 && c >= G - 2) reward[s] = 1.0;
    regions[s] = c < G / 2 ? 0 : 1;
    xs[s] = (c + 0.5) / G;
    ys[s] = (r + 0.5) / G;
  }
  return Environment{"point_mass", grid_mdp(G, G, cells, params.horizon, params.slip, reward, 0),
                     std::move(regions), 2, tile_coding(xs, ys), true};
}

}  // namespace olab
