#pragma once

// Built-in benchmark environments. Each carries a default region partition
// (used by the region-expert oracle family) and a tile-coding feature map
// for the ensemble estimator and linear learner policies.

#include <span>
#include <string>
#include <vector>

#include "olab/mdp.hpp"

namespace olab {

/// Dense per-state feature vectors with cached nonzero indices.
class FeatureMap {
 public:
  FeatureMap(int num_states, int dim, std::vector<double> values);

  static FeatureMap one_hot(int num_states);

  int num_states() const { return num_states_; }
  int dim() const { return dim_; }
  std::span<const double> row(int s) const {
    return {values_.data() + static_cast<std::size_t>(s) * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const int> nonzeros(int s) const { return nonzeros_[static_cast<std::size_t>(s)]; }

 private:
  int num_states_;
  int dim_;
  std::vector<double> values_;
  std::vector<std::vector<int>> nonzeros_;
};

/// Tile coding over points in [0,1]^2: `tilings` offset grids of
/// `tiles` x `tiles` cells, one active binary feature per tiling.
FeatureMap tile_coding(std::span<const double> xs, std::span<const double> ys, int tilings = 2, int tiles = 8);

struct Environment {
  std::string name;
  MdpSpec mdp;
  std::vector<int> regions;  ///< state -> block id in [0, num_regions)
  int num_regions = 1;
  FeatureMap features;
  /// Learner uses a linear softmax over `features` instead of per-state logits.
  bool featurized = false;
};

struct TwoRoomsParams {
  int horizon = 30;
  double slip = 0.1;
};
/// 5x5 grid split by a wall in the middle column with a single door.
/// Start top-left, reward 1 per step spent in the bottom-right cell.
/// Actions: up, down, left, right, stay. Regions: left room, right room.
Environment make_two_rooms(const TwoRoomsParams& params = {});

struct ChainParams {
  int length = 10;
  int horizon = 15;
  double slip = 0.1;
};
/// Left/right chain: small reward for pushing left at the left end, reward 1
/// for pushing right at the right end. Regions: left half, right half.
Environment make_chain(const ChainParams& params = {});

struct PointMassParams {
  int grid = 10;
  int horizon = 24;
  double slip = 0.1;
};
/// Point mass on a grid x grid lattice over [0,1]^2 with a 2x2 target
/// block in the far corner. Featurized: the learner sees tile codes only.
Environment make_point_mass(const PointMassParams& params = {});

/// Grid helpers shared by the gridworld builders.
namespace grid {
enum Move : int { Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4 };
constexpr int kNumMoves = 5;
}  // namespace grid

}  // namespace olab
