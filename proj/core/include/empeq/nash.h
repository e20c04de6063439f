#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "empeq/game.h"

namespace empeq {

// A maximal convex set of equilibria of a two-player game: every profile
// (x, y) with x in conv(row_vertices) and y in conv(col_vertices).
struct NashComponent {
  std::vector<std::vector<double>> row_vertices;
  std::vector<std::vector<double>> col_vertices;
  // Components sharing an extreme strategy belong to the same connected
  // group of the equilibrium set.
  std::size_t group = 0;

  std::size_t dimension() const {
    return row_vertices.size() + col_vertices.size() - 2;
  }
  bool is_segment() const { return dimension() == 1; }

  // Union of the supports of the extreme strategies.
  std::vector<std::size_t> support(std::size_t player) const;
  std::vector<MixedProfile> extreme_profiles() const;

  // Segment only: (1 - s) * first vertex + s * second vertex of the player
  // that varies.
  MixedProfile at(double s) const;
  // Which player varies along a segment.
  std::size_t free_player() const;
};

struct EquilibriumSet {
  std::vector<MixedProfile> isolated;
  std::vector<NashComponent> components;
  // Set for games with other than two players: only pure equilibria are
  // enumerated there.
  bool pure_only = false;
  std::vector<std::string> diagnostics;
};

inline constexpr std::size_t kNashProfileLimit = 4096;
inline constexpr double kNashTolerance = 1e-9;

// Two-player games: extreme equilibria by vertex enumeration of the
// best-response polytopes, grouped into maximal Nash subsets. Other player
// counts: pure equilibria only.
EquilibriumSet enumerate_nash(const Game& game);

// Every isolated equilibrium and every extreme profile of every component.
std::vector<MixedProfile> extreme_equilibria(const EquilibriumSet& set);

struct NearestEquilibrium {
  MixedProfile profile;
  double distance = 0.0;
};

// Max-norm projection onto the enumerated set. Throws when the set is empty.
NearestEquilibrium nearest_equilibrium(const EquilibriumSet& set,
                                       const MixedProfile& profile);

// Whether the profile lies (within tol) in the enumerated set.
bool contains(const EquilibriumSet& set, const MixedProfile& profile,
              double tol = kNashTolerance);

}  // namespace empeq
