#include "empeq/nash.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "empeq/linprog.h"

namespace empeq {
namespace {

constexpr double kVertexTol = 1e-9;

struct Vertex {
  std::vector<double> strategy;  // normalized
  std::vector<bool> labels;      // size k1 + k2
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Vertices (other than the origin) of {z >= 0 : M z <= 1}, where z has `dim`
// entries and M has `m` rows. Label offsets place "z_j = 0" labels at
// zero_label + j and "(M z)_r = 1" labels at tight_label + r.
std::vector<Vertex> polytope_vertices(const Eigen::MatrixXd& M,
                                      std::size_t zero_label,
                                      std::size_t tight_label,
                                      std::size_t total_labels,
                                      bool& degenerate) {
  const std::size_t dim = M.cols();
  const std::size_t m = M.rows();
  const std::size_t constraints = dim + m;
  std::vector<Vertex> out;
  std::vector<bool> pick(constraints, false);
  std::fill(pick.begin(), pick.begin() + dim, true);
  // Iterate over all dim-subsets of constraints via prev_permutation on a
  // sorted selector.
  do {
    Eigen::MatrixXd A(dim, dim);
    Eigen::VectorXd rhs(dim);
    std::size_t r = 0;
    for (std::size_t c = 0; c < constraints; ++c) {
      if (!pick[c]) continue;
      if (c < dim) {
        A.row(r).setZero();
        A(r, c) = 1.0;
        rhs(r) = 0.0;
      } else {
        A.row(r) = M.row(c - dim);
        rhs(r) = 1.0;
      }
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < static_cast<Eigen::Index>(dim)) continue;
    const Eigen::VectorXd z = lu.solve(rhs);
    if ((z.array() < -kVertexTol).any()) continue;
    if (((M * z).array() > 1.0 + kVertexTol).any()) continue;
    const double total = z.sum();
    if (total <= kVertexTol) continue;  // origin

    Vertex v;
    v.strategy.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      double p = z(j) / total;
      if (std::abs(p) < 1e-12) p = 0.0;
      v.strategy[j] = p;
    }
    const double s = std::accumulate(v.strategy.begin(), v.strategy.end(), 0.0);
    for (double& p : v.strategy) p /= s;
    v.labels.assign(total_labels, false);
    std::size_t tight = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      if (std::abs(z(j)) <= kVertexTol) {
        v.labels[zero_label + j] = true;
        ++tight;
      }
    }
    const Eigen::VectorXd Mz = M * z;
    for (std::size_t row = 0; row < m; ++row) {
      if (std::abs(Mz(row) - 1.0) <= kVertexTol) {
        v.labels[tight_label + row] = true;
        ++tight;
      }
    }
    if (tight > dim) degenerate = true;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Vertex& w) {
      return max_abs_diff(w.strategy, v.strategy) <= kVertexTol;
    });
    if (!seen) out.push_back(std::move(v));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(out.begin(), out.end(), [](const Vertex& a, const Vertex& b) {
    return a.strategy > b.strategy;
  });
  return out;
}

EquilibriumSet pure_equilibria(const Game& game) {
  EquilibriumSet set;
  set.pure_only = true;
  set.diagnostics.push_back("only pure equilibria are enumerated for " +
                            std::to_string(game.num_players()) + "-player games");
  for (std::size_t idx = 0; idx < game.num_profiles(); ++idx) {
    const auto digits = game.decode_profile(idx);
    const auto profile = MixedProfile::pure(game, digits);
    if (is_nash(game, profile, kNashTolerance)) set.isolated.push_back(profile);
  }
  return set;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

std::vector<std::size_t> NashComponent::support(std::size_t player) const {
  const auto& verts = player == 0 ? row_vertices : col_vertices;
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < verts.front().size(); ++a) {
    for (const auto& v : verts) {
      if (v[a] > 0.0) {
        out.push_back(a);
        break;
      }
    }
  }
  return out;
}

std::vector<MixedProfile> NashComponent::extreme_profiles() const {
  std::vector<MixedProfile> out;
  for (const auto& x : row_vertices) {
    for (const auto& y : col_vertices) out.push_back(MixedProfile({x, y}));
  }
  return out;
}

std::size_t NashComponent::free_player() const {
  if (!is_segment()) throw std::logic_error("component is not a segment");
  return row_vertices.size() == 2 ? 0 : 1;
}

MixedProfile NashComponent::at(double s) const {
  const std::size_t p = free_player();
  const auto& verts = p == 0 ? row_vertices : col_vertices;
  std::vector<double> mix(verts[0].size());
  for (std::size_t a = 0; a < mix.size(); ++a) {
    mix[a] = (1.0 - s) * verts[0][a] + s * verts[1][a];
  }
  if (p == 0) return MixedProfile({mix, col_vertices[0]});
  return MixedProfile({row_vertices[0], mix});
}

EquilibriumSet enumerate_nash(const Game& game) {
  if (game.num_profiles() > kNashProfileLimit) {
    throw std::invalid_argument("game exceeds the enumeration limit of " +
                                std::to_string(kNashProfileLimit) + " profiles");
  }
  if (game.num_players() != 2) return pure_equilibria(game);

  const std::size_t k1 = game.num_actions(0);
  const std::size_t k2 = game.num_actions(1);
  Eigen::MatrixXd A(k1, k2), B(k1, k2);
  for (std::size_t r = 0; r < k1; ++r) {
    for (std::size_t c = 0; c < k2; ++c) {
      A(r, c) = game.bimatrix(0, r, c);
      B(r, c) = game.bimatrix(1, r, c);
    }
  }
  // Positive payoffs make both best-response polytopes bounded.
  A.array() += 1.0 - A.minCoeff();
  B.array() += 1.0 - B.minCoeff();

  // Labels: 0..k1-1 player 0's actions, k1..k1+k2-1 player 1's actions.
  // P = {x >= 0 : B^T x <= 1}: x_a = 0 gives label a, (B^T x)_b = 1 label k1+b.
  // Q = {y >= 0 : A y <= 1}: (A y)_a = 1 gives label a, y_b = 0 label k1+b.
  bool degenerate = false;
  const auto xs = polytope_vertices(B.transpose(), 0, k1, k1 + k2, degenerate);
  const auto ys = polytope_vertices(A, k1, 0, k1 + k2, degenerate);

  EquilibriumSet set;
  if (degenerate) {
    set.diagnostics.push_back(
        "degenerate game: some best-response polytope vertex has surplus tight "
        "constraints");
  }

  std::vector<std::vector<bool>> adj(xs.size(), std::vector<bool>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      bool complete = true;
      for (std::size_t l = 0; l < k1 + k2 && complete; ++l) {
        complete = xs[i].labels[l] || ys[j].labels[l];
      }
      adj[i][j] = complete;
    }
  }

  if (xs.size() > 24) {
    throw std::runtime_error("too many extreme strategies for component search");
  }
  struct Biclique {
    std::uint32_t rows = 0;
    std::vector<std::size_t> cols;
  };
  std::vector<Biclique> cliques;
  for (std::uint32_t mask = 1; mask < (1u << xs.size()); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      bool all = true;
      for (std::size_t i = 0; i < xs.size() && all; ++i) {
        if ((mask >> i) & 1u) all = adj[i][j];
      }
      if (all) cols.push_back(j);
    }
    if (cols.empty()) continue;
    std::uint32_t closure = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      bool all = true;
      for (std::size_t j : cols) all = all && adj[i][j];
      if (all) closure |= 1u << i;
    }
    if (closure == mask) cliques.push_back({mask, std::move(cols)});
  }

  // Connected groups: cliques sharing a row or column vertex.
  std::vector<std::size_t> parent(cliques.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < cliques.size(); ++a) {
    for (std::size_t b = a + 1; b < cliques.size(); ++b) {
      bool share = (cliques[a].rows & cliques[b].rows) != 0;
      for (std::size_t j : cliques[a].cols) {
        share = share || std::find(cliques[b].cols.begin(), cliques[b].cols.end(),
                                   j) != cliques[b].cols.end();
      }
      if (share) parent[find_root(parent, a)] = find_root(parent, b);
    }
  }
  std::vector<std::size_t> group_of(cliques.size());
  std::vector<std::size_t> roots;
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    const std::size_t r = find_root(parent, c);
    auto it = std::find(roots.begin(), roots.end(), r);
    group_of[c] = it - roots.begin();
    if (it == roots.end()) roots.push_back(r);
  }

  for (std::size_t c = 0; c < cliques.size(); ++c) {
    NashComponent comp;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if ((cliques[c].rows >> i) & 1u) comp.row_vertices.push_back(xs[i].strategy);
    }
    for (std::size_t j : cliques[c].cols) comp.col_vertices.push_back(ys[j].strategy);
    if (comp.dimension() == 0) {
      set.isolated.push_back(MixedProfile({comp.row_vertices[0], comp.col_vertices[0]}));
    } else {
      comp.group = group_of[c];
      set.components.push_back(std::move(comp));
    }
  }
  return set;
}

std::vector<MixedProfile> extreme_equilibria(const EquilibriumSet& set) {
  std::vector<MixedProfile> out = set.isolated;
  for (const auto& comp : set.components) {
    for (auto& p : comp.extreme_profiles()) {
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    }
  }
  return out;
}

namespace {

// Max-norm distance from `profile` to conv(rows) x conv(cols), by LP over the
// convex weights and the distance bound d (maximize -d).
NearestEquilibrium project(const NashComponent& comp, const MixedProfile& profile) {
  const std::size_t nr = comp.row_vertices.size();
  const std::size_t nc = comp.col_vertices.size();
  const std::size_t d = nr + nc;
  LinearProgram lp(d + 1);
  using Sense = LinearProgram::Sense;
  std::vector<double> sum_r(d + 1, 0.0), sum_c(d + 1, 0.0);
  for (std::size_t i = 0; i < nr; ++i) sum_r[i] = 1.0;
  for (std::size_t j = 0; j < nc; ++j) sum_c[nr + j] = 1.0;
  lp.add_row(sum_r, Sense::kEqual, 1.0);
  lp.add_row(sum_c, Sense::kEqual, 1.0);
  for (std::size_t player = 0; player < 2; ++player) {
    const auto& verts = player == 0 ? comp.row_vertices : comp.col_vertices;
    const std::size_t offset = player == 0 ? 0 : nr;
    for (std::size_t a = 0; a < verts[0].size(); ++a) {
      std::vector<double> up(d + 1, 0.0), down(d + 1, 0.0);
      for (std::size_t v = 0; v < verts.size(); ++v) {
        up[offset + v] = verts[v][a];
        down[offset + v] = verts[v][a];
      }
      up[d] = -1.0;
      down[d] = 1.0;
      lp.add_row(up, Sense::kLessEqual, profile.prob(player, a));
      lp.add_row(down, Sense::kGreaterEqual, profile.prob(player, a));
    }
  }
  std::vector<double> obj(d + 1, 0.0);
  obj[d] = -1.0;
  lp.set_objective(obj);
  const auto res = solve_exact(lp);
  if (res.status != LpStatus::kOptimal) {
    throw std::runtime_error("projection onto equilibrium component failed");
  }
  std::vector<std::vector<double>> s(2);
  s[0].assign(comp.row_vertices[0].size(), 0.0);
  s[1].assign(comp.col_vertices[0].size(), 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t a = 0; a < s[0].size(); ++a) {
      s[0][a] += res.values[i] * comp.row_vertices[i][a];
    }
  }
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t a = 0; a < s[1].size(); ++a) {
      s[1][a] += res.values[nr + j] * comp.col_vertices[j][a];
    }
  }
  MixedProfile nearest(std::move(s));
  return {nearest, nearest.distance(profile)};
}

}  // namespace

NearestEquilibrium nearest_equilibrium(const EquilibriumSet& set,
                                       const MixedProfile& profile) {
  std::optional<NearestEquilibrium> best;
  for (const auto& p : set.isolated) {
    const double d = p.distance(profile);
    if (!best || d < best->distance) best = NearestEquilibrium{p, d};
  }
  for (const auto& comp : set.components) {
    auto candidate = project(comp, profile);
    if (!best || candidate.distance < best->distance) best = std::move(candidate);
  }
  if (!best) throw std::invalid_argument("equilibrium set is empty");
  return *best;
}

bool contains(const EquilibriumSet& set, const MixedProfile& profile, double tol) {
  if (set.isolated.empty() && set.components.empty()) return false;
  return nearest_equilibrium(set, profile).distance <= tol;
}

}  // namespace empeq
