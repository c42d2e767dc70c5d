#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "meanfield/simplex.hpp"

namespace meanfield {

// Finite state space with string labels; indices are positions in the label
// list and are what every other API speaks.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int z) const;
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
};

// Directed transition structure. Self-loops are rejected (continuous-time
// chains have none) and the graph must be strongly connected so that every
// frozen chain has a chance of being irreducible.
class TransitionGraph {
 public:
  TransitionGraph(int num_states, std::vector<std::pair<int, int>> edges);

  int num_states() const { return num_states_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::pair<int, int>& edge(int e) const { return edges_[e]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int num_states_;
  std::vector<std::pair<int, int>> edges_;
};

// Per-edge jump rate as a function of the population measure. Must return a
// finite nonnegative value everywhere on the closed simplex.
using RateFunction = std::function<double(int edge, const Vector& xi)>;

class MeanFieldModel {
 public:
  MeanFieldModel(std::string name, StateSpace states, TransitionGraph graph,
                 RateFunction rate);

  const std::string& name() const { return name_; }
  const StateSpace& states() const { return states_; }
  const TransitionGraph& graph() const { return graph_; }
  int num_states() const { return states_.size(); }

  // Evaluates one edge rate, rejecting negative or non-finite values with a
  // ModelError naming the edge and the measure.
  double rate(int edge, const SimplexPoint& xi) const { return rate_raw(edge, xi.weights()); }
  double rate_raw(int edge, const Vector& xi) const;

 private:
  std::string name_;
  StateSpace states_;
  TransitionGraph graph_;
  RateFunction rate_;
};

// Generator of the frozen chain at xi: off-diagonal (z, z') entries are edge
// rates, diagonals make rows sum to zero.
Matrix build_rate_matrix(const MeanFieldModel& model, const SimplexPoint& xi);

// Net probability flux xi^T Lambda_xi, the vector field of the macroscopic
// dynamics. The raw overload skips simplex validation for integrator stages,
// clipping stray negative components to zero before evaluating rates.
Vector drift(const MeanFieldModel& model, const SimplexPoint& xi);
Vector drift_raw(const MeanFieldModel& model, const Vector& xi);

// Chain 0..K with escalating backoff: forward edges (i, i+1) fire at
// c_i * (1 - exp(-<c, xi>)), reset edges (i, 0) at c_i * exp(-<c, xi>).
// Edges are ordered forward chain first, then resets by source state.
MeanFieldModel wlan_model(const std::vector<double>& attempt_rates);

// Two states S, I; infection S->I at tau * xi(I), recovery I->S at rho.
MeanFieldModel sis_model(double contact_rate, double recovery_rate);

// Rate vocabulary for user-assembled models.
struct RateExpr {
  enum class Kind {
    constant,  // coeff
    linear,    // coeff * xi(state)
    collide,   // coeff * (1 - exp(-<weights, xi>))
    success,   // coeff * exp(-<weights, xi>)
  };
  Kind kind = Kind::constant;
  double coeff = 0.0;
  int state = -1;  // linear only
};

struct EdgeSpec {
  int from = -1;
  int to = -1;
  RateExpr expr;
};

// weights is required as soon as any edge uses collide or success.
MeanFieldModel custom_model(std::string name, StateSpace states,
                            std::vector<EdgeSpec> edges,
                            std::vector<double> weights = {});

}  // namespace meanfield
