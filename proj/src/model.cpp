#include "meanfield/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "meanfield/errors.hpp"

namespace meanfield {

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("state space needs at least one state");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ValidationError("state labels must be non-empty");
    if (!seen.insert(l).second) throw ValidationError("duplicate state label: " + l);
  }
}

const std::string& StateSpace::label(int z) const {
  if (z < 0 || z >= size()) throw ValidationError("state index out of range");
  return labels_[z];
}

int StateSpace::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw ValidationError("unknown state label: " + label);
}

namespace {

// Strong connectivity by forward and reverse reachability from node 0.
bool strongly_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (const auto& [a, b] : edges) {
    fwd[a].push_back(b);
    rev[b].push_back(a);
  }
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

}  // namespace

TransitionGraph::TransitionGraph(int num_states, std::vector<std::pair<int, int>> edges)
    : num_states_(num_states), edges_(std::move(edges)) {
  if (num_states_ < 2) throw ValidationError("transition graph needs at least two states");
  if (edges_.empty()) throw ValidationError("transition graph needs at least one edge");
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges_) {
    if (a < 0 || a >= num_states_ || b < 0 || b >= num_states_) {
      throw ValidationError("edge endpoint out of range: (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
    }
    if (a == b) {
      throw ValidationError("self-loop on state " + std::to_string(a) + " is not allowed");
    }
    if (!seen.insert({a, b}).second) {
      throw ValidationError("duplicate edge (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
    }
  }
  if (!strongly_connected(num_states_, edges_)) {
    throw ValidationError("transition graph is not strongly connected");
  }
}

MeanFieldModel::MeanFieldModel(std::string name, StateSpace states, TransitionGraph graph,
                               RateFunction rate)
    : name_(std::move(name)),
      states_(std::move(states)),
      graph_(std::move(graph)),
      rate_(std::move(rate)) {
  if (name_.empty()) throw ValidationError("model needs a name");
  if (graph_.num_states() != states_.size()) {
    throw ValidationError("transition graph size does not match the state space");
  }
  if (!rate_) throw ValidationError("model needs a rate function");
}

double MeanFieldModel::rate_raw(int edge, const Vector& xi) const {
  const double r = rate_(edge, xi);
  if (!std::isfinite(r) || r < 0.0) {
    const auto& [a, b] = graph_.edge(edge);
    std::ostringstream os;
    os << "rate for edge " << states_.label(a) << " -> " << states_.label(b) << " at xi=(";
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
      if (i) os << ", ";
      os << xi(i);
    }
    os << ") is " << r;
    throw ModelError(os.str());
  }
  return r;
}

Matrix build_rate_matrix(const MeanFieldModel& model, const SimplexPoint& xi) {
  const int n = model.num_states();
  Matrix L = Matrix::Zero(n, n);
  for (int e = 0; e < model.graph().num_edges(); ++e) {
    const auto& [a, b] = model.graph().edge(e);
    L(a, b) = model.rate(e, xi);
  }
  for (int z = 0; z < n; ++z) {
    L(z, z) = 0.0;
    L(z, z) = -L.row(z).sum();
  }
  return L;
}

Vector drift_raw(const MeanFieldModel& model, const Vector& xi) {
  // Integrator stages can sit a hair off the simplex; rates expect the closed
  // simplex, so evaluate them on a clipped copy while fluxes keep the raw mass.
  Vector clipped = xi.cwiseMax(0.0);
  const int n = model.num_states();
  Vector d = Vector::Zero(n);
  for (int e = 0; e < model.graph().num_edges(); ++e) {
    const auto& [a, b] = model.graph().edge(e);
    const double flux = clipped(a) * model.rate_raw(e, clipped);
    d(a) -= flux;
    d(b) += flux;
  }
  return d;
}

Vector drift(const MeanFieldModel& model, const SimplexPoint& xi) {
  return drift_raw(model, xi.weights());
}

MeanFieldModel wlan_model(const std::vector<double>& attempt_rates) {
  const int K = static_cast<int>(attempt_rates.size()) - 1;
  if (K < 1) throw ValidationError("backoff chain needs at least two stages");
  for (double c : attempt_rates) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw ValidationError("attempt rates must be positive and finite");
    }
  }
  std::vector<std::string> labels;
  for (int i = 0; i <= K; ++i) labels.push_back(std::to_string(i));

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < K; ++i) edges.push_back({i, i + 1});
  for (int i = 1; i <= K; ++i) edges.push_back({i, 0});

  Vector c = Eigen::Map<const Vector>(attempt_rates.data(), K + 1);
  auto rate = [c, K](int e, const Vector& xi) {
    const double collision = 1.0 - std::exp(-c.dot(xi));
    if (e < K) return c(e) * collision;           // (e, e+1)
    const int i = e - K + 1;                      // (i, 0), i = 1..K
    return c(i) * (1.0 - collision);
  };
  return MeanFieldModel("wlan", StateSpace(std::move(labels)),
                        TransitionGraph(K + 1, std::move(edges)), std::move(rate));
}

MeanFieldModel sis_model(double contact_rate, double recovery_rate) {
  if (!(contact_rate > 0.0) || !std::isfinite(contact_rate)) {
    throw ValidationError("contact rate must be positive and finite");
  }
  if (!(recovery_rate > 0.0) || !std::isfinite(recovery_rate)) {
    throw ValidationError("recovery rate must be positive and finite");
  }
  auto rate = [contact_rate, recovery_rate](int e, const Vector& xi) {
    return e == 0 ? contact_rate * xi(1) : recovery_rate;
  };
  return MeanFieldModel("sis", StateSpace({"S", "I"}),
                        TransitionGraph(2, {{0, 1}, {1, 0}}), std::move(rate));
}

MeanFieldModel custom_model(std::string name, StateSpace states,
                            std::vector<EdgeSpec> edges, std::vector<double> weights) {
  const int n = states.size();
  bool needs_weights = false;
  std::vector<std::pair<int, int>> pairs;
  std::vector<RateExpr> exprs;
  for (const auto& spec : edges) {
    pairs.push_back({spec.from, spec.to});
    exprs.push_back(spec.expr);
    const RateExpr& ex = spec.expr;
    if (!std::isfinite(ex.coeff) || ex.coeff < 0.0) {
      throw ValidationError("edge rate coefficients must be nonnegative and finite");
    }
    switch (ex.kind) {
      case RateExpr::Kind::linear:
        if (ex.state < 0 || ex.state >= n) {
          throw ValidationError("linear rate references an unknown state");
        }
        break;
      case RateExpr::Kind::collide:
      case RateExpr::Kind::success:
        needs_weights = true;
        break;
      case RateExpr::Kind::constant:
        break;
    }
  }
  if (needs_weights) {
    if (static_cast<int>(weights.size()) != n) {
      throw ValidationError("collide/success rates need one weight per state");
    }
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) {
        throw ValidationError("rate weights must be nonnegative and finite");
      }
    }
  }
  Vector w = needs_weights ? Eigen::Map<const Vector>(weights.data(), n) : Vector();
  auto rate = [exprs, w](int e, const Vector& xi) {
    const RateExpr& ex = exprs[e];
    switch (ex.kind) {
      case RateExpr::Kind::constant:
        return ex.coeff;
      case RateExpr::Kind::linear:
        return ex.coeff * xi(ex.state);
      case RateExpr::Kind::collide:
        return ex.coeff * (1.0 - std::exp(-w.dot(xi)));
      case RateExpr::Kind::success:
        return ex.coeff * std::exp(-w.dot(xi));
    }
    return 0.0;
  };
  return MeanFieldModel(std::move(name), std::move(states),
                        TransitionGraph(n, std::move(pairs)), std::move(rate));
}

}  // namespace meanfield
