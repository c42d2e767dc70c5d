#include "meanfield/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meanfield/errors.hpp"
#include "meanfield/parallel.hpp"
#include "meanfield/rng.hpp"

namespace meanfield {

const char* to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "marginal";
}

namespace {

// Strong connectivity of the subgraph of edges with strictly positive rate.
bool irreducible_at(const MeanFieldModel& model, const Vector& xi) {
  const int n = model.num_states();
  std::vector<std::vector<int>> fwd(n), rev(n);
  for (int e = 0; e < model.graph().num_edges(); ++e) {
    if (model.rate_raw(e, xi) <= 0.0) continue;
    const auto& [a, b] = model.graph().edge(e);
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

SimplexPoint equilibrium_response(const MeanFieldModel& model, const SimplexPoint& xi) {
  const int n = model.num_states();
  if (xi.size() != n) throw ValidationError("measure does not match the model's state count");
  const Vector& x = xi.weights();
  if (!irreducible_at(model, x)) {
    throw ReducibilityError(
        "frozen chain is not irreducible at xi=" + to_string(xi) +
        "; its stationary distribution cannot serve as an equilibrium response");
  }

  Matrix L = build_rate_matrix(model, xi);
  // Balance equations are rank n-1; swap the last one for normalization.
  Matrix A = L.transpose();
  A.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Vector m = A.partialPivLu().solve(b);

  double scale = 1.0;
  for (int z = 0; z < n; ++z) scale = std::max(scale, std::abs(L(z, z)));
  const double residual = (L.transpose() * m).lpNorm<Eigen::Infinity>();
  if (!m.allFinite() || residual > 1e-12 * scale) {
    std::ostringstream os;
    os << "stationary solve failed at xi=" << to_string(xi) << ": balance residual "
       << residual;
    throw NumericsError(os.str());
  }
  return SimplexPoint(std::move(m));
}

namespace {

// Finite-difference Jacobian of the drift along arbitrary directions. Columns
// are central where both probe points stay in the closed simplex, one-sided
// otherwise; the flag reports whether any column fell back.
Matrix directional_jacobian(const MeanFieldModel& model, const Vector& x,
                            const Matrix& directions, double h, bool* one_sided) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(directions.cols());
  Matrix J(n, m);
  for (int j = 0; j < m; ++j) {
    const Vector d = directions.col(j);
    const Vector plus = x + h * d;
    const Vector minus = x - h * d;
    const bool plus_ok = (plus.array() >= 0.0).all();
    const bool minus_ok = (minus.array() >= 0.0).all();
    Vector col;
    if (plus_ok && minus_ok) {
      col = (drift_raw(model, plus) - drift_raw(model, minus)) / (2.0 * h);
    } else if (plus_ok) {
      col = (drift_raw(model, plus) - drift_raw(model, x)) / h;
      if (one_sided) *one_sided = true;
    } else if (minus_ok) {
      col = (drift_raw(model, x) - drift_raw(model, minus)) / h;
      if (one_sided) *one_sided = true;
    } else {
      throw NumericsError("no feasible finite-difference direction; step too large");
    }
    // Drift components sum to zero exactly; scrub the roundoff so the column
    // stays in the tangent space.
    col.array() -= col.mean();
    J.col(j) = col;
  }
  return J;
}

Vector clip_to_simplex(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::max(v(i), 0.0);
  const double s = v.sum();
  if (s <= 0.0) throw NumericsError("iterate collapsed to the zero vector");
  return v / s;
}

struct SolveOutcome {
  Vector point;
  double residual = 0.0;
  bool converged = false;
};

// Newton on the drift residual over the affine hull of the simplex, with
// projection and backtracking. Works where equilibrium_response does not
// (boundary points with a reducible frozen chain).
SolveOutcome polish(const MeanFieldModel& model, Vector x, const FixedPointOptions& opt) {
  const int n = static_cast<int>(x.size());
  Matrix axes = Matrix::Identity(n, n);
  SolveOutcome out;
  out.point = x;
  out.residual = drift_raw(model, x).lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 60; ++it) {
    const Vector g = drift_raw(model, x);
    const double res = g.lpNorm<Eigen::Infinity>();
    if (res < out.residual) {
      out.residual = res;
      out.point = x;
    }
    if (res < 1e-13) break;

    const double h = opt.fd_step * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    Matrix J = directional_jacobian(model, x, axes, h, nullptr);
    Matrix M = Matrix::Zero(n + 1, n + 1);
    M.topLeftCorner(n, n) = J;
    M.topRightCorner(n, 1).setOnes();
    M.bottomLeftCorner(1, n).setOnes();
    Vector rhs = Vector::Zero(n + 1);
    rhs.head(n) = -g;
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.rank() < n + 1) break;  // singular tangent Jacobian, cannot polish further
    const Vector step = lu.solve(rhs).head(n);

    double s = 1.0;
    bool moved = false;
    while (s >= 1.0 / 1024) {
      Vector cand = clip_to_simplex(x + s * step);
      const double cand_res = drift_raw(model, cand).lpNorm<Eigen::Infinity>();
      if (cand_res < res) {
        x = cand;
        moved = true;
        break;
      }
      s /= 2;
    }
    if (!moved) break;
  }
  out.converged = out.residual <= opt.tol;
  return out;
}

// Damped self-consistent iteration xi <- (1-a) xi + a m(xi), falling back to
// Newton as soon as the response is unavailable or the residual is small
// enough for quadratic convergence to take over.
SolveOutcome solve_from(const MeanFieldModel& model, Vector xi,
                        const FixedPointOptions& opt) {
  constexpr double kHandoverResidual = 1e-6;
  double alpha = 0.5;
  int worsened = 0;
  double prev_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double res = drift_raw(model, xi).lpNorm<Eigen::Infinity>();
    if (res < kHandoverResidual) break;
    try {
      const SimplexPoint m = equilibrium_response(model, SimplexPoint(xi));
      xi = (1.0 - alpha) * xi + alpha * m.weights();
    } catch (const ReducibilityError&) {
      break;
    }
    if (res > prev_res) {
      if (++worsened >= 2) {
        alpha = std::max(alpha / 2, 1.0 / 64);
        worsened = 0;
      }
    } else {
      worsened = 0;
    }
    prev_res = res;
  }
  return polish(model, std::move(xi), opt);
}

void validate_fixed_point_options(const FixedPointOptions& o) {
  if (o.n_starts < 0) throw ValidationError("n_starts must be nonnegative");
  if (!(o.tol > 0.0)) throw ValidationError("tol must be positive");
  if (!(o.dedup_tol > 0.0)) throw ValidationError("dedup_tol must be positive");
  if (!(o.fd_step > 0.0)) throw ValidationError("fd_step must be positive");
  if (o.spectral_tol < 0.0) throw ValidationError("spectral_tol must be nonnegative");
  if (o.max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (o.workers < 1) throw ValidationError("workers must be at least 1");
}

}  // namespace

StabilityReport classify_stability(const MeanFieldModel& model, const SimplexPoint& point,
                                   double fd_step, double spectral_tol) {
  if (point.size() != model.num_states()) {
    throw ValidationError("point does not match the model's state count");
  }
  if (!(fd_step > 0.0)) throw ValidationError("fd_step must be positive");
  if (spectral_tol < 0.0) throw ValidationError("spectral_tol must be nonnegative");

  const int n = model.num_states();
  const Vector& x = point.weights();
  StabilityReport report;
  if (n == 1) {
    report.stability = Stability::marginal;
    return report;
  }

  // Tangent directions e_j - e_j0 with j0 the heaviest coordinate: always
  // feasible on the plus side since x_j0 >= 1/n is far above the step.
  int j0 = 0;
  x.maxCoeff(&j0);
  Matrix T(n, n - 1);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (j == j0) continue;
    Vector d = Vector::Zero(n);
    d(j) = 1.0;
    d(j0) = -1.0;
    T.col(col++) = d;
  }

  const double h = fd_step * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  const Matrix JT = directional_jacobian(model, x, T, h, &report.one_sided);
  // Coordinates of each image in the T basis: solve T A = JT in least squares.
  const Matrix A = T.colPivHouseholderQr().solve(JT);

  Eigen::EigenSolver<Matrix> es(A);
  if (es.info() != Eigen::Success) {
    throw NumericsError("eigenvalue computation failed for the tangent Jacobian");
  }
  report.spectrum.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) report.spectrum[i] = es.eigenvalues()(i);
  std::sort(report.spectrum.begin(), report.spectrum.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });

  const double max_re = report.spectrum.front().real();
  if (max_re < -spectral_tol) {
    report.stability = Stability::stable;
  } else if (max_re > spectral_tol) {
    report.stability = Stability::unstable;
  } else {
    report.stability = Stability::marginal;
  }
  return report;
}

std::vector<FixedPointReport> find_fixed_points(const MeanFieldModel& model,
                                                const FixedPointOptions& options) {
  validate_fixed_point_options(options);
  const int n = model.num_states();

  std::vector<Vector> starts;
  for (int z = 0; z < n; ++z) starts.push_back(SimplexPoint::vertex(n, z).weights());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vector v = Vector::Zero(n);
      v(i) = 0.5;
      v(j) = 0.5;
      starts.push_back(v);
    }
  }
  starts.push_back(Vector::Constant(n, 1.0 / n));
  RngStream stream(RngStream::derive(options.seed, 0xD161));
  for (int k = 0; k < options.n_starts; ++k) {
    Vector v(n);
    for (int z = 0; z < n; ++z) v(z) = stream.exponential(1.0);
    starts.push_back(v / v.sum());
  }

  std::vector<SolveOutcome> outcomes(starts.size());
  parallel_for(static_cast<int>(starts.size()), options.workers,
               [&](int i) { outcomes[i] = solve_from(model, starts[i], options); });

  // Collapse converged outcomes onto distinct points, keeping the best
  // residual as the representative. Start order makes this deterministic.
  std::vector<FixedPointReport> reports;
  for (const auto& oc : outcomes) {
    if (!oc.converged) continue;
    bool merged = false;
    for (auto& rep : reports) {
      if ((oc.point - rep.point.weights()).lpNorm<Eigen::Infinity>() <= options.dedup_tol) {
        ++rep.starts_converged;
        if (oc.residual < rep.residual) {
          rep.point = SimplexPoint(oc.point);
          rep.residual = oc.residual;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      FixedPointReport rep{SimplexPoint(oc.point), oc.residual, Stability::marginal, {},
                           false, 1};
      reports.push_back(std::move(rep));
    }
  }

  std::sort(reports.begin(), reports.end(),
            [](const FixedPointReport& a, const FixedPointReport& b) {
              for (int i = 0; i < a.point.size(); ++i) {
                if (a.point[i] != b.point[i]) return a.point[i] < b.point[i];
              }
              return false;
            });

  for (auto& rep : reports) {
    auto stab = classify_stability(model, rep.point, options.fd_step, options.spectral_tol);
    rep.stability = stab.stability;
    rep.spectrum = std::move(stab.spectrum);
    rep.one_sided = stab.one_sided;
  }
  return reports;
}

}  // namespace meanfield
