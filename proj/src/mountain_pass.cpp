#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fracp/eigensolver.hpp"
#include "fracp/parallel.hpp"

namespace fracp {

namespace detail {
GridFunction preconditioned_direction(const KernelOperator& K, const GridFunction& u,
                                      const GridFunction& r);
}

namespace {

constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

GridFunction tangent_residual(const KernelOperator& K, const GridFunction& u, double R) {
  const Power pw(K.params().p);
  GridFunction r = energy_gradient(K, u) / K.params().p;
  const double hN = K.cell_volume();
  for (Eigen::Index i = 0; i < u.size(); ++i) r(i) -= R * hN * pw.jp(u(i));
  return r;
}

// Weighted median of values[i] under weights w[i].
double weighted_median(const std::vector<double>& values, const std::vector<double>& w) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  const double half = 0.5 * std::accumulate(w.begin(), w.end(), 0.0);
  double acc = 0.0;
  for (std::size_t i : order) {
    acc += w[i];
    if (acc >= half) return values[i];
  }
  return values[order.back()];
}

// Re-spaces interior nodes to equal L^p arc length along the piecewise-linear path.
void reparametrize(const KernelOperator& K, std::vector<GridFunction>& nodes) {
  const std::size_t m = nodes.size();
  std::vector<double> arc(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) arc[i] = arc[i - 1] + lp_norm(K, nodes[i] - nodes[i - 1]);
  const double total = arc.back();
  if (!(total > 0.0)) throw Error(ErrorCode::DegeneratePath, "path has zero length");
  std::vector<GridFunction> out(m);
  out.front() = nodes.front();
  out.back() = nodes.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(m - 1);
    while (seg + 2 < m && arc[seg + 1] < target) ++seg;
    const double len = arc[seg + 1] - arc[seg];
    const double a = len > 0.0 ? std::clamp((target - arc[seg]) / len, 0.0, 1.0) : 0.0;
    const GridFunction mix = (1.0 - a) * nodes[seg] + a * nodes[seg + 1];
    out[k] = mix.cwiseAbs().maxCoeff() > 0.0 ? normalize(K, mix) : nodes[seg];
  }
  nodes.swap(out);
}

}  // namespace

GridFunction sign_changing_seed(const KernelOperator& K, const GridFunction& u1) {
  const LatticeDomain& dom = K.domain();
  if (static_cast<std::size_t>(u1.size()) != dom.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
  if (dom.size() < 2) throw Error(ErrorCode::DegeneratePath, "a single node admits no sign change");
  const Power pw(K.params().p);
  GridFunction w = u1.cwiseAbs();

  if (dom.component_count() >= 2) {
    // Greedy balance of L^p mass between the two signs, heaviest component first.
    std::vector<double> mass(dom.component_count(), 0.0);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      mass[dom.component_ids()[i]] += pw.abs_pow(w(static_cast<Eigen::Index>(i)));
    }
    std::vector<std::size_t> order(mass.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return mass[a] > mass[b]; });
    std::vector<int> sign(mass.size(), 1);
    double plus = 0.0, minus = 0.0;
    for (std::size_t c : order) {
      if (plus <= minus) {
        plus += mass[c];
      } else {
        minus += mass[c];
        sign[c] = -1;
      }
    }
    for (std::size_t i = 0; i < dom.size(); ++i) {
      w(static_cast<Eigen::Index>(i)) *= sign[dom.component_ids()[i]];
    }
    return normalize(K, w);
  }

  // Connected: split at the mass-weighted median along the widest coordinate axis.
  int axis = 0;
  double best_spread = -1.0;
  for (int a = 0; a < dom.dim(); ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      lo = std::min(lo, dom.coordinate(i)[a]);
      hi = std::max(hi, dom.coordinate(i)[a]);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = a;
    }
  }
  std::vector<double> coord(dom.size()), mass(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    coord[i] = dom.coordinate(i)[axis];
    mass[i] = pw.abs_pow(w(static_cast<Eigen::Index>(i)));
  }
  const double median = weighted_median(coord, mass);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) *= coord[i] - median;
  }
  if (w.maxCoeff() <= 0.0 || w.minCoeff() >= 0.0) {
    // Median landed on an extreme column; shift to the midpoint of the spread.
    w = u1.cwiseAbs();
    const auto [lo, hi] = std::minmax_element(coord.begin(), coord.end());
    const double mid = 0.5 * (*lo + *hi);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      w(static_cast<Eigen::Index>(i)) *= coord[i] - mid;
    }
    if (w.maxCoeff() <= 0.0 || w.minCoeff() >= 0.0) {
      throw Error(ErrorCode::DegeneratePath, "could not build a sign-changing seed");
    }
  }
  return normalize(K, w);
}

MountainPass relax_mountain_pass(const KernelOperator& K, const GridFunction& u1,
                                 const SolverOptions& opts) {
  validate(opts);
  if (static_cast<std::size_t>(u1.size()) != K.size()) {
    throw Error(ErrorCode::DimensionMismatch, "grid function size differs from the domain");
  }
  const GridFunction start = normalize(K, u1);
  const GridFunction finish = -start;
  if (lp_norm(K, start - finish) == 0.0) {
    throw Error(ErrorCode::DegeneratePath, "path endpoints coincide");
  }
  const GridFunction seed = sign_changing_seed(K, start);

  const auto m = static_cast<std::size_t>(opts.path_nodes);
  const std::size_t half = (m - 1) / 2;
  MountainPass mp;
  auto& nodes = mp.path.nodes;
  nodes.resize(m);
  for (std::size_t i = 0; i <= half; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(half);
    nodes[i] = normalize(K, (1.0 - t) * start + t * seed);
  }
  for (std::size_t i = half + 1; i < m; ++i) {
    const double t = static_cast<double>(i - half) / static_cast<double>(half);
    nodes[i] = normalize(K, (1.0 - t) * seed + t * finish);
  }
  nodes.front() = start;
  nodes.back() = finish;
  reparametrize(K, nodes);

  mp.energies.assign(m, 0.0);
  auto refresh_energies = [&] {
    parallel_for(m, [&](std::size_t i) { mp.energies[i] = rayleigh_quotient(K, nodes[i]); });
  };
  refresh_energies();

  std::vector<double> history;
  for (int iter = 1; iter <= opts.path_iters; ++iter) {
    std::vector<GridFunction> next = nodes;
    parallel_for(m - 2, [&](std::size_t j) {
      const std::size_t i = j + 1;
      const GridFunction& u = nodes[i];
      const double R = mp.energies[i];
      const GridFunction r = tangent_residual(K, u, R);
      GridFunction d = detail::preconditioned_direction(K, u, r);
      GridFunction tan = nodes[i + 1] - nodes[i - 1];
      const double tn = tan.norm();
      if (tn > 0.0) tan /= tn;
      if (tn > 0.0) d -= d.dot(tan) * tan;
      for (double tau = opts.step0; tau > 1e-6; tau *= 0.5) {
        const GridFunction raw = u + tau * d;
        if (raw.cwiseAbs().maxCoeff() == 0.0) continue;
        const GridFunction cand = normalize(K, raw);
        if (rayleigh_quotient(K, cand) <= R + kRoundoff * std::abs(R)) {
          next[i] = cand;
          break;
        }
      }
    });
    nodes.swap(next);
    reparametrize(K, nodes);
    refresh_energies();
    const double cur_max = *std::max_element(mp.energies.begin(), mp.energies.end());
    mp.iterations = iter;
    history.push_back(cur_max);
    // Node maxima jitter around the pass as nodes slide over it; the exact level comes
    // from polishing, so the path only needs to settle.
    if (history.size() >= 20) {
      const auto [lo, hi] = std::minmax_element(history.end() - 10, history.end());
      if (*hi - *lo <= 1e-2 * std::abs(*hi)) break;
    }
  }
  const auto it = std::max_element(mp.energies.begin(), mp.energies.end());
  mp.pass_node = static_cast<std::size_t>(it - mp.energies.begin());
  mp.path_max = *it;
  return mp;
}

EigenResult solve_lambda2_path(const KernelOperator& K, const GridFunction& u1,
                               const SolverOptions& opts) {
  const MountainPass mp = relax_mountain_pass(K, u1, opts);
  const double lambda1 = rayleigh_quotient(K, normalize(K, u1));
  const std::size_t last = mp.path.nodes.size() - 1;

  // The pass node first, then its neighbours on the path.
  std::vector<std::size_t> candidates{mp.pass_node};
  if (mp.pass_node > 1) candidates.push_back(mp.pass_node - 1);
  if (mp.pass_node + 1 < last) candidates.push_back(mp.pass_node + 1);

  EigenResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t c : candidates) {
    EigenResult res = polish_critical_point(K, mp.path.nodes[c], opts.grad_tol);
    res.iterations += mp.iterations;
    const bool sign_change = res.u.maxCoeff() > 0.0 && res.u.minCoeff() < 0.0;
    const bool above = res.lambda > lambda1 + 1e-9 * std::abs(lambda1);
    if (!sign_change || !above) continue;
    if (res.converged) return res;
    if (res.residual < best.residual) best = res;
  }
  if (!std::isfinite(best.residual)) {
    const GridFunction& pass = mp.path.nodes[mp.pass_node];
    best = {mp.path_max, pass, eigen_residual(K, pass, mp.path_max), mp.iterations, false};
    throw NotConverged("mountain pass did not reach a sign-changing critical point", best);
  }
  throw NotConverged("lambda2 polish did not reach grad_tol", best);
}

}  // namespace fracp
