#include "lqhv/lqhv.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lqhv/errors.hpp"
#include "lqhv/lp.hpp"
#include "lqhv/random.hpp"

namespace lqhv {

double SignedMeasure::total_mass() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

double SignedMeasure::total_variation() const {
  double s = 0;
  for (double w : weights) s += std::abs(w);
  return s;
}

double SignedMeasure::negative_mass() const {
  double s = 0;
  for (double w : weights) s += w < 0 ? -w : 0;
  return s;
}

namespace {

std::vector<std::size_t> slot_radix(const std::vector<std::size_t>& settings,
                                    const std::vector<std::size_t>& outcome_sizes) {
  std::vector<std::size_t> r;
  for (std::size_t n = 0; n < settings.size(); ++n)
    for (std::size_t s = 0; s < settings[n]; ++s) r.push_back(outcome_sizes[n]);
  return r;
}

std::vector<std::size_t> slot_base(const std::vector<std::size_t>& settings) {
  std::vector<std::size_t> base(settings.size());
  std::size_t acc = 0;
  for (std::size_t n = 0; n < settings.size(); ++n) {
    base[n] = acc;
    acc += settings[n];
  }
  return base;
}

// For each cell, the outcome tuple index seen by setting tuple s.
std::vector<std::size_t> cell_outcomes(const std::vector<std::size_t>& settings,
                                       const std::vector<std::size_t>& outcome_sizes,
                                       std::span<const std::size_t> s_tuple) {
  const auto radix = slot_radix(settings, outcome_sizes);
  const auto base = slot_base(settings);
  const std::size_t cells = product(radix);
  std::vector<std::size_t> out(cells);
  std::vector<std::size_t> omega(radix.size(), 0), k(settings.size());
  for (std::size_t w = 0; w < cells; ++w) {
    for (std::size_t n = 0; n < settings.size(); ++n) k[n] = omega[base[n] + s_tuple[n]];
    out[w] = flat_index(k, outcome_sizes);
    for (std::size_t j = radix.size(); j-- > 0;) {
      if (++omega[j] < radix[j]) break;
      omega[j] = 0;
    }
  }
  return out;
}

void check_povm_shape(const PovmFamily& povms, const OutcomeSpace& outcomes,
                      std::span<const std::size_t> dims) {
  validate(outcomes);
  validate(povms, dims);
  if (outcomes.site_count() != dims.size())
    fail(ErrorKind::shape, "outcome alphabets differ in site count");
  for (std::size_t n = 0; n < dims.size(); ++n)
    if (povms.effects[n][0].size() != outcomes.values[n].size())
      fail(ErrorKind::shape, "POVM outcome count differs from the alphabet size");
}

}  // namespace

std::vector<double> marginal(const SignedMeasure& mu, std::span<const std::size_t> setting_tuple) {
  const auto idx = cell_outcomes(mu.settings, mu.outcome_sizes, setting_tuple);
  std::vector<double> out(product(mu.outcome_sizes), 0.0);
  for (std::size_t w = 0; w < idx.size(); ++w) out[idx[w]] += mu.weights[w];
  return out;
}

double max_marginal_deviation(const SignedMeasure& mu, const Scenario& sc) {
  const auto settings = sc.settings();
  if (settings != mu.settings || sc.outcomes.sizes() != mu.outcome_sizes)
    fail(ErrorKind::shape, "max_marginal_deviation: measure shape differs from the scenario");
  double worst = 0;
  for (std::size_t s = 0; s < product(settings); ++s) {
    const auto st = unflatten(s, settings);
    const auto m = marginal(mu, st);
    const auto p = joint_distribution(sc, st);
    for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, std::abs(m[k] - p[k]));
  }
  return worst;
}

GammaResult compute_gamma(const Scenario& sc) {
  validate(sc);
  const auto settings = sc.settings();
  const auto sizes = sc.outcomes.sizes();
  const auto radix = slot_radix(settings, sizes);
  double cells_d = 1;
  for (std::size_t r : radix) cells_d *= static_cast<double>(r);
  if (2 * cells_d > static_cast<double>(kLpVariableCap))
    fail(ErrorKind::size, "compute_gamma: LP would exceed the cap of 1e6 variables");
  const std::size_t cells = product(radix);
  const std::size_t n_s = product(settings), n_k = product(sizes);
  const std::size_t m = n_s * n_k, n = 2 * cells;

  std::vector<double> a(m * n, 0.0), b(m), c(n, 1.0);
  const auto dists = all_joint_distributions(sc);
  for (std::size_t s = 0; s < n_s; ++s) {
    const auto idx = cell_outcomes(settings, sizes, unflatten(s, settings));
    for (std::size_t w = 0; w < cells; ++w) {
      const std::size_t row = s * n_k + idx[w];
      a[row * n + w] = 1.0;
      a[row * n + cells + w] = -1.0;
    }
    for (std::size_t k = 0; k < n_k; ++k) b[s * n_k + k] = dists[s][k];
  }

  const LpResult lp = solve_standard_lp(a, m, n, b, c);
  if (lp.status != LpStatus::optimal)
    fail(ErrorKind::internal, std::string("compute_gamma: LP ended ") + to_string(lp.status));

  GammaResult g;
  g.gamma = lp.objective;
  g.iterations = lp.iterations;
  g.optimal_measure = SignedMeasure{settings, sizes, std::vector<double>(cells)};
  for (std::size_t w = 0; w < cells; ++w) g.optimal_measure.weights[w] = lp.x[w] - lp.x[cells + w];

  BellFunctional f = zero_functional(settings, sizes);
  f.coeffs = lp.y;
  const double b_abs = lhv_constants(f).b_abs;
  if (b_abs > 0)
    for (auto& x : f.coeffs) x /= b_abs;
  g.dual_functional = std::move(f);
  g.lhv = g.gamma <= 1 + kLhvTol;
  return g;
}

BellFunctional extract_optimal_functional(const GammaResult& g) {
  const double b_abs = lhv_constants(g.dual_functional).b_abs;
  if (b_abs == 0)
    fail(ErrorKind::trivial_functional, "extract_optimal_functional: dual functional vanishes");
  BellFunctional f = g.dual_functional;
  for (auto& x : f.coeffs) x /= b_abs;
  return f;
}

SignedMeasure measure_from_source_operator(const SourceOperator& t, const PovmFamily& povms,
                                           const OutcomeSpace& outcomes) {
  check_povm_shape(povms, outcomes, t.shape.dims);
  const auto settings = povms.settings();
  if (settings != t.shape.mult)
    fail(ErrorKind::shape, "measure_from_source_operator: POVM settings differ from the shape");
  std::vector<std::vector<ComplexMatrix>> eff;
  for (std::size_t n = 0; n < settings.size(); ++n)
    for (std::size_t s = 0; s < settings[n]; ++s) eff.push_back(povms.effects[n][s]);
  const auto raw = contract_slots(t.op, t.shape.slot_dims(), eff);
  SignedMeasure mu{settings, outcomes.sizes(), std::vector<double>(raw.size())};
  for (std::size_t i = 0; i < raw.size(); ++i) mu.weights[i] = raw[i].real();
  return mu;
}

SignedMeasure covering_split_measure(const SourceOperator& t, const PovmFamily& povms,
                                     const OutcomeSpace& outcomes) {
  check_povm_shape(povms, outcomes, t.shape.dims);
  const auto settings = povms.settings();
  const std::size_t n_sites = settings.size();
  if (t.shape.mult[0] != 1)
    fail(ErrorKind::shape, "covering_split_measure: site 1 must carry a single slot in T");
  for (std::size_t n = 1; n < n_sites; ++n)
    if (t.shape.mult[n] != settings[n])
      fail(ErrorKind::shape, "covering_split_measure: POVM settings differ from the shape");

  const ComplexMatrix abs_t = abs_hermitian(t.op);
  const ComplexMatrix tau[2] = {abs_t + t.op, abs_t - t.op};
  const auto slot_dims = t.shape.slot_dims();
  const std::size_t k1 = outcomes.values[0].size();
  const std::size_t s1 = settings[0];

  // Effects on the slots of sites 2..N.
  std::vector<std::vector<ComplexMatrix>> rest_eff;
  for (std::size_t n = 1; n < n_sites; ++n)
    for (std::size_t s = 0; s < settings[n]; ++s) rest_eff.push_back(povms.effects[n][s]);

  // m[sign][rest] and J[sign][s1][lambda1][rest]
  std::vector<double> marg[2];
  std::vector<std::vector<std::vector<double>>> joint[2];
  for (int sg = 0; sg < 2; ++sg) {
    auto eff = rest_eff;
    eff.insert(eff.begin(), std::vector<ComplexMatrix>{ComplexMatrix::identity(slot_dims[0])});
    for (const cplx& v : contract_slots(tau[sg], slot_dims, eff)) marg[sg].push_back(v.real());
    joint[sg].resize(s1);
    for (std::size_t s = 0; s < s1; ++s) {
      auto e1 = rest_eff;
      e1.insert(e1.begin(), povms.effects[0][s]);
      const auto raw = contract_slots(tau[sg], slot_dims, e1);
      const std::size_t rest = raw.size() / k1;
      joint[sg][s].assign(k1, std::vector<double>(rest));
      for (std::size_t l = 0; l < k1; ++l)
        for (std::size_t r = 0; r < rest; ++r) joint[sg][s][l][r] = raw[l * rest + r].real();
    }
  }

  const std::size_t rest = marg[0].size();
  std::vector<std::size_t> l1_radix(s1, k1);
  const std::size_t l1_cells = product(l1_radix);
  SignedMeasure mu{settings, outcomes.sizes(), std::vector<double>(l1_cells * rest, 0.0)};
  for (std::size_t r = 0; r < rest; ++r)
    for (std::size_t c = 0; c < l1_cells; ++c) {
      const auto lam = unflatten(c, l1_radix);
      double part[2];
      for (int sg = 0; sg < 2; ++sg) {
        const double mm = marg[sg][r];
        double prod = 1;
        for (std::size_t s = 0; s < s1; ++s)
          prod *= mm < kNullMarginal ? 1.0 / static_cast<double>(k1)
                                     : joint[sg][s][lam[s]][r] / mm;
        part[sg] = prod * mm;
      }
      mu.weights[c * rest + r] = 0.5 * (part[0] - part[1]);
    }
  return mu;
}

// ---------------------------------------------------------------------------
// measurement search

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t params_per_slot(std::size_t d) {
  if (d == 1) return 0;
  if (d == 2) return 2;
  return d * d - 1;
}

// Hermitian generators: generalized Gell-Mann matrices.
std::vector<ComplexMatrix> gell_mann(std::size_t d) {
  std::vector<ComplexMatrix> g;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix s(d, d), a(d, d);
      s(j, k) = s(k, j) = 1.0;
      a(j, k) = cplx(0, -1);
      a(k, j) = cplx(0, 1);
      g.push_back(std::move(s));
      g.push_back(std::move(a));
    }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix h(d, d);
    const double f = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (std::size_t j = 0; j < l; ++j) h(j, j) = f;
    h(l, l) = -f * static_cast<double>(l);
    g.push_back(std::move(h));
  }
  return g;
}

// Projective measurement with K outcomes in the basis exp(iH) e_j; the last
// outcome collects the remaining basis vectors.
std::vector<ComplexMatrix> basis_measurement(std::size_t d, std::size_t k,
                                             std::span<const double> p) {
  if (d == 2 && k == 2) return qubit_projective(p[0], p[1]);
  const auto gens = gell_mann(d);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += p[i] * gens[i](r, c);
  const Eigen::MatrixXcd u = (cplx(0, 1) * h).exp();
  std::vector<ComplexMatrix> out(k, ComplexMatrix(d, d));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<cplx> v(d);
    for (std::size_t r = 0; r < d; ++r)
      v[r] = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
    out[std::min(j, k - 1)] += ComplexMatrix::outer(v);
  }
  return out;
}

double clamp_eval(const QuantumState& st, const std::vector<std::size_t>& settings,
                  const std::vector<std::size_t>& sizes, std::span<const double> x,
                  std::size_t& evals) {
  ++evals;
  Scenario sc;
  sc.state = st;
  sc.povms = parametrized_povms(st.dims, settings, sizes, x);
  sc.outcomes.values.resize(sizes.size());
  for (std::size_t n = 0; n < sizes.size(); ++n)
    for (std::size_t k = 0; k < sizes[n]; ++k)
      sc.outcomes.values[n].push_back(static_cast<double>(k));
  return compute_gamma(sc).gamma;
}

}  // namespace

std::size_t parameter_count(const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& settings) {
  std::size_t c = 0;
  for (std::size_t n = 0; n < dims.size(); ++n) c += settings[n] * params_per_slot(dims[n]);
  return c;
}

PovmFamily parametrized_povms(const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& settings,
                              const std::vector<std::size_t>& outcome_sizes,
                              std::span<const double> params) {
  if (params.size() != parameter_count(dims, settings))
    fail(ErrorKind::shape, "parametrized_povms: parameter count");
  PovmFamily f;
  std::size_t off = 0;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    const std::size_t d = dims[n], k = outcome_sizes[n];
    if (k < 1 || k > d)
      fail(ErrorKind::argument, "parametrized_povms: need 1 <= K_n <= d_n for projective families");
    std::vector<std::vector<ComplexMatrix>> site;
    for (std::size_t s = 0; s < settings[n]; ++s) {
      const std::size_t np = params_per_slot(d);
      if (d == 1 || k == 1)
        site.push_back({ComplexMatrix::identity(d)});
      else
        site.push_back(basis_measurement(d, k, params.subspan(off, np)));
      off += np;
    }
    f.effects.push_back(std::move(site));
  }
  return f;
}

UpsilonEstimate estimate_upsilon(const QuantumState& state, std::span<const std::size_t> settings_in,
                                 std::span<const std::size_t> outcome_sizes_in,
                                 std::size_t search_budget, std::uint64_t seed) {
  validate(state);
  const std::vector<std::size_t> settings(settings_in.begin(), settings_in.end());
  const std::vector<std::size_t> sizes(outcome_sizes_in.begin(), outcome_sizes_in.end());
  if (settings.size() != state.site_count() || sizes.size() != state.site_count())
    fail(ErrorKind::shape, "estimate_upsilon: settings/outcomes length differs from site count");
  for (std::size_t d : state.dims)
    if (d > 3) fail(ErrorKind::argument, "estimate_upsilon: only qubit and qutrit sites");

  const std::size_t np = parameter_count(state.dims, settings);
  UpsilonEstimate est;
  std::vector<double> best_x(np, 0.0);
  if (np == 0 || search_budget == 0) {
    est.best_gamma = clamp_eval(state, settings, sizes, best_x, est.evaluations);
    est.best_povms = parametrized_povms(state.dims, settings, sizes, best_x);
    return est;
  }

  Rng rng(seed);
  // Per-parameter sampler: qubit slots use a 24 x 12 (theta, phi) grid,
  // qutrit generators a uniform draw in [-pi, pi].
  std::vector<int> kind;
  for (std::size_t n = 0; n < state.dims.size(); ++n)
    for (std::size_t s = 0; s < settings[n]; ++s) {
      const std::size_t d = state.dims[n];
      if (d == 2) {
        kind.push_back(0);
        kind.push_back(1);
      } else {
        for (std::size_t i = 0; i < params_per_slot(d); ++i) kind.push_back(2);
      }
    }
  std::uniform_int_distribution<int> theta_grid(0, 23), phi_grid(0, 11);
  std::uniform_real_distribution<double> gen(-kPi, kPi);
  auto sample = [&] {
    std::vector<double> x(np);
    for (std::size_t i = 0; i < np; ++i) {
      if (kind[i] == 0) x[i] = kPi * (theta_grid(rng) + 0.5) / 24.0;
      else if (kind[i] == 1) x[i] = 2 * kPi * phi_grid(rng) / 12.0;
      else x[i] = gen(rng);
    }
    return x;
  };

  const std::size_t grid_budget = std::max<std::size_t>(1, search_budget / 4);
  std::vector<std::pair<double, std::vector<double>>> pool;
  est.best_gamma = 0;
  for (std::size_t i = 0; i < grid_budget && est.evaluations < search_budget; ++i) {
    auto x = sample();
    const double gval = clamp_eval(state, settings, sizes, x, est.evaluations);
    pool.emplace_back(gval, std::move(x));
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  est.best_gamma = pool.front().first;
  best_x = pool.front().second;

  // Nelder-Mead (maximizing) from the best grid points until the budget is spent.
  std::size_t start = 0;
  double step = 0.4;
  while (est.evaluations + np + 1 < search_budget) {
    std::vector<double> x0 = start < pool.size() ? pool[start].second : best_x;
    if (start >= pool.size()) step *= 0.5;
    ++start;
    std::vector<std::vector<double>> simplex{x0};
    std::vector<double> f{-clamp_eval(state, settings, sizes, x0, est.evaluations)};
    for (std::size_t i = 0; i < np; ++i) {
      auto x = x0;
      x[i] += step;
      simplex.push_back(x);
      f.push_back(-clamp_eval(state, settings, sizes, x, est.evaluations));
    }
    const std::size_t local_cap = std::min(search_budget, est.evaluations + 60 * (np + 1));
    while (est.evaluations + 2 < local_cap) {
      std::vector<std::size_t> order(simplex.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];
      if (f[hi] - f[lo] < 1e-10) break;
      std::vector<double> centroid(np, 0.0);
      for (std::size_t i : order)
        if (i != hi)
          for (std::size_t j = 0; j < np; ++j) centroid[j] += simplex[i][j] / static_cast<double>(np);
      auto along = [&](double t) {
        std::vector<double> x(np);
        for (std::size_t j = 0; j < np; ++j) x[j] = centroid[j] + t * (simplex[hi][j] - centroid[j]);
        return x;
      };
      auto xr = along(-1.0);
      const double fr = -clamp_eval(state, settings, sizes, xr, est.evaluations);
      if (fr < f[lo]) {
        auto xe = along(-2.0);
        const double fe = -clamp_eval(state, settings, sizes, xe, est.evaluations);
        if (fe < fr) {
          simplex[hi] = xe;
          f[hi] = fe;
        } else {
          simplex[hi] = xr;
          f[hi] = fr;
        }
      } else if (fr < f[second]) {
        simplex[hi] = xr;
        f[hi] = fr;
      } else {
        auto xc = along(0.5);
        const double fc = -clamp_eval(state, settings, sizes, xc, est.evaluations);
        if (fc < f[hi]) {
          simplex[hi] = xc;
          f[hi] = fc;
        } else {
          for (std::size_t i : order) {
            if (i == lo) continue;
            for (std::size_t j = 0; j < np; ++j)
              simplex[i][j] = simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]);
            f[i] = -clamp_eval(state, settings, sizes, simplex[i], est.evaluations);
          }
        }
      }
    }
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (-f[i] > est.best_gamma) {
        est.best_gamma = -f[i];
        best_x = simplex[i];
      }
  }
  est.best_povms = parametrized_povms(state.dims, settings, sizes, best_x);
  return est;
}

}  // namespace lqhv
