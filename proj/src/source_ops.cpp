#include "lqhv/source_ops.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "lqhv/errors.hpp"
#include "lqhv/random.hpp"

namespace lqhv {

const char* to_string(BuilderTag tag) noexcept {
  switch (tag) {
    case BuilderTag::tau: return "tau";
    case BuilderTag::tau_tilde: return "tau_tilde";
    case BuilderTag::singlet_special: return "singlet_special";
    case BuilderTag::separable_positive: return "separable_positive";
    case BuilderTag::custom: return "custom";
  }
  return "custom";
}

void validate(const SourceOperator& t) {
  validate(t.shape);
  if (t.shape.dims != t.origin.dims)
    fail(ErrorKind::shape, "SourceOperator: shape dims differ from the state's site dims");
  const std::size_t n = t.shape.total_dim();
  if (t.op.rows() != n || t.op.cols() != n)
    fail(ErrorKind::shape, "SourceOperator: operator size does not match the shape");
  if (!t.op.is_hermitian()) fail(ErrorKind::hermiticity, "SourceOperator: not Hermitian");
  if (std::abs(t.op.trace() - 1.0) > 1e-9)
    fail(ErrorKind::argument, "SourceOperator: trace differs from 1");
}

namespace {

using SiteImage = std::function<ComplexMatrix(std::size_t, std::size_t)>;

void check_settings(const QuantumState& rho, std::span<const std::size_t> settings) {
  if (settings.size() != rho.site_count())
    fail(ErrorKind::shape, "settings length differs from the number of sites");
  for (std::size_t s : settings)
    if (s < 1) fail(ErrorKind::argument, "settings must all be >= 1");
  FactorShape shape(rho.dims, {settings.begin(), settings.end()});
  if (shape.total_dim() > dimension_cap())
    fail(ErrorKind::size, "source operator dimension " + std::to_string(shape.total_dim()) +
                              " exceeds the cap (LQHV_DIM_CAP)");
}

// x acts on (a, d, b); the middle factor is replaced through
// |j><j1| -> image(j, j1), a big_d x big_d block.
ComplexMatrix apply_site_map(const ComplexMatrix& x, std::size_t a, std::size_t d, std::size_t b,
                             std::size_t big_d, const SiteImage& image) {
  std::vector<ComplexMatrix> img(d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t j1 = 0; j1 < d; ++j1) img[j * d + j1] = image(j, j1);
  const std::size_t out_dim = a * big_d * b;
  ComplexMatrix out(out_dim, out_dim);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t i1 = 0; i1 < a; ++i1)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t j1 = 0; j1 < d; ++j1) {
          const ComplexMatrix& m = img[j * d + j1];
          for (std::size_t k = 0; k < b; ++k)
            for (std::size_t k1 = 0; k1 < b; ++k1) {
              const cplx c = x((i * d + j) * b + k, (i1 * d + j1) * b + k1);
              if (c == cplx(0.0)) continue;
              for (std::size_t u = 0; u < big_d; ++u)
                for (std::size_t v = 0; v < big_d; ++v) {
                  const cplx e = m(u, v);
                  if (e == cplx(0.0)) continue;
                  out((i * big_d + u) * b + k, (i1 * big_d + v) * b + k1) += c * e;
                }
            }
        }
  return out;
}

// Applies one map per site, in site order.
ComplexMatrix apply_site_maps(const ComplexMatrix& x, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& out_dims,
                              const std::vector<SiteImage>& images) {
  ComplexMatrix cur = x;
  std::size_t a = 1;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    std::size_t b = 1;
    for (std::size_t m = n + 1; m < dims.size(); ++m) b *= dims[m];
    if (images[n]) cur = apply_site_map(cur, a, dims[n], b, out_dims[n], images[n]);
    a *= out_dims[n];
  }
  return cur;
}

std::vector<cplx> basis_vector(std::size_t d, std::size_t j) {
  std::vector<cplx> e(d, 0.0);
  e[j] = 1.0;
  return e;
}

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= base;
  return r;
}

// tau over the sites of `rho` with their settings, by inclusion-exclusion.
ComplexMatrix tau_recursive(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& settings,
                            const std::vector<ComplexMatrix>& sigma) {
  const std::size_t n_sites = dims.size();
  if (n_sites == 1) return kron_power(rho, settings[0]);
  bool trivial = true;
  for (std::size_t s : settings) trivial = trivial && s == 1;
  if (trivial) return rho;

  std::vector<std::size_t> out_dims(n_sites);
  std::vector<SiteImage> images(n_sites);
  for (std::size_t n = 0; n < n_sites; ++n) {
    out_dims[n] = ipow(dims[n], settings[n]);
    if (settings[n] == 1) continue;
    const std::size_t d = dims[n];
    const std::size_t s = settings[n];
    const ComplexMatrix& sg = sigma[n];
    images[n] = [d, s, &sg](std::size_t j, std::size_t j1) {
      return symmetrize(ComplexMatrix::outer(basis_vector(d, j), basis_vector(d, j1)), sg, s);
    };
  }
  ComplexMatrix out = apply_site_maps(rho, dims, out_dims, images);

  FactorShape shape(dims, settings);
  const auto slot_dims = shape.slot_dims();
  std::vector<ComplexMatrix> fill;
  for (std::size_t n = 0; n < n_sites; ++n)
    for (std::size_t k = 0; k < settings[n]; ++k) fill.push_back(sigma[n]);

  // Subtract every term in which a nonempty set R of sites carries sigma^{(x)S}.
  const std::size_t full = (std::size_t{1} << n_sites) - 1;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    double coeff = 1;
    for (std::size_t n = 0; n < n_sites; ++n)
      if (mask >> n & 1) coeff *= static_cast<double>(settings[n] - 1);
    if (coeff == 0) continue;
    if (mask == full) {
      ComplexMatrix all = kron_all(fill);
      out.add_scaled(all, -coeff);
      continue;
    }
    std::vector<std::size_t> keep_sites, sub_dims, sub_settings, selected;
    std::vector<ComplexMatrix> sub_sigma;
    for (std::size_t n = 0; n < n_sites; ++n) {
      if (mask >> n & 1) continue;
      keep_sites.push_back(n);
      sub_dims.push_back(dims[n]);
      sub_settings.push_back(settings[n]);
      sub_sigma.push_back(sigma[n]);
      for (std::size_t slot : shape.site_slots(n)) selected.push_back(slot);
    }
    const ComplexMatrix sub_rho = partial_trace(rho, dims, keep_sites);
    const ComplexMatrix sub_tau = tau_recursive(sub_rho, sub_dims, sub_settings, sub_sigma);
    out.add_scaled(embed_on_slots(sub_tau, slot_dims, selected, fill), -coeff);
  }
  return out;
}

// Columns of the returned matrix complete `vecs` to an orthonormal basis of C^d.
ComplexMatrix complete_basis(const std::vector<std::vector<cplx>>& vecs, std::size_t d) {
  std::vector<std::vector<cplx>> basis = vecs;
  for (std::size_t e = 0; e < d && basis.size() < d; ++e) {
    std::vector<cplx> v = basis_vector(d, e);
    for (const auto& b : basis) {
      cplx ip = 0;
      for (std::size_t r = 0; r < d; ++r) ip += std::conj(b[r]) * v[r];
      for (std::size_t r = 0; r < d; ++r) v[r] -= ip * b[r];
    }
    double n2 = 0;
    for (const auto& z : v) n2 += std::norm(z);
    if (n2 < 1e-6) continue;
    for (auto& z : v) z /= std::sqrt(n2);
    basis.push_back(std::move(v));
  }
  ComplexMatrix u(d, d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < d; ++r) u(r, c) = basis[c][r];
  return u;
}

std::vector<cplx> column(const ComplexMatrix& u, std::size_t c) {
  std::vector<cplx> v(u.rows());
  for (std::size_t r = 0; r < u.rows(); ++r) v[r] = u(r, c);
  return v;
}

// rho expressed in the product basis with per-site basis matrices `bases`,
// then mapped |b_j><b_j1| -> W_{j j1} on every site with S_n > 1.
ComplexMatrix tilde_in_bases(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& settings,
                             const std::vector<ComplexMatrix>& bases) {
  const ComplexMatrix u = kron_all(bases);
  const ComplexMatrix coeffs = u.adjoint() * rho * u;
  std::vector<std::size_t> out_dims(dims.size());
  std::vector<SiteImage> images(dims.size());
  for (std::size_t n = 0; n < dims.size(); ++n) {
    out_dims[n] = ipow(dims[n], settings[n]);
    const ComplexMatrix& b = bases[n];
    const std::size_t s = settings[n];
    images[n] = [&b, s](std::size_t j, std::size_t j1) {
      return w_block(column(b, j), column(b, j1), s, j == j1);
    };
  }
  return apply_site_maps(coeffs, dims, out_dims, images);
}

}  // namespace

ComplexMatrix symmetrize(const ComplexMatrix& a, const ComplexMatrix& sigma, std::size_t s) {
  if (s < 1) fail(ErrorKind::argument, "symmetrize: S must be >= 1");
  ComplexMatrix out;
  for (std::size_t k = 0; k < s; ++k) {
    ComplexMatrix term = kron(kron_power(sigma, k), kron(a, kron_power(sigma, s - 1 - k)));
    if (out.empty()) out = std::move(term);
    else out += term;
  }
  return out;
}

ComplexMatrix w_block(std::span<const cplx> bj, std::span<const cplx> bj1, std::size_t s,
                      bool same) {
  if (bj.size() != bj1.size()) fail(ErrorKind::shape, "w_block: vector sizes differ");
  if (same) return kron_power(ComplexMatrix::outer(bj), s);
  const std::size_t d = bj.size();
  // W = sum_c c P(b_j + c b_j1)^{(x)S} / 2^{S+1} over c in {1, -1, i, -i}.
  // The printed form has the i-terms with opposite signs, which yields the
  // transposed marginal |b_j1><b_j|.
  const cplx phases[4] = {1.0, -1.0, cplx(0, 1), cplx(0, -1)};
  ComplexMatrix out(ipow(d, s), ipow(d, s));
  for (const cplx c : phases) {
    std::vector<cplx> v(d);
    for (std::size_t r = 0; r < d; ++r) v[r] = bj[r] + c * bj1[r];
    out.add_scaled(kron_power(ComplexMatrix::outer(v), s),
                   c / std::pow(2.0, static_cast<double>(s + 1)));
  }
  return out;
}

SourceOperator build_tau(const QuantumState& rho, std::span<const std::size_t> settings,
                         const std::vector<ComplexMatrix>& sigma) {
  validate(rho);
  check_settings(rho, settings);
  std::vector<ComplexMatrix> sg = sigma;
  if (sg.empty()) {
    for (std::size_t d : rho.dims) {
      ComplexMatrix m = ComplexMatrix::identity(d);
      m *= 1.0 / static_cast<double>(d);
      sg.push_back(std::move(m));
    }
  }
  if (sg.size() != rho.site_count())
    fail(ErrorKind::argument, "build_tau: need one reference state per site");
  for (std::size_t n = 0; n < sg.size(); ++n) {
    try {
      validate(QuantumState{{rho.dims[n]}, sg[n]});
    } catch (const Error& e) {
      fail(ErrorKind::argument, std::string("build_tau: invalid sigma: ") + e.what());
    }
  }
  std::vector<std::size_t> s(settings.begin(), settings.end());
  SourceOperator t;
  t.shape = FactorShape(rho.dims, s);
  t.op = tau_recursive(rho.rho, rho.dims, s, sg).hermitian_part();
  t.origin = rho;
  t.tag = BuilderTag::tau;
  return t;
}

SourceOperator build_tau_tilde(const QuantumState& rho, std::span<const std::size_t> settings) {
  validate(rho);
  check_settings(rho, settings);
  if (settings[0] != 1) fail(ErrorKind::argument, "build_tau_tilde: site 1 must have S_1 = 1");
  std::vector<std::size_t> s(settings.begin(), settings.end());
  const auto& dims = rho.dims;
  SourceOperator t;
  t.shape = FactorShape(dims, s);
  t.origin = rho;
  t.tag = BuilderTag::tau_tilde;

  if (dims.size() == 2) {
    // Convex combination over the spectral decomposition, each pure term in
    // its own Schmidt basis.
    ComplexMatrix acc(t.shape.total_dim(), t.shape.total_dim());
    for (const auto& [p, psi] : spectral_decomposition(rho)) {
      const SchmidtForm sf = schmidt(psi, dims[0], dims[1]);
      std::vector<ComplexMatrix> bases{ComplexMatrix::identity(dims[0]),
                                       complete_basis(sf.right_basis, dims[1])};
      acc.add_scaled(tilde_in_bases(ComplexMatrix::outer(psi), dims, s, bases), p);
    }
    acc *= 1.0 / acc.trace().real();
    t.op = acc.hermitian_part();
    return t;
  }
  std::vector<ComplexMatrix> bases;
  for (std::size_t d : dims) bases.push_back(ComplexMatrix::identity(d));
  t.op = tilde_in_bases(rho.rho, dims, s, bases).hermitian_part();
  return t;
}

SourceOperator build_singlet_special() {
  const std::vector<cplx> e1{1.0, 0.0}, e2{0.0, 1.0};
  const ComplexMatrix p11 = ComplexMatrix::outer(e1), p22 = ComplexMatrix::outer(e2);
  const ComplexMatrix e12 = ComplexMatrix::outer(e1, e2), e21 = ComplexMatrix::outer(e2, e1);
  ComplexMatrix half_id = ComplexMatrix::identity(2);
  half_id *= 0.5;
  ComplexMatrix op = kron(p11, kron(p22, p22));
  op += kron(p22, kron(p11, p11));
  op -= kron(e12, kron(e21, half_id));
  op -= kron(e21, kron(e12, half_id));
  op -= kron(e12, kron(half_id, e21));
  op -= kron(e21, kron(half_id, e12));
  op *= 0.5;
  SourceOperator t;
  t.shape = FactorShape({2, 2}, {1, 2});
  t.op = std::move(op);
  t.origin = make_singlet();
  t.tag = BuilderTag::singlet_special;
  return t;
}

SourceOperator build_separable_positive(std::span<const ProductComponent> components,
                                        std::span<const std::size_t> settings) {
  const QuantumState rho = make_separable_mixture(components);
  check_settings(rho, settings);
  SourceOperator t;
  t.shape = FactorShape(rho.dims, {settings.begin(), settings.end()});
  t.op = ComplexMatrix(t.shape.total_dim(), t.shape.total_dim());
  for (const auto& c : components) {
    std::vector<ComplexMatrix> factors;
    for (std::size_t n = 0; n < c.sites.size(); ++n)
      factors.push_back(kron_power(c.sites[n].rho, settings[n]));
    t.op.add_scaled(kron_all(factors), c.weight);
  }
  t.op = t.op.hermitian_part();
  t.origin = rho;
  t.tag = BuilderTag::separable_positive;
  return t;
}

double verify_defining_relation(const SourceOperator& t, std::size_t trials, std::uint64_t seed) {
  const FactorShape& shape = t.shape;
  const std::size_t n_sites = shape.site_count();
  const auto slot_dims = shape.slot_dims();

  // One reduced N-slot operator per slot choice (k_1, ..., k_N).
  std::vector<ComplexMatrix> reduced;
  std::vector<std::size_t> k(n_sites, 0);
  while (true) {
    std::vector<std::size_t> keep(n_sites);
    for (std::size_t n = 0; n < n_sites; ++n) keep[n] = shape.slot(n, k[n]);
    reduced.push_back(partial_trace(t.op, slot_dims, keep));
    std::size_t n = n_sites;
    while (n > 0 && ++k[n - 1] == shape.mult[n - 1]) k[--n] = 0;
    if (n == 0) break;
  }

  Rng rng(seed);
  double worst = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<ComplexMatrix> xs;
    for (std::size_t d : shape.dims) xs.push_back(random_hermitian_unit(d, rng));
    const ComplexMatrix probe = kron_all(xs);
    const cplx expected = trace_of_product(t.origin.rho, probe);
    for (const auto& r : reduced)
      worst = std::max(worst, std::abs(trace_of_product(r, probe) - expected));
  }
  return worst;
}

SourceOperator reduce_settings(const SourceOperator& t, std::span<const std::size_t> new_mult) {
  const FactorShape& shape = t.shape;
  if (new_mult.size() != shape.site_count())
    fail(ErrorKind::argument, "reduce_settings: one multiplicity per site required");
  std::vector<std::size_t> keep;
  for (std::size_t n = 0; n < shape.site_count(); ++n) {
    if (new_mult[n] < 1 || new_mult[n] > shape.mult[n])
      fail(ErrorKind::argument, "reduce_settings: need 1 <= L_n <= S_n");
    for (std::size_t s = 0; s < new_mult[n]; ++s) keep.push_back(shape.slot(n, s));
  }
  SourceOperator out;
  out.shape = FactorShape(shape.dims, {new_mult.begin(), new_mult.end()});
  out.op = partial_trace(t.op, shape.slot_dims(), keep);
  out.origin = t.origin;
  out.tag = t.tag;
  return out;
}

}  // namespace lqhv
