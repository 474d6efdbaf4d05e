#include "lqhv/tensor_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "lqhv/errors.hpp"

namespace lqhv {

namespace {

using RowMajorXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorXcd> as_eigen(const ComplexMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::shape, std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                               "x" + std::to_string(a.cols()) + " vs " +
                               std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.square() || a.empty()) {
    fail(ErrorKind::shape, std::string(op) + ": expected a nonempty square matrix");
  }
}

std::size_t product(std::span<const std::size_t> v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

// Row-major strides with slot 0 most significant.
std::vector<std::size_t> strides_of(std::span<const std::size_t> slot_dims) {
  std::vector<std::size_t> strides(slot_dims.size(), 1);
  for (std::size_t j = slot_dims.size(); j-- > 1;) strides[j - 1] = strides[j] * slot_dims[j];
  return strides;
}

// Flat offsets of every multi-index over the given slots, embedded in the
// full index space through `strides`.
std::vector<std::size_t> offsets_of(std::span<const std::size_t> slots,
                                    std::span<const std::size_t> slot_dims,
                                    std::span<const std::size_t> strides) {
  std::vector<std::size_t> out{0};
  for (std::size_t s : slots) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * slot_dims[s]);
    for (std::size_t base : out)
      for (std::size_t i = 0; i < slot_dims[s]; ++i) next.push_back(base + i * strides[s]);
    out = std::move(next);
  }
  return out;
}

std::vector<std::size_t> complement(std::span<const std::size_t> slots, std::size_t count) {
  std::vector<bool> in(count, false);
  for (std::size_t s : slots) in[s] = true;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < count; ++j)
    if (!in[j]) out.push_back(j);
  return out;
}

void require_ascending_slots(std::span<const std::size_t> slots, std::size_t count,
                             const char* op) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] >= count || (i > 0 && slots[i] <= slots[i - 1])) {
      fail(ErrorKind::argument, std::string(op) + ": slot list must be ascending and in range");
    }
  }
}

void check_cap(std::size_t dim, std::size_t cap, const char* op) {
  if (dim > cap) {
    fail(ErrorKind::size, std::string(op) + ": dimension " + std::to_string(dim) +
                              " exceeds the cap " + std::to_string(cap) + " (LQHV_DIM_CAP)");
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::size: return "size";
    case ErrorKind::shape: return "shape";
    case ErrorKind::argument: return "argument";
    case ErrorKind::hermiticity: return "hermiticity";
    case ErrorKind::purity: return "purity";
    case ErrorKind::trivial_functional: return "trivial_functional";
    case ErrorKind::internal: return "internal";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

std::size_t dimension_cap() {
  if (const char* env = std::getenv("LQHV_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionCap;
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorKind::shape, "ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::shape, "ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) { return outer(v, v); }

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> u, std::span<const cplx> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = u[r] * std::conj(v[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx ComplexMatrix::trace() const {
  require_square(*this, "trace");
  cplx t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  require_square(*this, "hermiticity_defect");
  double d = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  if (!square() || empty()) return false;
  return hermiticity_defect() <= rel_tol * std::max(1.0, max_abs());
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  require_square(*this, "hermitian_part");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      out(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

void ComplexMatrix::add_scaled(const ComplexMatrix& other, cplx scale) {
  require_same_shape(*this, other, "add_scaled");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::shape, "matrix product: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  Eigen::Map<RowMajorXcd>(out.data().data(), static_cast<Eigen::Index>(out.rows()),
                          static_cast<Eigen::Index>(out.cols())).noalias() =
      as_eigen(a) * as_eigen(b);
  return out;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) fail(ErrorKind::shape, "matrix-vector product: size mismatch");
  std::vector<cplx> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    cplx acc = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    fail(ErrorKind::shape, "trace_of_product: shape mismatch");
  cplx t = 0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t += a(r, c) * b(c, r);
  return t;
}

// ---------------------------------------------------------------------------
// FactorShape

FactorShape::FactorShape(std::vector<std::size_t> site_dims,
                         std::vector<std::size_t> multiplicities)
    : dims(std::move(site_dims)), mult(std::move(multiplicities)) {
  validate(*this);
}

FactorShape FactorShape::sites(std::vector<std::size_t> site_dims) {
  std::vector<std::size_t> ones(site_dims.size(), 1);
  return FactorShape(std::move(site_dims), std::move(ones));
}

void validate(const FactorShape& shape) {
  if (shape.dims.empty() || shape.dims.size() != shape.mult.size())
    fail(ErrorKind::shape, "FactorShape: dims and mult must be nonempty and of equal length");
  for (std::size_t n = 0; n < shape.dims.size(); ++n) {
    if (shape.dims[n] < 1 || shape.mult[n] < 1)
      fail(ErrorKind::shape, "FactorShape: all dimensions and multiplicities must be >= 1");
  }
}

std::size_t FactorShape::slot_count() const {
  return std::accumulate(mult.begin(), mult.end(), std::size_t{0});
}

std::size_t FactorShape::slot(std::size_t site, std::size_t setting) const {
  if (site >= dims.size() || setting >= mult[site])
    fail(ErrorKind::shape, "FactorShape::slot: (site, setting) out of range");
  std::size_t s = 0;
  for (std::size_t n = 0; n < site; ++n) s += mult[n];
  return s + setting;
}

std::size_t FactorShape::site_of_slot(std::size_t slot) const {
  for (std::size_t n = 0; n < mult.size(); ++n) {
    if (slot < mult[n]) return n;
    slot -= mult[n];
  }
  fail(ErrorKind::shape, "FactorShape::site_of_slot: slot out of range");
}

std::vector<std::size_t> FactorShape::slot_dims() const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < dims.size(); ++n) out.insert(out.end(), mult[n], dims[n]);
  return out;
}

std::size_t FactorShape::total_dim() const {
  std::size_t total = 1;
  for (std::size_t n = 0; n < dims.size(); ++n)
    for (std::size_t s = 0; s < mult[n]; ++s) {
      if (total > std::numeric_limits<std::size_t>::max() / dims[n])
        fail(ErrorKind::size, "FactorShape: total dimension overflows");
      total *= dims[n];
    }
  return total;
}

std::vector<std::size_t> FactorShape::site_slots(std::size_t site) const {
  std::vector<std::size_t> out(mult.at(site));
  std::iota(out.begin(), out.end(), slot(site, 0));
  return out;
}

// ---------------------------------------------------------------------------
// Kronecker products and slot embedding

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  check_cap(std::max(rows, cols), cap, "kron");
  ComplexMatrix out(rows, cols);
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx x = a(ar, ac);
      if (x == cplx{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
    }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors, std::size_t cap) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (const auto& f : factors) out = kron(out, f, cap);
  return out;
}

ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t n, std::size_t cap) {
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t i = 0; i < n; ++i) out = kron(out, a, cap);
  return out;
}

ComplexMatrix embed_on_slots(const ComplexMatrix& y, std::span<const std::size_t> slot_dims,
                             std::span<const std::size_t> selected,
                             std::span<const ComplexMatrix> fill) {
  const std::size_t m = slot_dims.size();
  require_ascending_slots(selected, m, "embed_on_slots");
  if (fill.size() != m) fail(ErrorKind::shape, "embed_on_slots: need one fill entry per slot");
  std::size_t sel_dim = 1;
  for (std::size_t s : selected) sel_dim *= slot_dims[s];
  if (y.rows() != sel_dim || y.cols() != sel_dim)
    fail(ErrorKind::shape, "embed_on_slots: operator does not match the selected slots");
  const auto others = complement(selected, m);
  std::vector<ComplexMatrix> fills;
  for (std::size_t j : others) {
    if (fill[j].rows() != slot_dims[j] || fill[j].cols() != slot_dims[j])
      fail(ErrorKind::shape, "embed_on_slots: fill operator has the wrong dimension");
    fills.push_back(fill[j]);
  }
  const std::size_t total = product(slot_dims);
  check_cap(total, dimension_cap(), "embed_on_slots");
  const ComplexMatrix f = kron_all(fills);

  const auto strides = strides_of(slot_dims);
  const auto off_sel = offsets_of(selected, slot_dims, strides);
  const auto off_oth = offsets_of(others, slot_dims, strides);

  ComplexMatrix out(total, total);
  for (std::size_t a = 0; a < off_sel.size(); ++a)
    for (std::size_t a2 = 0; a2 < off_sel.size(); ++a2) {
      const cplx ya = y(a, a2);
      if (ya == cplx{}) continue;
      for (std::size_t b = 0; b < off_oth.size(); ++b)
        for (std::size_t b2 = 0; b2 < off_oth.size(); ++b2) {
          const cplx fb = f(b, b2);
          if (fb == cplx{}) continue;
          out(off_sel[a] + off_oth[b], off_sel[a2] + off_oth[b2]) += ya * fb;
        }
    }
  return out;
}

ComplexMatrix embed_at_slot(const ComplexMatrix& x, const FactorShape& shape,
                            std::size_t site, std::size_t setting) {
  validate(shape);
  if (site >= shape.site_count() || setting >= shape.mult[site])
    fail(ErrorKind::shape, "embed_at_slot: (site, setting) out of range");
  if (x.rows() != shape.dims[site] || x.cols() != shape.dims[site])
    fail(ErrorKind::shape, "embed_at_slot: operator dimension does not match the site");
  const auto dims = shape.slot_dims();
  std::vector<ComplexMatrix> fill;
  for (std::size_t d : dims) fill.push_back(ComplexMatrix::identity(d));
  const std::size_t sel[] = {shape.slot(site, setting)};
  return embed_on_slots(x, dims, sel, fill);
}

ComplexMatrix partial_trace(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                            std::span<const std::size_t> keep) {
  if (keep.empty()) fail(ErrorKind::argument, "partial_trace: keep set must be nonempty");
  require_ascending_slots(keep, slot_dims.size(), "partial_trace");
  const std::size_t total = product(slot_dims);
  if (w.rows() != total || w.cols() != total)
    fail(ErrorKind::shape, "partial_trace: operator does not match the slot dimensions");
  const auto traced = complement(keep, slot_dims.size());
  const auto strides = strides_of(slot_dims);
  const auto off_keep = offsets_of(keep, slot_dims, strides);
  const auto off_tr = offsets_of(traced, slot_dims, strides);
  ComplexMatrix out(off_keep.size(), off_keep.size());
  for (std::size_t r = 0; r < off_keep.size(); ++r)
    for (std::size_t c = 0; c < off_keep.size(); ++c) {
      cplx acc = 0;
      for (std::size_t t : off_tr) acc += w(off_keep[r] + t, off_keep[c] + t);
      out(r, c) = acc;
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& w, const FactorShape& shape,
                            std::span<const std::size_t> keep) {
  validate(shape);
  const auto dims = shape.slot_dims();
  return partial_trace(w, dims, keep);
}

ComplexMatrix permute_slots(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                            std::span<const std::size_t> perm) {
  const std::size_t m = slot_dims.size();
  if (perm.size() != m) fail(ErrorKind::argument, "permute_slots: permutation size mismatch");
  {
    std::vector<bool> seen(m, false);
    for (std::size_t p : perm) {
      if (p >= m || seen[p]) fail(ErrorKind::argument, "permute_slots: not a permutation");
      seen[p] = true;
    }
  }
  const std::size_t total = product(slot_dims);
  if (w.rows() != total || w.cols() != total)
    fail(ErrorKind::shape, "permute_slots: operator does not match the slot dimensions");
  const auto in_strides = strides_of(slot_dims);
  // Offsets in the input for each multi-index of the output ordering.
  const auto map = offsets_of(perm, slot_dims, in_strides);
  ComplexMatrix out(total, total);
  for (std::size_t r = 0; r < total; ++r)
    for (std::size_t c = 0; c < total; ++c) out(r, c) = w(map[r], map[c]);
  return out;
}

// ---------------------------------------------------------------------------
// Spectral routines

HermitianEigen eig_hermitian(const ComplexMatrix& a) {
  require_square(a, "eig_hermitian");
  const double scale = std::max(1.0, a.max_abs());
  const double defect = a.hermiticity_defect();
  if (defect > kHermitianTol * scale) {
    fail(ErrorKind::hermiticity,
         "eig_hermitian: input is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix h = a.hermitian_part();
  Eigen::MatrixXcd m = as_eigen(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::internal, "eig_hermitian: eigensolver did not converge");
  const auto n = static_cast<std::size_t>(m.rows());
  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  // Eigen returns ascending order.
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(n - 1 - k);
    out.values[k] = solver.eigenvalues()(src);
    for (std::size_t r = 0; r < n; ++r)
      out.vectors(r, k) = solver.eigenvectors()(static_cast<Eigen::Index>(r), src);
  }
  return out;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a) {
  require_square(a, "eigenvalues_hermitian");
  const double scale = std::max(1.0, a.max_abs());
  if (a.hermiticity_defect() > kHermitianTol * scale)
    fail(ErrorKind::hermiticity, "eigenvalues_hermitian: input is not Hermitian");
  const ComplexMatrix h = a.hermitian_part();
  Eigen::MatrixXcd m = as_eigen(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorKind::internal, "eigenvalues_hermitian: eigensolver did not converge");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::reverse(values.begin(), values.end());
  return values;
}

double trace_norm(const ComplexMatrix& a) {
  double s = 0;
  for (double v : eigenvalues_hermitian(a)) s += std::abs(v);
  return s;
}

double operator_norm(const ComplexMatrix& a) {
  double s = 0;
  for (double v : eigenvalues_hermitian(a)) s = std::max(s, std::abs(v));
  return s;
}

namespace {

template <class F>
ComplexMatrix spectral_apply(const ComplexMatrix& a, F f) {
  HermitianEigen e = eig_hermitian(a);
  for (auto& v : e.values) v = f(v);
  return reconstruct(e);
}

}  // namespace

ComplexMatrix abs_hermitian(const ComplexMatrix& a) {
  return spectral_apply(a, [](double v) { return std::abs(v); });
}

ComplexMatrix sign_hermitian(const ComplexMatrix& a) {
  return spectral_apply(a, [](double v) { return v < 0 ? -1.0 : 1.0; });
}

ComplexMatrix reconstruct(const HermitianEigen& e) {
  const std::size_t n = e.values.size();
  ComplexMatrix scaled = e.vectors;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) scaled(r, k) *= e.values[k];
  return scaled * e.vectors.adjoint();
}

// ---------------------------------------------------------------------------
// Slot contraction

std::vector<cplx> contract_slots(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                                 const std::vector<std::vector<ComplexMatrix>>& effects) {
  const std::size_t m = slot_dims.size();
  if (effects.size() != m) fail(ErrorKind::shape, "contract_slots: need effects for every slot");
  std::size_t total = product(slot_dims);
  if (w.rows() != total || w.cols() != total)
    fail(ErrorKind::shape, "contract_slots: operator does not match the slot dimensions");
  for (std::size_t j = 0; j < m; ++j) {
    if (effects[j].empty()) fail(ErrorKind::shape, "contract_slots: empty effect list");
    for (const auto& e : effects[j])
      if (e.rows() != slot_dims[j] || e.cols() != slot_dims[j])
        fail(ErrorKind::shape, "contract_slots: effect dimension does not match its slot");
  }

  // Working set: one operator on the remaining slots per outcome prefix.
  std::vector<ComplexMatrix> work{w};
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t d = slot_dims[j];
    const std::size_t rest = total / d;
    std::vector<ComplexMatrix> next;
    next.reserve(work.size() * effects[j].size());
    for (const auto& cur : work) {
      for (const auto& e : effects[j]) {
        ComplexMatrix red(rest, rest);
        // red(r', c') = sum_{a,b} E(b, a) * cur(a*rest + r', b*rest + c')
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) {
            const cplx coef = e(b, a);
            if (coef == cplx{}) continue;
            for (std::size_t r = 0; r < rest; ++r) {
              const cplx* src = &cur(a * rest + r, b * rest);
              cplx* dst = &red(r, 0);
              for (std::size_t c = 0; c < rest; ++c) dst[c] += coef * src[c];
            }
          }
        next.push_back(std::move(red));
      }
    }
    work = std::move(next);
    total = rest;
  }
  std::vector<cplx> out;
  out.reserve(work.size());
  for (const auto& r : work) out.push_back(r(0, 0));
  return out;
}

}  // namespace lqhv
