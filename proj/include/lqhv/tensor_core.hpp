#pragma once

// Dense complex linear algebra over tensor-product index structures.
//
// Operators live on a product of "slots". A FactorShape lists, per site n,
// the local dimension d_n and the number of copies S_n of that site's space;
// slots are ordered site-major, setting-minor, so the slot of (site n,
// setting s) has flat index S_0 + ... + S_{n-1} + s. Slot 0 is the most
// significant digit of a row/column index.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lqhv {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultDimensionCap = 4096;
inline constexpr double kHermitianTol = 1e-10;

// Dimension cap for dense operators: LQHV_DIM_CAP if set, else 4096.
std::size_t dimension_cap();

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const double> diag);
  // |v><v|
  static ComplexMatrix outer(std::span<const cplx> v);
  // |u><v|
  static ComplexMatrix outer(std::span<const cplx> u, std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  // Largest |A - A^dagger| entry.
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = kHermitianTol) const;
  // (A + A^dagger) / 2
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);
  // a += scale * other
  void add_scaled(const ComplexMatrix& other, cplx scale);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// tr[A B] without forming the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

struct FactorShape {
  std::vector<std::size_t> dims;  // d_n
  std::vector<std::size_t> mult;  // S_n

  FactorShape() = default;
  FactorShape(std::vector<std::size_t> site_dims, std::vector<std::size_t> multiplicities);
  // Plain N-site shape with every multiplicity 1.
  static FactorShape sites(std::vector<std::size_t> site_dims);

  std::size_t site_count() const noexcept { return dims.size(); }
  std::size_t slot_count() const;
  // Flat slot index of (site, setting).
  std::size_t slot(std::size_t site, std::size_t setting) const;
  std::size_t site_of_slot(std::size_t slot) const;
  // Dimension of every slot in order.
  std::vector<std::size_t> slot_dims() const;
  std::size_t total_dim() const;
  // All slots of one site.
  std::vector<std::size_t> site_slots(std::size_t site) const;

  friend bool operator==(const FactorShape&, const FactorShape&) = default;
};

void validate(const FactorShape& shape);

// Kronecker product; throws a size error above `cap`.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t cap = dimension_cap());
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors,
                       std::size_t cap = dimension_cap());
// A^{\otimes n}; n = 0 gives the 1x1 identity.
ComplexMatrix kron_power(const ComplexMatrix& a, std::size_t n,
                         std::size_t cap = dimension_cap());

// Identity everywhere except X at slot (site, setting).
ComplexMatrix embed_at_slot(const ComplexMatrix& x, const FactorShape& shape,
                            std::size_t site, std::size_t setting);

// General slot embedding on a product of slots with dimensions `slot_dims`:
// `y` acts on the slots listed in `selected` (ascending), every other slot j
// carries `fill[j]`. Entries of `fill` at selected slots are ignored.
ComplexMatrix embed_on_slots(const ComplexMatrix& y, std::span<const std::size_t> slot_dims,
                             std::span<const std::size_t> selected,
                             std::span<const ComplexMatrix> fill);

// Trace over every slot not listed in `keep` (ascending, nonempty).
ComplexMatrix partial_trace(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix& w, const FactorShape& shape,
                            std::span<const std::size_t> keep);

// Reorders slots: slot j of the result is slot perm[j] of the input.
ComplexMatrix permute_slots(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                            std::span<const std::size_t> perm);

struct HermitianEigen {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // columns are eigenvectors
};

// Hermitian eigendecomposition. Inputs within the hermiticity tolerance are
// symmetrized first; anything further off throws a hermiticity error.
HermitianEigen eig_hermitian(const ComplexMatrix& a);
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a);

double trace_norm(const ComplexMatrix& a);
// Largest |eigenvalue| of a Hermitian matrix.
double operator_norm(const ComplexMatrix& a);
// |A| = A^+ + A^-
ComplexMatrix abs_hermitian(const ComplexMatrix& a);
// sign(A) with sign(0) := +1, so the result is a Hermitian unitary.
ComplexMatrix sign_hermitian(const ComplexMatrix& a);
// V diag(f(lambda)) V^dagger
ComplexMatrix reconstruct(const HermitianEigen& e);

// tr[W (E_0(k_0) (x) E_1(k_1) (x) ...)] for every outcome tuple k, where
// effects[j] is the list of operators contracted into slot j. The result is
// indexed row-major with slot 0 most significant.
std::vector<cplx> contract_slots(const ComplexMatrix& w, std::span<const std::size_t> slot_dims,
                                 const std::vector<std::vector<ComplexMatrix>>& effects);

}  // namespace lqhv
