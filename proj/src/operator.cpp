#include "qseq/operator.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace qseq {

namespace {

void require_same_layout(const HermitianOperator& a, const HermitianOperator& b,
                         const char* what) {
  if (!(a.structure() == b.structure()) || a.ordering() != b.ordering())
    throw std::invalid_argument(std::string(what) + ": structure mismatch (" +
                                to_string(a.structure()) + " vs " +
                                to_string(b.structure()) + ")");
}

// Factor dimensions of the full space in the given ordering.
std::vector<long> factor_dims(const PartyStructure& s, Ordering ord) {
  const int m = s.parties(), L = s.steps;
  std::vector<long> dims;
  dims.reserve(static_cast<size_t>(m) * L);
  if (ord == Ordering::StepMajor) {
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < m; ++k) dims.push_back(s.party_dims[static_cast<size_t>(k)]);
  } else {
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < L; ++l) dims.push_back(s.party_dims[static_cast<size_t>(k)]);
  }
  return dims;
}

std::vector<long> party_major_dims(const PartyStructure& s) {
  std::vector<long> dims(static_cast<size_t>(s.parties()));
  for (int k = 0; k < s.parties(); ++k) dims[static_cast<size_t>(k)] = s.party_dim(k);
  return dims;
}

}  // namespace

HermitianOperator::HermitianOperator(PartyStructure structure, Ordering ordering,
                                     Matrix entries)
    : structure_(std::move(structure)),
      ordering_(ordering),
      entries_(std::move(entries)) {
  structure_.validate();
  const long n = structure_.total_dim();
  if (entries_.rows() != n || entries_.cols() != n)
    throw std::invalid_argument("operator entries are " +
                                std::to_string(entries_.rows()) + "x" +
                                std::to_string(entries_.cols()) +
                                " but the structure needs side " +
                                std::to_string(n));
  const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermiticity)
    throw std::invalid_argument("matrix is not Hermitian (max deviation " +
                                std::to_string(dev) + ")");
  entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  require_same_layout(*this, other, "operator+");
  entries_ += other.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  require_same_layout(*this, other, "operator-");
  entries_ -= other.entries_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double scale) {
  entries_ *= scale;
  return *this;
}

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
  a += b;
  return a;
}

HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
  a -= b;
  return a;
}

HermitianOperator operator*(double scale, HermitianOperator a) {
  a *= scale;
  return a;
}

double max_abs_difference(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_layout(a, b, "max_abs_difference");
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

HermitianOperator identity(const PartyStructure& structure) {
  structure.validate();
  const long n = structure.total_dim();
  return HermitianOperator(structure, Ordering::StepMajor, Matrix::Identity(n, n));
}

HermitianOperator zero(const PartyStructure& structure) {
  structure.validate();
  const long n = structure.total_dim();
  return HermitianOperator(structure, Ordering::StepMajor, Matrix::Zero(n, n));
}

HermitianOperator ghz(int m, int d) {
  const PartyStructure structure = PartyStructure::uniform(m, d);
  const long n = structure.total_dim();
  // |i..i> has flat index i * (d^m - 1)/(d - 1) = sum_k i d^k.
  long repunit = 0;
  for (int k = 0; k < m; ++k) repunit = repunit * d + 1;
  Matrix g = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i * repunit, j * repunit) = 1.0 / d;
  return HermitianOperator(structure, Ordering::StepMajor, std::move(g));
}

HermitianOperator basis_product_projector(int m, int d, int i) {
  if (i < 0 || i >= d)
    throw std::invalid_argument("basis index " + std::to_string(i) +
                                " out of range for d=" + std::to_string(d));
  const PartyStructure structure = PartyStructure::uniform(m, d);
  const long n = structure.total_dim();
  long repunit = 0;
  for (int k = 0; k < m; ++k) repunit = repunit * d + 1;
  Matrix p = Matrix::Zero(n, n);
  p(i * repunit, i * repunit) = 1.0;
  return HermitianOperator(structure, Ordering::StepMajor, std::move(p));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.ordering() != Ordering::StepMajor || b.ordering() != Ordering::StepMajor)
    throw std::invalid_argument("tensor expects step-major operands");
  if (!a.structure().same_party_dims(b.structure()))
    throw std::invalid_argument("tensor: party dimensions differ (" +
                                to_string(a.structure()) + " vs " +
                                to_string(b.structure()) + ")");
  PartyStructure combined(a.structure().party_dims,
                          a.structure().steps + b.structure().steps);
  return HermitianOperator(std::move(combined), Ordering::StepMajor,
                           kernels::kron(a.entries(), b.entries()));
}

HermitianOperator tensor_chain(const std::vector<HermitianOperator>& factors) {
  if (factors.empty())
    throw std::invalid_argument("tensor_chain: empty factor list");
  HermitianOperator acc = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

HermitianOperator regroup_to_party_major(const HermitianOperator& op) {
  if (op.ordering() != Ordering::StepMajor)
    throw std::invalid_argument("regroup_to_party_major: operand not step-major");
  if (op.structure().steps == 1)
    return HermitianOperator(op.structure(), Ordering::PartyMajor, op.entries());
  const int m = op.structure().parties(), L = op.structure().steps;
  // Output slot (k, l) takes input factor (l, k).
  std::vector<int> order;
  order.reserve(static_cast<size_t>(m) * L);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < L; ++l) order.push_back(l * m + k);
  const auto perm = kernels::factor_permutation(
      factor_dims(op.structure(), Ordering::StepMajor), order);
  return HermitianOperator(op.structure(), Ordering::PartyMajor,
                           kernels::apply_index_permutation(op.entries(), perm));
}

HermitianOperator regroup_to_step_major(const HermitianOperator& op) {
  if (op.ordering() != Ordering::PartyMajor)
    throw std::invalid_argument("regroup_to_step_major: operand not party-major");
  if (op.structure().steps == 1)
    return HermitianOperator(op.structure(), Ordering::StepMajor, op.entries());
  const int m = op.structure().parties(), L = op.structure().steps;
  // Output slot (l, k) takes input factor (k, l).
  std::vector<int> order;
  order.reserve(static_cast<size_t>(m) * L);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < m; ++k) order.push_back(k * L + l);
  const auto perm = kernels::factor_permutation(
      factor_dims(op.structure(), Ordering::PartyMajor), order);
  return HermitianOperator(op.structure(), Ordering::StepMajor,
                           kernels::apply_index_permutation(op.entries(), perm));
}

HermitianOperator permute_steps(const HermitianOperator& op,
                                const std::vector<int>& sigma) {
  if (op.ordering() != Ordering::StepMajor)
    throw std::invalid_argument("permute_steps: operand not step-major");
  const int m = op.structure().parties(), L = op.structure().steps;
  if (static_cast<int>(sigma.size()) != L)
    throw std::invalid_argument("permute_steps: permutation length mismatch");
  std::vector<int> order;
  order.reserve(static_cast<size_t>(m) * L);
  for (int s = 0; s < L; ++s) {
    if (sigma[static_cast<size_t>(s)] < 0 || sigma[static_cast<size_t>(s)] >= L)
      throw std::invalid_argument("permute_steps: entry out of range");
    for (int k = 0; k < m; ++k)
      order.push_back(sigma[static_cast<size_t>(s)] * m + k);
  }
  const auto perm = kernels::factor_permutation(
      factor_dims(op.structure(), Ordering::StepMajor), order);
  return HermitianOperator(op.structure(), Ordering::StepMajor,
                           kernels::apply_index_permutation(op.entries(), perm));
}

HermitianOperator reinterpret_structure(const HermitianOperator& op,
                                        PartyStructure structure,
                                        Ordering ordering) {
  structure.validate();
  if (structure.total_dim() != op.dim())
    throw std::invalid_argument("reinterpret_structure: dimension mismatch");
  return HermitianOperator(std::move(structure), ordering, op.entries());
}

ProductPureState::ProductPureState(PartyStructure s, std::vector<Vector> vecs)
    : structure(std::move(s)), party_vectors(std::move(vecs)) {
  validate();
}

void ProductPureState::validate() const {
  structure.validate();
  if (static_cast<int>(party_vectors.size()) != structure.parties())
    throw std::invalid_argument("product state needs one vector per party");
  for (int k = 0; k < structure.parties(); ++k) {
    const Vector& v = party_vectors[static_cast<size_t>(k)];
    if (v.size() != structure.party_dim(k))
      throw std::invalid_argument("party " + std::to_string(k) +
                                  " vector has wrong dimension");
    if (std::abs(v.norm() - 1.0) > tol::unit_norm)
      throw std::invalid_argument("party " + std::to_string(k) +
                                  " vector is not normalized");
  }
}

Vector full_vector(const ProductPureState& state) {
  Vector w = Vector::Ones(1);
  for (const Vector& v : state.party_vectors) {
    Vector next(w.size() * v.size());
    for (long i = 0; i < w.size(); ++i)
      next.segment(i * v.size(), v.size()) = w(i) * v;
    w = std::move(next);
  }
  return w;
}

double expectation(const HermitianOperator& op, const ProductPureState& state) {
  if (op.ordering() != Ordering::PartyMajor)
    throw std::invalid_argument("expectation: operator must be party-major");
  if (!(op.structure() == state.structure))
    throw std::invalid_argument("expectation: structure mismatch");
  const Vector f = full_vector(state);
  return (f.adjoint() * op.entries() * f)(0).real();
}

Matrix contract_all_but_one(const HermitianOperator& op,
                            const ProductPureState& state, int k) {
  if (op.ordering() != Ordering::PartyMajor)
    throw std::invalid_argument("contract_all_but_one: operator must be party-major");
  if (!(op.structure() == state.structure))
    throw std::invalid_argument("contract_all_but_one: structure mismatch");
  if (k < 0 || k >= op.structure().parties())
    throw std::invalid_argument("contract_all_but_one: bad party index");
  Matrix out = kernels::contract_except(op.entries(),
                                        party_major_dims(op.structure()),
                                        state.party_vectors, k);
  return 0.5 * (out + out.adjoint()).eval();
}

EigMin eig_min(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  EigMin result{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  const double residual =
      (hermitian * result.vector - result.value * result.vector).norm();
  if (residual > 1e-9)
    throw std::runtime_error("eigenpair residual " + std::to_string(residual) +
                             " exceeds 1e-9");
  return result;
}

EigMin eig_min(const HermitianOperator& op) { return eig_min(op.entries()); }

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return solver.eigenvalues()(0);
}

std::vector<double> eigenvalues(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  std::vector<double> ev(static_cast<size_t>(op.dim()));
  for (long i = 0; i < op.dim(); ++i) ev[static_cast<size_t>(i)] = solver.eigenvalues()(i);
  return ev;
}

}  // namespace qseq
