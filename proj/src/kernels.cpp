#include "qseq/kernels.hpp"

#include <stdexcept>

namespace qseq::kernels {

namespace {

// Decompose flat into digits under mixed radix dims (most significant first).
void to_digits(long flat, const std::vector<long>& dims, std::vector<long>& out) {
  const size_t f = dims.size();
  for (size_t i = f; i-- > 0;) {
    out[i] = flat % dims[i];
    flat /= dims[i];
  }
}

// Others-slot index -> full index with zero in `slot`, plus the stride of
// `slot` in the full layout.
std::vector<long> embed_map(const std::vector<long>& dims, int slot, long& stride) {
  const int m = static_cast<int>(dims.size());
  long n_others = 1;
  for (int k = 0; k < m; ++k)
    if (k != slot) n_others *= dims[k];

  stride = 1;
  for (int k = slot + 1; k < m; ++k) stride *= dims[k];

  std::vector<long> strides(static_cast<size_t>(m), 1);
  for (int k = m - 2; k >= 0; --k) strides[k] = strides[k + 1] * dims[k + 1];

  std::vector<long> map(static_cast<size_t>(n_others));
  for (long io = 0; io < n_others; ++io) {
    long rest = io, full = 0;
    for (int k = m - 1; k >= 0; --k) {
      if (k == slot) continue;
      full += (rest % dims[k]) * strides[k];
      rest /= dims[k];
    }
    map[static_cast<size_t>(io)] = full;
  }
  return map;
}

// Tensor product of the vectors in all slots except `slot`, in slot order.
Vector others_vector(const std::vector<long>& dims,
                     const std::vector<Vector>& vectors, int slot) {
  Vector w = Vector::Ones(1);
  for (size_t k = 0; k < dims.size(); ++k) {
    if (static_cast<int>(k) == slot) continue;
    Vector next(w.size() * vectors[k].size());
    for (long i = 0; i < w.size(); ++i)
      next.segment(i * vectors[k].size(), vectors[k].size()) = w(i) * vectors[k];
    w = std::move(next);
  }
  return w;
}

Cplx contract_entry(const Matrix& a, const Vector& w,
                    const std::vector<long>& emb, long stride, long ar, long bc) {
  Cplx acc(0.0, 0.0);
  const long n_others = w.size();
  for (long io = 0; io < n_others; ++io) {
    const long row = emb[static_cast<size_t>(io)] + ar * stride;
    Cplx partial(0.0, 0.0);
    for (long jo = 0; jo < n_others; ++jo)
      partial += a(row, emb[static_cast<size_t>(jo)] + bc * stride) * w(jo);
    acc += std::conj(w(io)) * partial;
  }
  return acc;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  const long na = a.rows(), nb = b.rows();
  const long ma = a.cols(), mb = b.cols();
  Matrix c(na * nb, ma * mb);
  const long rows = na * nb;
#pragma omp parallel for schedule(static) if (rows * ma * mb >= parallel_grain)
  for (long i = 0; i < rows; ++i) {
    const long i1 = i / nb, i2 = i % nb;
    for (long j1 = 0; j1 < ma; ++j1) {
      const Cplx aij = a(i1, j1);
      for (long j2 = 0; j2 < mb; ++j2) c(i, j1 * mb + j2) = aij * b(i2, j2);
    }
  }
  return c;
}

std::vector<long> factor_permutation(const std::vector<long>& dims,
                                     const std::vector<int>& order) {
  const size_t f = dims.size();
  if (order.size() != f)
    throw std::invalid_argument("factor_permutation: order/dims size mismatch");

  long total = 1;
  for (long d : dims) total *= d;

  std::vector<long> out_dims(f);
  for (size_t s = 0; s < f; ++s) out_dims[s] = dims[static_cast<size_t>(order[s])];

  std::vector<long> perm(static_cast<size_t>(total));
  std::vector<long> digits(f);
  for (long idx = 0; idx < total; ++idx) {
    to_digits(idx, dims, digits);
    long out = 0;
    for (size_t s = 0; s < f; ++s)
      out = out * out_dims[s] + digits[static_cast<size_t>(order[s])];
    perm[static_cast<size_t>(idx)] = out;
  }
  return perm;
}

Matrix apply_index_permutation(const Matrix& a, const std::vector<long>& perm) {
  const long n = a.rows();
  if (static_cast<long>(perm.size()) != n || a.cols() != n)
    throw std::invalid_argument("apply_index_permutation: size mismatch");
  Matrix b(n, n);
#pragma omp parallel for schedule(static) if (n * n >= parallel_grain)
  for (long i = 0; i < n; ++i) {
    const long pi = perm[static_cast<size_t>(i)];
    for (long j = 0; j < n; ++j) b(pi, perm[static_cast<size_t>(j)]) = a(i, j);
  }
  return b;
}

Matrix contract_except(const Matrix& a, const std::vector<long>& dims,
                       const std::vector<Vector>& vectors, int slot) {
  const long dk = dims[static_cast<size_t>(slot)];
  long stride = 0;
  const std::vector<long> emb = embed_map(dims, slot, stride);
  const Vector w = others_vector(dims, vectors, slot);

  Matrix out(dk, dk);
  const long pairs = dk * dk;
  const long work = pairs * w.size() * w.size();
#pragma omp parallel for schedule(static) if (work >= parallel_grain)
  for (long p = 0; p < pairs; ++p)
    out(p / dk, p % dk) = contract_entry(a, w, emb, stride, p / dk, p % dk);
  return out;
}

namespace ref {

Matrix kron(const Matrix& a, const Matrix& b) {
  const long na = a.rows(), nb = b.rows();
  const long ma = a.cols(), mb = b.cols();
  Matrix c(na * nb, ma * mb);
  for (long i = 0; i < na * nb; ++i) {
    const long i1 = i / nb, i2 = i % nb;
    for (long j1 = 0; j1 < ma; ++j1) {
      const Cplx aij = a(i1, j1);
      for (long j2 = 0; j2 < mb; ++j2) c(i, j1 * mb + j2) = aij * b(i2, j2);
    }
  }
  return c;
}

Matrix apply_index_permutation(const Matrix& a, const std::vector<long>& perm) {
  const long n = a.rows();
  Matrix b(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      b(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]) = a(i, j);
  return b;
}

Matrix contract_except(const Matrix& a, const std::vector<long>& dims,
                       const std::vector<Vector>& vectors, int slot) {
  const long dk = dims[static_cast<size_t>(slot)];
  long stride = 0;
  const std::vector<long> emb = embed_map(dims, slot, stride);
  const Vector w = others_vector(dims, vectors, slot);
  Matrix out(dk, dk);
  for (long ar = 0; ar < dk; ++ar)
    for (long bc = 0; bc < dk; ++bc)
      out(ar, bc) = contract_entry(a, w, emb, stride, ar, bc);
  return out;
}

}  // namespace ref

}  // namespace qseq::kernels
