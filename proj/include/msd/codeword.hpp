#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "msd/dense.hpp"
#include "msd/pauli.hpp"

namespace msd {

namespace gf2 {

// Basis of the space orthogonal to all given vectors (n-bit columns).
inline std::vector<std::uint64_t> nullspace(const std::vector<std::uint64_t>& rows, int n) {
  // Row reduce [rows] and track pivot columns, then read off free-column
  // solutions of rows . h = 0.
  std::vector<std::uint64_t> mat = rows;
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < mat.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < mat.size() && !((mat[pivot] >> col) & 1)) ++pivot;
    if (pivot == mat.size()) continue;
    std::swap(mat[rank], mat[pivot]);
    for (std::size_t r = 0; r < mat.size(); ++r)
      if (r != rank && ((mat[r] >> col) & 1)) mat[r] ^= mat[rank];
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::uint64_t> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::uint64_t h = 1ull << free;
    for (std::size_t r = 0; r < rank; ++r)
      if ((mat[r] >> free) & 1) h |= 1ull << pivot_col[r];
    basis.push_back(h);
  }
  return basis;
}

// Solves rows . h = target (one parity bit per row); throws if inconsistent.
inline std::uint64_t solve(const std::vector<std::uint64_t>& rows, int n,
                           std::uint64_t target_bits) {
  struct Aug {
    std::uint64_t row;
    int rhs;
  };
  std::vector<Aug> mat;
  for (std::size_t i = 0; i < rows.size(); ++i)
    mat.push_back({rows[i], static_cast<int>((target_bits >> i) & 1)});
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < mat.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < mat.size() && !((mat[pivot].row >> col) & 1)) ++pivot;
    if (pivot == mat.size()) continue;
    std::swap(mat[rank], mat[pivot]);
    for (std::size_t r = 0; r < mat.size(); ++r)
      if (r != rank && ((mat[r].row >> col) & 1)) {
        mat[r].row ^= mat[rank].row;
        mat[r].rhs ^= mat[rank].rhs;
      }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < mat.size(); ++r)
    if (mat[r].rhs) throw std::runtime_error("gf2::solve: inconsistent system");
  std::uint64_t h = 0;
  for (std::size_t r = 0; r < rank; ++r)
    if (mat[r].rhs) h |= 1ull << pivot_col[r];
  return h;
}

}  // namespace gf2

inline PauliString pauli_x_mask(int n, std::uint64_t mask) {
  PauliString p = PauliString::identity(n);
  p.x_bits = mask;
  return p;
}

inline PauliString pauli_z_mask(int n, std::uint64_t mask) {
  PauliString p = PauliString::identity(n);
  p.z_bits = mask;
  return p;
}

// CSS code induced by a triorthogonal matrix: X stabilizers from even rows,
// Z stabilizers from the dual of the full rowspan, logical X from odd rows.
inline StabilizerCode css_code_from_matrix(const TriorthogonalMatrix& g) {
  const int n = g.columns;
  auto odd = g.odd_rows();
  auto even = g.even_rows();
  StabilizerCode code;
  code.name = g.name;
  code.n = n;
  code.k = static_cast<int>(odd.size());
  for (auto r : even) code.generators.push_back(pauli_x_mask(n, r));
  for (auto h : gf2::nullspace(g.rows, n)) code.generators.push_back(pauli_z_mask(n, h));
  for (std::size_t j = 0; j < odd.size(); ++j) {
    code.logical_x.push_back(pauli_x_mask(n, odd[j]));
    // h_j . odd_i = delta_ij, h_j . even = 0
    std::uint64_t target = 0;
    std::vector<std::uint64_t> constraints;
    for (std::size_t i = 0; i < odd.size(); ++i) {
      constraints.push_back(odd[i]);
      if (i == j) target |= 1ull << constraints.size() - 1;
    }
    for (auto r : even) constraints.push_back(r);
    code.logical_z.push_back(pauli_z_mask(n, gf2::solve(constraints, n, target)));
  }
  return code;
}

// State supported on |u><v| with u, v in C = rowspan(G); indexed by the
// row-subset masks that generate each codeword.
struct CodewordState {
  const TriorthogonalMatrix* matrix = nullptr;
  std::vector<std::uint64_t> codewords;  // codewords[a] = xor of rows in subset a
  Matrix coeff;                          // |C| x |C|, unnormalized

  double weight() const { return coeff.trace().real(); }
};

inline CodewordState cw_prepare(const TriorthogonalMatrix& g) {
  const int rows = static_cast<int>(g.rows.size());
  if (rows > 12) throw std::domain_error("cw_prepare: rowspan cap exceeded");
  const int size = 1 << rows;
  CodewordState s;
  s.matrix = &g;
  s.codewords.resize(size);
  for (int a = 0; a < size; ++a) {
    std::uint64_t w = 0;
    for (int b = 0; b < rows; ++b)
      if ((a >> b) & 1) w ^= g.rows[b];
    s.codewords[a] = w;
  }
  s.coeff = Matrix::Constant(size, size, Cplx(1.0 / size, 0.0));
  return s;
}

// Transversal gadget layer: entry (u,v) picks up prod_i rho(r)_{u_i, v_i}.
inline void cw_schur(CodewordState& s, const BlochVector& r) {
  const int n = s.matrix->columns;
  Matrix2 rho = qubit_matrix(r);
  std::vector<Cplx> p00(n + 1), p01(n + 1), p10(n + 1), p11(n + 1);
  p00[0] = p01[0] = p10[0] = p11[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    p00[i] = p00[i - 1] * rho(0, 0);
    p01[i] = p01[i - 1] * rho(0, 1);
    p10[i] = p10[i - 1] * rho(1, 0);
    p11[i] = p11[i - 1] * rho(1, 1);
  }
  const int size = static_cast<int>(s.codewords.size());
  const std::uint64_t all = (n == 64) ? ~0ull : ((1ull << n) - 1);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      std::uint64_t u = s.codewords[a], v = s.codewords[b];
      int n11 = std::popcount(u & v);
      int n10 = std::popcount(u & ~v & all);
      int n01 = std::popcount(~u & v & all);
      int n00 = n - n11 - n10 - n01;
      s.coeff(a, b) *= p00[n00] * p01[n01] * p10[n10] * p11[n11];
    }
}

// X-stabilizer projection (average over even-row translations on both sides)
// followed by logical readout. Z stabilizers act trivially on the C support,
// so their parity average is the identity here. Returns the k logical qubits,
// unnormalized.
inline DenseState cw_project_decode(const CodewordState& s) {
  const TriorthogonalMatrix& g = *s.matrix;
  const int rows = static_cast<int>(g.rows.size());
  const int size = 1 << rows;
  std::vector<int> odd_bits, even_bits;
  for (int b = 0; b < rows; ++b) {
    if (std::popcount(g.rows[b]) & 1) odd_bits.push_back(b);
    else even_bits.push_back(b);
  }
  const int k = static_cast<int>(odd_bits.size());

  // translations by the even-row span, as subset-index masks
  std::vector<int> translations;
  for (int e = 0; e < (1 << even_bits.size()); ++e) {
    int mask = 0;
    for (std::size_t b = 0; b < even_bits.size(); ++b)
      if ((e >> b) & 1) mask |= 1 << even_bits[b];
    translations.push_back(mask);
  }
  const double inv = 1.0 / translations.size();
  Matrix proj = Matrix::Zero(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      Cplx acc = 0;
      for (int e : translations) acc += s.coeff(a ^ e, b);
      proj(a, b) = acc * inv;
    }
  Matrix proj2 = Matrix::Zero(size, size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      Cplx acc = 0;
      for (int e : translations) acc += proj(a, b ^ e);
      proj2(a, b) = acc * inv;
    }
  if (proj2.trace().real() <= kWeightFloor) throw ZeroProbabilityError{};

  // logical Z representatives: h_j . odd_i = delta_ij, h_j . even rows = 0
  std::vector<std::uint64_t> odd_rows, even_rows;
  for (int b : odd_bits) odd_rows.push_back(g.rows[b]);
  for (int b : even_bits) even_rows.push_back(g.rows[b]);
  std::vector<std::uint64_t> zreps;
  for (int j = 0; j < k; ++j) {
    std::vector<std::uint64_t> constraints = odd_rows;
    std::uint64_t target = 1ull << j;
    for (auto r : even_rows) constraints.push_back(r);
    zreps.push_back(gf2::solve(constraints, g.columns, target));
  }

  const int dk = 1 << k;
  Matrix out = Matrix::Zero(dk, dk);
  for (int w = 0; w < (1 << (2 * k)); ++w) {
    // logical word: digit per qubit, 0=I 1=X 2=Y 3=Z
    int xshift = 0;        // subset-index xor for the X part
    std::uint64_t t = 0;   // Z-parity mask on physical columns
    int ny = 0;
    std::string letters;
    for (int j = 0; j < k; ++j) {
      int digit = (w >> (2 * j)) & 3;
      letters += "IXYZ"[digit];
      if (digit == 1 || digit == 2) xshift |= 1 << odd_bits[j];
      if (digit == 2 || digit == 3) t ^= zreps[j];
      if (digit == 2) ++ny;
    }
    Cplx c = 0;
    for (int a = 0; a < size; ++a) {
      double sign = (std::popcount(t & s.codewords[a]) & 1) ? -1.0 : 1.0;
      c += proj2(a, a ^ xshift) * sign;
    }
    c *= i_power(ny);
    PauliString sw = PauliString::from_letters(letters);
    out += (c / static_cast<double>(dk)) * pauli_left(sw, Matrix::Identity(dk, dk));
  }
  return {k, std::move(out)};
}

}  // namespace msd
