#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/pauli.hpp"
#include "msd/wep.hpp"

namespace msd {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr int kDenseQubitCap = 12;

// Unnormalized density matrix; trace = accumulated success probability.
struct DenseState {
  int n = 0;
  Matrix rho;

  double weight() const { return rho.trace().real(); }
  int dim() const { return 1 << n; }
};

inline Matrix2 qubit_matrix(const BlochVector& r) {
  Matrix2 m;
  m(0, 0) = 0.5 * (1.0 + r.z);
  m(1, 1) = 0.5 * (1.0 - r.z);
  m(0, 1) = 0.5 * Cplx(r.x, -r.y);
  m(1, 0) = 0.5 * Cplx(r.x, r.y);
  return m;
}

inline const BlochVector kKet0{0, 0, 1};
inline const BlochVector kKetPlus{1, 0, 0};

// Tensor product of single-qubit states; qubit 0 is the least significant bit
// of the basis index.
inline DenseState dense_init(const std::vector<BlochVector>& qubits) {
  if (static_cast<int>(qubits.size()) > kDenseQubitCap)
    throw std::domain_error("dense_init: qubit cap exceeded");
  DenseState s;
  s.n = static_cast<int>(qubits.size());
  s.rho = Matrix::Ones(1, 1);
  for (const auto& r : qubits) {
    Matrix2 q = qubit_matrix(r);
    Matrix next(s.rho.rows() * 2, s.rho.cols() * 2);
    // kron(q, rho): new bit is the most significant
    next.topLeftCorner(s.rho.rows(), s.rho.cols()) = q(0, 0) * s.rho;
    next.topRightCorner(s.rho.rows(), s.rho.cols()) = q(0, 1) * s.rho;
    next.bottomLeftCorner(s.rho.rows(), s.rho.cols()) = q(1, 0) * s.rho;
    next.bottomRightCorner(s.rho.rows(), s.rho.cols()) = q(1, 1) * s.rho;
    s.rho = std::move(next);
  }
  return s;
}

// rho <- U_q rho U_q^dagger for a single-qubit unitary.
inline void apply_unitary1(DenseState& s, const Matrix2& u, int q) {
  if (q < 0 || q >= s.n) throw std::domain_error("apply_unitary1: bad qubit index");
  const int d = s.dim();
  const int bit = 1 << q;
  for (int c = 0; c < d; ++c)
    for (int i = 0; i < d; ++i) {
      if (i & bit) continue;
      Cplx a = s.rho(i, c), b = s.rho(i | bit, c);
      s.rho(i, c) = u(0, 0) * a + u(0, 1) * b;
      s.rho(i | bit, c) = u(1, 0) * a + u(1, 1) * b;
    }
  for (int r = 0; r < d; ++r)
    for (int j = 0; j < d; ++j) {
      if (j & bit) continue;
      Cplx a = s.rho(r, j), b = s.rho(r, j | bit);
      s.rho(r, j) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      s.rho(r, j | bit) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
}

inline Matrix2 gate_h() {
  Matrix2 m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

inline Matrix2 gate_s() {
  Matrix2 m;
  m << 1, 0, 0, Cplx(0, 1);
  return m;
}

inline Matrix2 gate_x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2 gate_z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix2 gate_t() {
  Matrix2 m;
  m << 1, 0, 0, std::polar(1.0, M_PI / 4.0);
  return m;
}

inline void apply_cnot(DenseState& s, int control, int target) {
  if (control < 0 || control >= s.n || target < 0 || target >= s.n || control == target)
    throw std::domain_error("apply_cnot: bad qubit indices");
  const int d = s.dim();
  const int cbit = 1 << control, tbit = 1 << target;
  auto perm = [&](int i) { return (i & cbit) ? (i ^ tbit) : i; };
  Matrix out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(perm(i), perm(j)) = s.rho(i, j);
  s.rho = std::move(out);
}

inline void apply_cz(DenseState& s, int a, int b) {
  if (a < 0 || a >= s.n || b < 0 || b >= s.n || a == b)
    throw std::domain_error("apply_cz: bad qubit indices");
  const int d = s.dim();
  const int abit = 1 << a, bbit = 1 << b;
  auto sign = [&](int i) { return ((i & abit) && (i & bbit)) ? -1.0 : 1.0; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s.rho(i, j) *= sign(i) * sign(j);
}

enum class Gate { H, S, X, Z };

inline void apply_gate(DenseState& s, Gate g, int q) {
  switch (g) {
    case Gate::H: apply_unitary1(s, gate_h(), q); break;
    case Gate::S: apply_unitary1(s, gate_s(), q); break;
    case Gate::X: apply_unitary1(s, gate_x(), q); break;
    case Gate::Z: apply_unitary1(s, gate_z(), q); break;
  }
}

// T gadget, Schur-product realization: conjugate the data qubit by the given
// Clifford sequence, multiply each data-qubit coherence (c,c') by the
// resource entry rho(r)_{c,c'}, then un-conjugate. Equivalent to attaching a
// resource qubit, CNOT (data control), and postselecting the resource on |0>.
inline void t_gadget(DenseState& s, int data_qubit, const BlochVector& resource,
                     const std::vector<Matrix2>& conj = {}) {
  for (const auto& u : conj) apply_unitary1(s, u, data_qubit);
  Matrix2 res = qubit_matrix(resource);
  const int d = s.dim();
  const int bit = 1 << data_qubit;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      s.rho(i, j) *= res((i & bit) ? 1 : 0, (j & bit) ? 1 : 0);
  for (auto it = conj.rbegin(); it != conj.rend(); ++it)
    apply_unitary1(s, it->adjoint(), data_qubit);
}

// Reference realization of the gadget with an explicit resource qubit.
inline void t_gadget_attach(DenseState& s, int data_qubit, const BlochVector& resource,
                            const std::vector<Matrix2>& conj = {}) {
  for (const auto& u : conj) apply_unitary1(s, u, data_qubit);
  const int d = s.dim();
  Matrix2 res = qubit_matrix(resource);
  Matrix big = Matrix::Zero(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      big.block(a * d, b * d, d, d) = res(a, b) * s.rho;
  DenseState ext{s.n + 1, std::move(big)};
  apply_cnot(ext, data_qubit, s.n);
  // project resource qubit onto |0> and drop it
  s.rho = ext.rho.topLeftCorner(d, d);
  for (auto it = conj.rbegin(); it != conj.rend(); ++it)
    apply_unitary1(s, it->adjoint(), data_qubit);
}

inline Cplx i_power(int p) {
  static const Cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[p & 3];
}

// (P rho)(u, j) = i^p (-1)^{z.v} rho(v, j) with v = u ^ x.
inline Matrix pauli_left(const PauliString& p, const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  Cplx ph = i_power(p.phase);
  Matrix out(d, d);
  for (int v = 0; v < d; ++v) {
    Cplx f = ph * ((std::popcount(static_cast<unsigned>(v & p.z_bits)) & 1) ? -1.0 : 1.0);
    int u = v ^ static_cast<int>(p.x_bits);
    out.row(u) = f * m.row(v);
  }
  return out;
}

// tr(rho P) = sum_v rho(v, v^x) i^p (-1)^{z.v}
inline Cplx pauli_expectation(const Matrix& rho, const PauliString& p) {
  const int d = static_cast<int>(rho.rows());
  Cplx ph = i_power(p.phase);
  Cplx sum = 0;
  for (int v = 0; v < d; ++v) {
    double f = (std::popcount(static_cast<unsigned>(v & p.z_bits)) & 1) ? -1.0 : 1.0;
    sum += rho(v, v ^ static_cast<int>(p.x_bits)) * f;
  }
  return ph * sum;
}

// Applies (I + eig P)/2 on both sides; optionally traces out listed qubits.
inline void postselect_pauli(DenseState& s, const PauliString& p, int eig,
                             const std::vector<int>& discard_qubits = {});

inline DenseState partial_trace(const DenseState& s, const std::vector<int>& discard) {
  std::vector<int> keep;
  for (int q = 0; q < s.n; ++q) {
    bool drop = false;
    for (int dq : discard)
      if (dq == q) drop = true;
    if (!drop) keep.push_back(q);
  }
  const int nk = static_cast<int>(keep.size());
  const int dk = 1 << nk;
  const int nd = s.n - nk;
  const int dd = 1 << nd;
  std::vector<int> drop_list;
  for (int q = 0; q < s.n; ++q) {
    bool kept = false;
    for (int kq : keep)
      if (kq == q) kept = true;
    if (!kept) drop_list.push_back(q);
  }
  auto expand = [&](int ik, int id) {
    int full = 0;
    for (int b = 0; b < nk; ++b)
      if ((ik >> b) & 1) full |= 1 << keep[b];
    for (int b = 0; b < nd; ++b)
      if ((id >> b) & 1) full |= 1 << drop_list[b];
    return full;
  };
  DenseState out{nk, Matrix::Zero(dk, dk)};
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Cplx sum = 0;
      for (int e = 0; e < dd; ++e) sum += s.rho(expand(i, e), expand(j, e));
      out.rho(i, j) = sum;
    }
  return out;
}

inline void postselect_pauli(DenseState& s, const PauliString& p, int eig,
                             const std::vector<int>& discard_qubits) {
  if (p.n != s.n) throw std::domain_error("postselect_pauli: support mismatch");
  double sgn = eig >= 0 ? 1.0 : -1.0;
  Matrix pm = pauli_left(p, s.rho);
  Matrix pmp = pauli_left(p, Matrix(pm.adjoint())).adjoint();
  // Q rho Q with Q = (I + s P)/2: (rho + s P rho + s rho P + P rho P)/4
  s.rho = 0.25 * (s.rho + sgn * pm + sgn * pm.adjoint() + pmp);
  if (s.weight() <= kWeightFloor) throw ZeroProbabilityError{};
  if (!discard_qubits.empty()) s = partial_trace(s, discard_qubits);
}

// Dense machinery for one stabilizer code: codespace projector and the 4^k
// logical Pauli words, used for both decoding and encoding.
class CodeOps {
 public:
  explicit CodeOps(const StabilizerCode& code) : code_(code) {
    const int d = 1 << code.n;
    auto group = enumerate_group(code);
    projector_ = Matrix::Zero(d, d);
    Matrix id = Matrix::Identity(d, d);
    for (const auto& s : group) projector_ += pauli_left(s, id);
    projector_ /= static_cast<double>(group.size());

    // logical words, indexed by base-4 digits (I,X,Y,Z) per logical qubit
    const int words = 1 << (2 * code.k);
    logical_words_.reserve(words);
    for (int w = 0; w < words; ++w) {
      PauliString acc = PauliString::identity(code.n);
      for (int qubit = 0; qubit < code.k; ++qubit) {
        int digit = (w >> (2 * qubit)) & 3;
        if (digit == 0) continue;
        PauliString op;
        if (digit == 1) op = code.logical_x[qubit];
        else if (digit == 3) op = code.logical_z[qubit];
        else {
          op = pauli_mul(code.logical_x[qubit], code.logical_z[qubit]);
          op.phase = (op.phase + 1) & 3;
        }
        acc = pauli_mul(acc, op);
      }
      logical_words_.push_back(acc);
    }
  }

  const StabilizerCode& code() const { return code_; }
  const Matrix& projector() const { return projector_; }

  // Encodes a k-qubit density matrix into the codespace:
  // rho_enc = 2^{-k} sum_w tr(rho_k sigma_w) Lbar_w Pi
  Matrix encode(const Matrix& rho_k) const {
    const int d = 1 << code_.n;
    Matrix out = Matrix::Zero(d, d);
    const int words = static_cast<int>(logical_words_.size());
    for (int w = 0; w < words; ++w) {
      Cplx c = pauli_expectation(rho_k, small_word(w));
      if (c == Cplx(0, 0)) continue;
      out += c * pauli_left(logical_words_[w], projector_);
    }
    return out / static_cast<double>(1 << code_.k);
  }

  // Projects onto the codespace and reads out the logical qubits. The result
  // stays unnormalized (trace = post-projection weight).
  DenseState decode(const DenseState& s) const {
    if (s.n != code_.n) throw std::domain_error("decode: block size mismatch");
    Matrix proj = projector_ * s.rho * projector_;
    if (proj.trace().real() <= kWeightFloor) throw ZeroProbabilityError{};
    const int dk = 1 << code_.k;
    Matrix out = Matrix::Zero(dk, dk);
    const int words = static_cast<int>(logical_words_.size());
    for (int w = 0; w < words; ++w) {
      Cplx c = pauli_expectation(proj, logical_words_[w]);
      PauliString sw = small_word(w);
      Matrix dense_small = pauli_left(sw, Matrix::Identity(dk, dk));
      out += (c / static_cast<double>(dk)) * dense_small;
    }
    return {code_.k, std::move(out)};
  }

  // Decodes with single-qubit error correction instead of syndrome
  // postselection: every syndrome sector is corrected by its matching
  // single-qubit X/Z recovery and kept. Requires the (n+1)^2 recovery
  // operators to tile the syndrome space, i.e. a perfect distance-3 CSS
  // code such as the seven-qubit one.
  DenseState decode_corrected(const DenseState& s) const {
    if (s.n != code_.n) throw std::domain_error("decode: block size mismatch");
    if ((code_.n + 1) * (code_.n + 1) != (1 << (code_.n - code_.k)))
      throw std::domain_error("decode_corrected: recoveries do not tile the syndrome space");
    ensure_corrected_observables();
    const int dk = 1 << code_.k;
    Matrix out = Matrix::Zero(dk, dk);
    const int words = static_cast<int>(logical_words_.size());
    for (int w = 0; w < words; ++w) {
      Cplx c = (corrected_obs_[w].transpose().cwiseProduct(s.rho)).sum();
      PauliString sw = small_word(w);
      out += (c / static_cast<double>(dk)) * pauli_left(sw, Matrix::Identity(dk, dk));
    }
    if (out.trace().real() <= kWeightFloor) throw ZeroProbabilityError{};
    return {code_.k, std::move(out)};
  }

 private:
  PauliString small_word(int w) const {
    std::string letters;
    for (int qubit = 0; qubit < code_.k; ++qubit) letters += "IXYZ"[(w >> (2 * qubit)) & 3];
    return PauliString::from_letters(letters);
  }

  // Observables M_w = sum_C C Lbar_w Pi C over recoveries C in
  // {I, X_i} x {I, Z_j}, so tr(rho M_w) sums the logical readout of every
  // corrected syndrome sector.
  void ensure_corrected_observables() const {
    if (!corrected_obs_.empty()) return;
    const int d = 1 << code_.n;
    std::vector<Matrix> recoveries;
    Matrix id = Matrix::Identity(d, d);
    for (int a = 0; a <= code_.n; ++a)
      for (int b = 0; b <= code_.n; ++b) {
        PauliString c = PauliString::identity(code_.n);
        if (a > 0) c.x_bits |= 1ull << (a - 1);
        if (b > 0) c.z_bits |= 1ull << (b - 1);
        recoveries.push_back(pauli_left(c, id));
      }
    corrected_obs_.reserve(logical_words_.size());
    for (const auto& word : logical_words_) {
      Matrix base = pauli_left(word, projector_);
      Matrix acc = Matrix::Zero(d, d);
      for (const Matrix& c : recoveries) acc += c.adjoint() * base * c;
      corrected_obs_.push_back(std::move(acc));
    }
  }

  StabilizerCode code_;
  Matrix projector_;
  std::vector<PauliString> logical_words_;
  mutable std::vector<Matrix> corrected_obs_;
};

}  // namespace msd
