#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/catalogue.hpp"
#include "msd/codeword.hpp"
#include "msd/dense.hpp"
#include "msd/wep.hpp"

namespace msd {

enum class TwirlMode { None, EveryStep, FinalOnly };

// A named distillation map BlochVector -> (BlochVector, success probability).
struct Protocol {
  std::string name;
  int n_inputs = 0;
  TwirlMode twirl_mode = TwirlMode::None;
  Family twirl_family = Family::H;
  std::function<DistillStep(const BlochVector&)> map;

  DistillStep apply(const BlochVector& r) const {
    DistillStep step = map(r);
    if (twirl_mode == TwirlMode::EveryStep) {
      AxisFidelity af = axis_fidelity(step.r, twirl_family);
      step.r = af.axis * af.f;
    }
    return step;
  }
};

// Best-axis family projection: the twirl realized with the optimal Clifford.
inline Protocol with_twirl(Protocol p, TwirlMode mode, Family family) {
  p.twirl_mode = mode;
  p.twirl_family = family;
  return p;
}

inline BlochVector bloch_of_qubit(const Matrix& rho) {
  double w = rho.trace().real();
  double x = 2.0 * rho(1, 0).real() / w;
  double y = 2.0 * rho(1, 0).imag() / w;
  double z = (rho(0, 0).real() - rho(1, 1).real()) / w;
  return {x, y, z};
}

// Fixed Clifford rotation taking the canonical H axis (1,0,1)/sqrt(2) to the
// A axis (1,1,0)/sqrt(2); used to orient gadget resources and the
// triorthogonal pipeline, whose native magic state is |A> = T|+>.
inline BlochVector h_to_a_frame(const BlochVector& r) { return {r.x, r.z, -r.y}; }
inline BlochVector a_to_h_frame(const BlochVector& r) { return {r.x, -r.z, r.y}; }

// Conjugation sequences realizing the two pi/4 Y-rotations of the
// controlled-H decomposition c-H = (I x Ry) CZ (I x Ry^dag) through the T
// gadget: the gadget applies G^dag T G for conjugation list {G}.
inline const Matrix2& ch_conj_first() {  // Ry(-pi/4) leg, applied before CZ
  static const Matrix2 g = (gate_s() * gate_h() * gate_x()).adjoint();
  return g;
}
inline const Matrix2& ch_conj_second() {  // Ry(+pi/4) leg, applied after CZ
  static const Matrix2 g = (gate_s() * gate_h()).adjoint();
  return g;
}

// One controlled-H between the ancilla and a code qubit, consuming two
// gadget resources.
inline void apply_controlled_h(DenseState& s, int ancilla, int target,
                               const BlochVector& resource) {
  t_gadget(s, target, resource, {ch_conj_first()});
  apply_cz(s, ancilla, target);
  t_gadget(s, target, resource, {ch_conj_second()});
}

namespace detail {

inline Matrix kron_plus_msb(const Matrix& block) {
  const int d = static_cast<int>(block.rows());
  Matrix out(2 * d, 2 * d);
  out.block(0, 0, d, d) = 0.5 * block;
  out.block(0, d, d, d) = 0.5 * block;
  out.block(d, 0, d, d) = 0.5 * block;
  out.block(d, d, d, d) = 0.5 * block;
  return out;
}

// Hadamard-eigenstate distillation: encode k copies of rho(r), apply
// controlled-H^(x)n from a |+> ancilla via T gadgets, postselect the ancilla
// on |+>, decode, keep the first logical qubit.
inline DistillStep jones_map(const CodeOps& ops, const BlochVector& r, bool correct) {
  const StabilizerCode& code = ops.code();
  Matrix rho_k = Matrix::Ones(1, 1);
  for (int i = 0; i < code.k; ++i) {
    Matrix2 q = qubit_matrix(r);
    Matrix next(rho_k.rows() * 2, rho_k.cols() * 2);
    next.topLeftCorner(rho_k.rows(), rho_k.cols()) = q(0, 0) * rho_k;
    next.topRightCorner(rho_k.rows(), rho_k.cols()) = q(0, 1) * rho_k;
    next.bottomLeftCorner(rho_k.rows(), rho_k.cols()) = q(1, 0) * rho_k;
    next.bottomRightCorner(rho_k.rows(), rho_k.cols()) = q(1, 1) * rho_k;
    rho_k = std::move(next);
  }
  DenseState s{code.n + 1, kron_plus_msb(ops.encode(rho_k))};
  const int ancilla = code.n;
  BlochVector resource = h_to_a_frame(r);
  for (int j = 0; j < code.n; ++j) apply_controlled_h(s, ancilla, j, resource);
  PauliString anc_x = PauliString::identity(s.n);
  anc_x.x_bits = 1ull << ancilla;
  postselect_pauli(s, anc_x, +1, {ancilla});
  DenseState logical = correct ? ops.decode_corrected(s) : ops.decode(s);
  if (code.k == 2) logical = partial_trace(logical, {1});
  double p = logical.weight();
  if (p <= kWeightFloor) throw ZeroProbabilityError{};
  return {bloch_of_qubit(logical.rho), p};
}

// Triorthogonal-code distillation in codeword support, conjugated into the
// canonical H frame.
inline DistillStep bravyi_haah_map(const TriorthogonalMatrix& g, const BlochVector& r) {
  BlochVector native = h_to_a_frame(r);
  CodewordState s = cw_prepare(g);
  cw_schur(s, native);
  DenseState logical = cw_project_decode(s);
  if (logical.n == 2) logical = partial_trace(logical, {1});
  double p = logical.weight();
  if (p <= kWeightFloor) throw ZeroProbabilityError{};
  BlochVector out = a_to_h_frame(bloch_of_qubit(logical.rho));
  // Fixed logical X correction: the decoded qubit carries the conjugate
  // magic state, and conjugating by X returns it to the canonical axis so
  // that the ideal input is a fixed point.
  return {{out.x, -out.y, -out.z}, p};
}

}  // namespace detail

inline Protocol make_wep_protocol(const std::string& name, const StabilizerCode& code,
                                  Family family) {
  auto table = std::make_shared<TermTable>(build_term_table(code));
  Protocol p;
  p.name = name;
  p.n_inputs = code.n;
  p.twirl_family = family;
  p.map = [table](const BlochVector& r) { return distill_project(*table, r); };
  return p;
}

// correct = true decodes with single-qubit error correction instead of
// syndrome postselection (distance-3 codes only). The named catalogue
// protocols all use postselection, which reproduces the standard error
// suppression rates (35 eps^3 for the seven-qubit instance).
inline Protocol make_jones_protocol(const std::string& name, const StabilizerCode& code,
                                    int n_inputs, bool correct = false) {
  auto ops = std::make_shared<CodeOps>(code);
  Protocol p;
  p.name = name;
  p.n_inputs = n_inputs;
  p.twirl_family = Family::H;
  p.map = [ops, correct](const BlochVector& r) { return detail::jones_map(*ops, r, correct); };
  return p;
}

inline Protocol make_bravyi_haah_protocol(const std::string& name,
                                          const TriorthogonalMatrix& matrix) {
  auto g = std::make_shared<TriorthogonalMatrix>(matrix);
  Protocol p;
  p.name = name;
  p.n_inputs = matrix.columns;
  p.twirl_family = Family::H;
  p.map = [g](const BlochVector& r) { return detail::bravyi_haah_map(*g, r); };
  return p;
}

inline const std::vector<std::string>& protocol_names() {
  static const std::vector<std::string> names = {"five_qubit", "steane", "bravyi_haah_14",
                                                 "jones_622", "jones_steane_15"};
  return names;
}

// Wires a named protocol from catalogue entries.
inline Protocol make_protocol(const std::string& name, const Catalogue& cat) {
  if (name == "five_qubit")
    return make_wep_protocol(name, *cat.get("five_qubit").code, Family::T);
  if (name == "steane") return make_wep_protocol(name, *cat.get("steane").code, Family::H);
  if (name == "bravyi_haah_14")
    return make_bravyi_haah_protocol(name, *cat.get("bravyi_haah_14").matrix);
  if (name == "jones_622")
    return make_jones_protocol(name, *cat.get("jones_622").code, 14);
  if (name == "jones_steane_15")
    return make_jones_protocol(name, *cat.get("steane").code, 15);
  throw std::runtime_error("unknown protocol '" + name + "'");
}

}  // namespace msd
