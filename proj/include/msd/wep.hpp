#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "msd/bloch.hpp"
#include "msd/pauli.hpp"

namespace msd {

inline constexpr double kWeightFloor = 1e-300;

struct ZeroProbabilityError : std::runtime_error {
  ZeroProbabilityError() : std::runtime_error("postselection probability vanished") {}
};

// Coset-summed products of single-qubit Pauli traces: the four weight
// enumerator sums W_I, W_X, W_Y, W_Z of the rational distillation map.
// Each term is the sign and per-qubit letters of one group/coset element.
struct TermTable {
  int n = 0;
  struct Term {
    double sign;
    std::vector<char> letters;  // 'I','X','Y','Z', length n
  };
  std::array<std::vector<Term>, 4> cosets;  // I, X, Y, Z logical
};

inline TermTable build_term_table(const StabilizerCode& code) {
  if (code.k != 1)
    throw std::domain_error("build_term_table: only k=1 codes form a single-output map");
  auto group = enumerate_group(code);
  PauliString lx = code.logical_x[0];
  PauliString lz = code.logical_z[0];
  PauliString ly = pauli_mul(lx, lz);
  ly.phase = (ly.phase + 1) & 3;  // Y = i X Z, resolved Hermitian
  std::array<PauliString, 4> reps = {PauliString::identity(code.n), lx, ly, lz};

  TermTable table;
  table.n = code.n;
  for (int c = 0; c < 4; ++c) {
    for (const auto& s : group) {
      PauliString p = pauli_mul(reps[c], s);
      TermTable::Term term;
      term.sign = p.sign();
      term.letters.resize(code.n);
      for (int q = 0; q < code.n; ++q) term.letters[q] = p.letter(q);
      table.cosets[c].push_back(std::move(term));
    }
  }
  return table;
}

struct WValues {
  double w_i, w_x, w_y, w_z;
};

// Each W = sum over terms of sign * prod_q tr(P_q rho)/1 with tr factors
// {1, x, y, z}.
inline WValues evaluate_w(const TermTable& table, const BlochVector& r) {
  const double factors[4] = {1.0, r.x, r.y, r.z};
  auto factor = [&](char letter) {
    switch (letter) {
      case 'I': return factors[0];
      case 'X': return factors[1];
      case 'Y': return factors[2];
      default: return factors[3];
    }
  };
  double w[4];
  for (int c = 0; c < 4; ++c) {
    double sum = 0.0;
    for (const auto& term : table.cosets[c]) {
      double prod = term.sign;
      for (char letter : term.letters) prod *= factor(letter);
      sum += prod;
    }
    w[c] = sum;
  }
  return {w[0], w[1], w[2], w[3]};
}

struct DistillStep {
  BlochVector r;
  double p_success;
};

// One application of the projection protocol: r' = (W_X, W_Y, W_Z)/W_I,
// success probability W_I / 2^(n-k).
inline DistillStep distill_project(const TermTable& table, const BlochVector& r) {
  WValues w = evaluate_w(table, r);
  if (w.w_i <= kWeightFloor) throw ZeroProbabilityError{};
  double group_size = static_cast<double>(table.cosets[0].size());
  return {{w.w_x / w.w_i, w.w_y / w.w_i, w.w_z / w.w_i}, w.w_i / group_size};
}

}  // namespace msd
