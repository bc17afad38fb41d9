#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace msd {

// Signed n-qubit Pauli operator, P = i^phase * prod_j X^{x_j} Z^{z_j}.
// phase is an exponent of i, mod 4. Qubit j lives in bit j of the masks.
struct PauliString {
  int n = 0;
  std::uint64_t x_bits = 0;
  std::uint64_t z_bits = 0;
  int phase = 0;  // exponent of i, in {0,1,2,3}

  static PauliString identity(int n) { return {n, 0, 0, 0}; }

  // Parses strings like "XZZXI", "-XIY", "+ZZ". Y contributes i*XZ.
  static PauliString from_letters(const std::string& s) {
    PauliString p;
    std::size_t start = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      if (s[0] == '-') p.phase = 2;
      start = 1;
    }
    for (std::size_t i = start; i < s.size(); ++i) {
      int q = p.n++;
      if (q >= 64) throw std::domain_error("PauliString: more than 64 qubits");
      switch (s[i]) {
        case 'I': break;
        case 'X': p.x_bits |= 1ull << q; break;
        case 'Z': p.z_bits |= 1ull << q; break;
        case 'Y':
          p.x_bits |= 1ull << q;
          p.z_bits |= 1ull << q;
          p.phase = (p.phase + 1) & 3;
          break;
        default:
          throw std::domain_error(std::string("PauliString: bad letter '") + s[i] + "'");
      }
    }
    return p;
  }

  char letter(int q) const {
    bool x = (x_bits >> q) & 1, z = (z_bits >> q) & 1;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  int weight() const { return std::popcount(x_bits | z_bits); }

  // Hermitian iff phase parity matches the X.Z overlap parity.
  bool hermitian() const {
    int overlap = std::popcount(x_bits & z_bits);
    return (phase & 1) == (overlap & 1);
  }

  // For Hermitian P: P = sign * tensor of {I,X,Y,Z}; returns +1 or -1.
  int sign() const {
    int y = std::popcount(x_bits & z_bits);
    int e = (phase - y) & 3;
    if (e == 0) return 1;
    if (e == 2) return -1;
    throw std::logic_error("PauliString::sign on non-Hermitian operator");
  }

  std::string str() const {
    // Each Y letter absorbs one factor of i (Y = iXZ), so the printed
    // prefix is i^(phase - #Y).
    int e = (phase - std::popcount(x_bits & z_bits)) & 3;
    std::string s = e == 0 ? "+" : e == 2 ? "-" : e == 1 ? "i" : "-i";
    for (int q = 0; q < n; ++q) s += letter(q);
    return s;
  }

  bool operator==(const PauliString&) const = default;
};

// Product with the symplectic phase rule: moving Z past X costs (-1).
inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::domain_error("pauli_mul: mismatched qubit count");
  PauliString p;
  p.n = a.n;
  p.x_bits = a.x_bits ^ b.x_bits;
  p.z_bits = a.z_bits ^ b.z_bits;
  int swaps = std::popcount(a.z_bits & b.x_bits);
  p.phase = (a.phase + b.phase + 2 * swaps) & 3;
  return p;
}

inline bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n != b.n) throw std::domain_error("commutes: mismatched qubit count");
  int sym = std::popcount(a.x_bits & b.z_bits) + std::popcount(a.z_bits & b.x_bits);
  return (sym & 1) == 0;
}

struct StabilizerCode {
  std::string name;
  int n = 0;
  int k = 0;
  std::vector<PauliString> generators;  // n-k of them
  std::vector<PauliString> logical_x;   // k of them
  std::vector<PauliString> logical_z;   // k of them
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(const std::string& msg) {
    ok = false;
    failures.push_back(msg);
  }
};

// All 2^(n-k) subset products of the generators, each resolved to phase +-1.
// Throws if the generators are dependent (a duplicate element appears).
inline std::vector<PauliString> enumerate_group(const StabilizerCode& code) {
  std::vector<PauliString> group;
  group.push_back(PauliString::identity(code.n));
  for (const auto& g : code.generators) {
    std::size_t sz = group.size();
    for (std::size_t i = 0; i < sz; ++i) group.push_back(pauli_mul(group[i], g));
  }
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (!group[i].hermitian() || (group[i].phase != 0 && group[i].phase != 2))
      throw std::runtime_error(code.name + ": group element with phase not +-1: " +
                               group[i].str());
    for (std::size_t j = i + 1; j < group.size(); ++j)
      if (group[i].x_bits == group[j].x_bits && group[i].z_bits == group[j].z_bits)
        throw std::runtime_error(code.name + ": dependent generators (duplicate element)");
  }
  return group;
}

inline ValidationReport validate_code(const StabilizerCode& code) {
  ValidationReport rep;
  if (static_cast<int>(code.generators.size()) != code.n - code.k)
    rep.fail(code.name + ": expected " + std::to_string(code.n - code.k) + " generators, got " +
             std::to_string(code.generators.size()));
  for (const auto& p : code.generators)
    if (p.n != code.n) rep.fail(code.name + ": generator length mismatch: " + p.str());
  for (std::size_t i = 0; i < code.generators.size(); ++i)
    for (std::size_t j = i + 1; j < code.generators.size(); ++j)
      if (!commutes(code.generators[i], code.generators[j]))
        rep.fail(code.name + ": generators anticommute: " + code.generators[i].str() + " vs " +
                 code.generators[j].str());
  if (static_cast<int>(code.logical_x.size()) != code.k ||
      static_cast<int>(code.logical_z.size()) != code.k)
    rep.fail(code.name + ": need k logical X and k logical Z operators");
  for (const auto& gen : code.generators) {
    for (const auto& l : code.logical_x)
      if (!commutes(gen, l)) rep.fail(code.name + ": logical X anticommutes with " + gen.str());
    for (const auto& l : code.logical_z)
      if (!commutes(gen, l)) rep.fail(code.name + ": logical Z anticommutes with " + gen.str());
  }
  for (std::size_t i = 0; i < code.logical_x.size(); ++i)
    for (std::size_t j = 0; j < code.logical_z.size(); ++j) {
      bool anti = !commutes(code.logical_x[i], code.logical_z[j]);
      if (anti != (i == j))
        rep.fail(code.name + ": logical pair (" + std::to_string(i) + "," + std::to_string(j) +
                 ") has wrong commutation");
    }
  if (rep.ok) {
    try {
      enumerate_group(code);
    } catch (const std::exception& e) {
      rep.fail(e.what());
    }
  }
  return rep;
}

// Binary matrix whose pairwise and triple-wise column-product parities vanish.
// Odd-weight rows carry the logical qubits of the induced CSS code.
struct TriorthogonalMatrix {
  std::string name;
  int columns = 0;
  std::vector<std::uint64_t> rows;  // bit j = column j

  std::vector<std::uint64_t> odd_rows() const {
    std::vector<std::uint64_t> v;
    for (auto r : rows)
      if (std::popcount(r) & 1) v.push_back(r);
    return v;
  }
  std::vector<std::uint64_t> even_rows() const {
    std::vector<std::uint64_t> v;
    for (auto r : rows)
      if (!(std::popcount(r) & 1)) v.push_back(r);
    return v;
  }
};

inline ValidationReport validate_triorthogonal(const TriorthogonalMatrix& g) {
  ValidationReport rep;
  const auto& rows = g.rows;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      if (std::popcount(rows[a] & rows[b]) & 1)
        rep.fail(g.name + ": pair condition fails for rows " + std::to_string(a) + "," +
                 std::to_string(b));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      for (std::size_t c = b + 1; c < rows.size(); ++c)
        if (std::popcount(rows[a] & rows[b] & rows[c]) & 1)
          rep.fail(g.name + ": triple condition fails for rows " + std::to_string(a) + "," +
                   std::to_string(b) + "," + std::to_string(c));
  // Row independence over F2 (leading-bit elimination).
  std::uint64_t basis[64] = {};
  for (auto r : rows) {
    for (int bit = 63; bit >= 0; --bit) {
      if (!((r >> bit) & 1)) continue;
      if (basis[bit] == 0) {
        basis[bit] = r;
        r = 0;
        break;
      }
      r ^= basis[bit];
    }
  }
  // A dependent row reduces to zero without claiming a slot; recount.
  int rank = 0;
  for (auto b : basis)
    if (b) ++rank;
  if (rank != static_cast<int>(rows.size()))
    rep.fail(g.name + ": rows are linearly dependent");
  return rep;
}

}  // namespace msd
