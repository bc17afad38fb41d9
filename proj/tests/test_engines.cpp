#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "msd/catalogue.hpp"
#include "msd/codeword.hpp"
#include "msd/dense.hpp"
#include "msd/protocols.hpp"
#include "msd/wep.hpp"

using namespace msd;

namespace {

BlochVector random_physical(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    BlochVector r{u(rng), u(rng), u(rng)};
    if (r.norm2() <= 1.0) return r;
  }
}

// Independent realization of the projection protocol: n literal copies,
// dense codespace projection, logical readout.
DistillStep dense_project_oracle(const CodeOps& ops, const BlochVector& r) {
  const StabilizerCode& code = ops.code();
  std::vector<BlochVector> copies(code.n, r);
  DenseState s = dense_init(copies);
  DenseState logical = ops.decode(s);
  return {bloch_of_qubit(logical.rho), logical.weight()};
}

double bloch_dev(const BlochVector& a, const BlochVector& b) { return distance(a, b); }

}  // namespace

TEST_CASE("weight enumerator term tables have the documented shape", "[engines]") {
  Catalogue cat = load_catalogue("data/codes.txt");
  for (const char* name : {"five_qubit", "steane"}) {
    const StabilizerCode& code = *cat.get(name).code;
    TermTable table = build_term_table(code);
    const std::size_t group = 1u << (code.n - code.k);
    int all_i_in_identity = 0;
    for (int c = 0; c < 4; ++c) {
      REQUIRE(table.cosets[c].size() == group);
      for (const auto& term : table.cosets[c]) {
        bool all_i = true;
        for (char l : term.letters) all_i = all_i && l == 'I';
        if (all_i) {
          CHECK(c == 0);
          CHECK(term.sign == 1.0);
          ++all_i_in_identity;
        }
      }
    }
    CHECK(all_i_in_identity == 1);
  }
}

TEST_CASE("projection map fixes the maximally mixed state", "[engines]") {
  Catalogue cat = load_catalogue("data/codes.txt");
  TermTable table = build_term_table(*cat.get("five_qubit").code);
  DistillStep step = distill_project(table, {0, 0, 0});
  CHECK(step.r.norm() < 1e-14);
  CHECK(step.p_success == Catch::Approx(1.0 / 16.0));
}

TEST_CASE("weight enumerator engine matches the dense projection oracle", "[engines]") {
  Catalogue cat = load_catalogue("data/codes.txt");
  std::mt19937 rng(20260826);
  for (const char* name : {"five_qubit", "steane"}) {
    const StabilizerCode& code = *cat.get(name).code;
    TermTable table = build_term_table(code);
    CodeOps ops(code);
    double max_dev = 0.0, max_pdev = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      BlochVector r = random_physical(rng);
      DistillStep fast, slow;
      bool fast_bad = false, slow_bad = false;
      try {
        fast = distill_project(table, r);
      } catch (const ZeroProbabilityError&) {
        fast_bad = true;
      }
      try {
        slow = dense_project_oracle(ops, r);
      } catch (const ZeroProbabilityError&) {
        slow_bad = true;
      }
      REQUIRE(fast_bad == slow_bad);
      if (fast_bad) continue;
      max_dev = std::max(max_dev, bloch_dev(fast.r, slow.r));
      max_pdev = std::max(max_pdev, std::abs(fast.p_success - slow.p_success));
    }
    INFO(name);
    CHECK(max_dev <= 1e-10);
    CHECK(max_pdev <= 1e-10);
  }
}

TEST_CASE("gadget with ideal resource applies T up to weight 1/2", "[engines]") {
  const double s2 = 1.0 / std::sqrt(2.0);
  const BlochVector ideal{s2, s2, 0};  // T|+>
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    BlochVector r = random_physical(rng);
    DenseState s = dense_init({r});
    t_gadget(s, 0, ideal);
    CHECK(s.weight() == Catch::Approx(0.5).margin(1e-10));
    BlochVector out = bloch_of_qubit(s.rho);
    // T on the Bloch ball: rotate the xy plane by +pi/4
    BlochVector expect{s2 * (r.x - r.y), s2 * (r.x + r.y), r.z};
    CHECK(distance(out, expect) < 1e-10);
  }
}

TEST_CASE("schur gadget equals the explicit attach-and-postselect gadget", "[engines]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    BlochVector r = random_physical(rng);
    BlochVector res = random_physical(rng);
    BlochVector spectator = random_physical(rng);
    DenseState a = dense_init({r, spectator});
    DenseState b = dense_init({r, spectator});
    std::vector<Matrix2> conj = {gate_h()};
    t_gadget(a, 0, res, conj);
    t_gadget_attach(b, 0, res, conj);
    CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two gadgets and a CZ reproduce exact controlled-H", "[engines]") {
  const double s2 = 1.0 / std::sqrt(2.0);
  const BlochVector ideal{s2, s2, 0};
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    BlochVector rc = random_physical(rng);
    BlochVector rt = random_physical(rng);
    DenseState s = dense_init({rt, rc});  // qubit 1 = control
    apply_controlled_h(s, 1, 0, ideal);
    CHECK(s.weight() == Catch::Approx(0.25).margin(1e-10));

    // exact c-H on the unnormalized reference
    DenseState ref = dense_init({rt, rc});
    Matrix ch = Matrix::Identity(4, 4);
    ch(2, 2) = s2; ch(2, 3) = s2;
    ch(3, 2) = s2; ch(3, 3) = -s2;
    ref.rho = ch * ref.rho * ch.adjoint();
    CHECK((s.rho / s.weight() - ref.rho).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("corrected decode equals the brute-force recovery sum", "[engines]") {
  Catalogue cat = load_catalogue("data/codes.txt");
  const StabilizerCode& code = *cat.get("steane").code;
  CodeOps ops(code);
  std::mt19937 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<BlochVector> qs;
    for (int i = 0; i < code.n; ++i) qs.push_back(random_physical(rng));
    DenseState s = dense_init(qs);
    DenseState fast = ops.decode_corrected(s);

    const int d = s.dim();
    Matrix acc = Matrix::Zero(2, 2);
    Matrix id = Matrix::Identity(d, d);
    for (int a = 0; a <= code.n; ++a)
      for (int b = 0; b <= code.n; ++b) {
        PauliString c = PauliString::identity(code.n);
        if (a > 0) c.x_bits |= 1ull << (a - 1);
        if (b > 0) c.z_bits |= 1ull << (b - 1);
        Matrix cm = pauli_left(c, id);
        DenseState moved{code.n, cm * s.rho * cm.adjoint()};
        try {
          acc += ops.decode(moved).rho;
        } catch (const ZeroProbabilityError&) {
        }
      }
    CHECK((fast.rho - acc).cwiseAbs().maxCoeff() < 1e-10);
  }
  // tiling precondition rejects non-perfect block sizes
  CodeOps five(*cat.get("five_qubit").code);
  DenseState s5 = dense_init({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
  CHECK_THROWS_AS(five.decode_corrected(s5), std::domain_error);
}

namespace {

// Literal-circuit oracle for the codeword engine: row ancillae in |+>,
// CNOT fan-out into the columns, X-basis postselection of the ancillae,
// per-column gadget resources, dense codespace projection and readout.
DenseState dense_triorthogonal_oracle(const TriorthogonalMatrix& g, const BlochVector& r) {
  const int rows = static_cast<int>(g.rows.size());
  const int n = g.columns;
  std::vector<BlochVector> init(rows, BlochVector{1, 0, 0});  // |+> ancillae
  for (int c = 0; c < n; ++c) init.push_back(BlochVector{0, 0, 1});
  DenseState s = dense_init(init);
  for (int b = 0; b < rows; ++b)
    for (int c = 0; c < n; ++c)
      if ((g.rows[b] >> c) & 1) apply_cnot(s, b, rows + c);
  for (int b = rows - 1; b >= 0; --b) {
    PauliString px = PauliString::identity(s.n);
    px.x_bits = 1ull << b;
    postselect_pauli(s, px, +1, {b});
  }
  s.rho *= static_cast<double>(1 << rows);  // ancilla readout is deterministic
  for (int c = 0; c < n; ++c) t_gadget(s, c, r);
  StabilizerCode code = css_code_from_matrix(g);
  CodeOps ops(code);
  return ops.decode(s);
}

}  // namespace

TEST_CASE("codeword engine equals dense circuit on small matrices", "[engines]") {
  std::vector<TriorthogonalMatrix> toys;
  toys.push_back({"t1", 3, {0b111}});
  toys.push_back({"t2", 5, {0b00111, 0b11000}});
  toys.push_back({"t3", 4, {0b0001, 0b0010}});
  toys.push_back({"t4", 5, {0b11111}});
  std::mt19937 rng(23);
  for (const auto& g : toys) {
    REQUIRE(validate_triorthogonal(g).ok);
    for (int trial = 0; trial < 5; ++trial) {
      BlochVector r = random_physical(rng);
      CodewordState cw = cw_prepare(g);
      cw_schur(cw, r);
      DenseState fast = cw_project_decode(cw);
      DenseState slow = dense_triorthogonal_oracle(g, r);
      REQUIRE(fast.n == slow.n);
      INFO(g.name);
      CHECK((fast.rho - slow.rho).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("codeword engine scaling guards", "[engines]") {
  TriorthogonalMatrix big;
  big.name = "big";
  big.columns = 20;
  big.rows.assign(13, 0);
  CHECK_THROWS_AS(cw_prepare(big), std::domain_error);
}
