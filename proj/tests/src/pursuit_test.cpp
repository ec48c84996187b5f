#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "fwsparse/dictionary.hpp"
#include "fwsparse/errors.hpp"
#include "fwsparse/pursuit.hpp"
#include "fwsparse/rng.hpp"
#include "fwsparse/synth.hpp"
#include "test_oracles.hpp"

using namespace fwsparse;

namespace {

struct Problem {
  Dictionary dict;
  SparseInstance inst;
};

Problem make_problem(Eigen::Index d, Eigen::Index n, Eigen::Index m,
                     std::uint64_t seed) {
  SynthConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.m = m;
  cfg.dict_seed = derive_seed(seed, 0);
  cfg.signal_seed = derive_seed(seed, 1);
  Dictionary dict = gen_dictionary(cfg);
  SparseInstance inst = gen_instance(dict, cfg);
  return {std::move(dict), std::move(inst)};
}

// Two nearly collinear atoms in the plane, angle `theta` apart.
Dictionary near_duplicate_pair(double theta) {
  Eigen::MatrixXd atoms(2, 2);
  atoms << 1.0, std::cos(theta),
           0.0, std::sin(theta);
  return Dictionary(atoms);
}

void check_line_search_against_oracle(const Dictionary& dict,
                                      const Eigen::VectorXd& y,
                                      const SolverTrace& trace, double beta) {
  const auto states = test::replay_fw_states(trace, dict.size(), beta);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const IterationRecord& rec = trace.records[k];
    const Eigen::VectorXd phi_x = dict.matrix() * states[k];
    const Eigen::VectorXd r = y - phi_x;
    const Eigen::VectorXd dir = rec.sign * beta * dict.atom(rec.atom) - phi_x;
    const SparseDirection s{rec.atom, rec.sign, beta};
    const double gamma = fw_step_size(dict, states[k], s, r);

    const long double gs = test::golden_section_min(
        [&](long double g) { return test::segment_objective(r, dir, g); },
        0.0L, 1.0L, 1e-12L);
    CHECK(std::abs(gamma - static_cast<double>(gs)) <= 1e-10);
    // The recorded step came from the incrementally maintained state, so
    // it may drift from the recomputed one by a hair more.
    CHECK(std::abs(rec.gamma - gamma) <= 1e-9);

    // No feasible perturbation may beat the exact step.
    const long double f_star = test::segment_objective(r, dir, gamma);
    for (double delta : {1e-4, -1e-4}) {
      const double probe = std::clamp(gamma + delta, 0.0, 1.0);
      CHECK(test::segment_objective(r, dir, probe) >=
            f_star - 1e-12L * std::max<long double>(1.0L, f_star));
    }
  }
}

}  // namespace

TEST_CASE("atom selection maximizes absolute correlation with sign") {
  const Dictionary dict(Eigen::MatrixXd::Identity(4, 4));
  Eigen::VectorXd r(4);
  r << 0.5, 0.0, -2.0, 0.0;
  auto sel = select_atom(dict, r);
  CHECK(sel.atom == 2);
  CHECK(sel.sign == -1);
  r(2) = 2.0;
  sel = select_atom(dict, r);
  CHECK(sel.atom == 2);
  CHECK(sel.sign == 1);
}

TEST_CASE("atom selection breaks exact ties toward the lowest index") {
  // Columns: e3, e1, e4, e5, e2 in a 5-dimensional signal space.
  Eigen::MatrixXd atoms(5, 5);
  atoms.setZero();
  atoms(2, 0) = 1.0;
  atoms(0, 1) = 1.0;
  atoms(3, 2) = 1.0;
  atoms(4, 3) = 1.0;
  atoms(1, 4) = 1.0;
  const Dictionary dict(atoms);
  Eigen::VectorXd r(5);
  r << 1.0, 1.0, 0.0, 0.0, 0.0;  // ties columns 1 and 4 at correlation 1
  const auto sel = select_atom(dict, r);
  CHECK(sel.atom == 1);
  CHECK(sel.sign == 1);
}

TEST_CASE("atom selection rejects unusable inputs") {
  const Dictionary dict(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(select_atom(dict, Eigen::VectorXd::Zero(3)),
                  ZeroResidualError);
  Eigen::VectorXd tiny = Eigen::VectorXd::Constant(3, 1e-15);
  CHECK_THROWS_AS(select_atom(dict, tiny), ZeroResidualError);
  CHECK_THROWS_AS(select_atom(dict, Eigen::VectorXd::Ones(4)),
                  DimensionMismatchError);
}

TEST_CASE("line-search step has the closed form c over beta from zero") {
  const Dictionary dict(Eigen::MatrixXd::Identity(4, 4));
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
  y(2) = 0.4;
  // From the origin toward vertex beta*e_atom the minimizer is
  // <phi, r> / beta.
  CHECK(fw_step_size(dict, x, {2, 1, 2.0}, y) == doctest::Approx(0.2));
  // Steps past the vertex clamp to a full step.
  y(2) = 5.0;
  CHECK(fw_step_size(dict, x, {2, 1, 2.0}, y) == 1.0);
}

TEST_CASE("line-search step clamps to zero when moving away") {
  const Dictionary dict(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd x(2);
  x << 0.5, 0.0;
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd r = y - dict.matrix() * x;
  CHECK(fw_step_size(dict, x, {0, 1, 1.0}, r) == 0.0);
}

TEST_CASE("line-search step rejects degenerate and malformed directions") {
  const Dictionary dict(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd x(2);
  x << 1.0, 0.0;  // the signal fit already sits on the vertex 1*e1
  const Eigen::VectorXd r = Eigen::VectorXd::Ones(2);
  CHECK_THROWS_AS(fw_step_size(dict, x, {0, 1, 1.0}, r),
                  DegenerateDirectionError);
  CHECK_THROWS_AS(fw_step_size(dict, x, {2, 1, 1.0}, r), RangeError);
  CHECK_THROWS_AS(fw_step_size(dict, x, {0, 0, 1.0}, r), RangeError);
  CHECK_THROWS_AS(fw_step_size(dict, Eigen::VectorXd::Zero(3), {0, 1, 1.0}, r),
                  DimensionMismatchError);
  CHECK_THROWS_AS(fw_step_size(dict, x, {0, 1, 1.0}, Eigen::VectorXd::Zero(3)),
                  DimensionMismatchError);
}

TEST_CASE("frank-wolfe takes a full step onto a matching vertex") {
  const Dictionary dict(Eigen::MatrixXd::Identity(4, 4));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
  y(0) = 0.7;
  FwConfig cfg;
  cfg.beta = 0.7;
  cfg.max_iters = 10;
  const SolverTrace trace = fw_solve(dict, y, cfg);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].atom == 0);
  CHECK(trace.records[0].sign == 1);
  CHECK(trace.records[0].gamma == 1.0);
  CHECK(trace.records[0].residual_norm == 0.7);
  CHECK(trace.records[0].iterate_l1 == 0.0);
  CHECK(trace.final_x(0) == 0.7);
  for (Eigen::Index i = 1; i < 4; ++i) CHECK(trace.final_x(i) == 0.0);
  CHECK(trace.final_residual_norm == 0.0);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK(trace.active_set == std::vector<Eigen::Index>{0});
}

TEST_CASE("frank-wolfe accepts an already-zero signal") {
  const Dictionary dict(Eigen::MatrixXd::Identity(3, 3));
  FwConfig cfg;
  cfg.beta = 1.0;
  const SolverTrace trace = fw_solve(dict, Eigen::VectorXd::Zero(3), cfg);
  CHECK(trace.records.empty());
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK(trace.final_residual_norm == 0.0);
}

TEST_CASE("frank-wolfe stops stationary when no vertex helps") {
  // The signal is orthogonal to every atom: the best step is no step, and
  // the probe iteration is not recorded.
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(3, 2);
  atoms(0, 0) = 1.0;
  atoms(1, 1) = 1.0;
  const Dictionary dict(atoms);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  y(2) = 1.0;
  FwConfig cfg;
  cfg.beta = 2.0;
  const SolverTrace trace = fw_solve(dict, y, cfg);
  CHECK(trace.records.empty());
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::Stationary);
  CHECK(trace.final_residual_norm == 1.0);
}

TEST_CASE("frank-wolfe stops stationary when pinned on a vertex") {
  // One atom of the signal is reachable, the rest is orthogonal; after the
  // full step onto the vertex the same vertex is selected again and the
  // direction degenerates.
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(3, 2);
  atoms(0, 0) = 1.0;
  atoms(1, 1) = 1.0;
  const Dictionary dict(atoms);
  Eigen::VectorXd y(3);
  y << 2.0, 0.0, 1.0;
  FwConfig cfg;
  cfg.beta = 1.0;
  cfg.max_iters = 10;
  const SolverTrace trace = fw_solve(dict, y, cfg);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].gamma == 1.0);
  CHECK(trace.stop_reason == StopReason::Stationary);
  CHECK(trace.final_x(0) == 1.0);
  CHECK(trace.final_residual_norm == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("frank-wolfe iterates stay inside the l1 ball") {
  const Problem p = make_problem(30, 60, 3, 200);
  const double beta = 1.5 * p.inst.coeff_l1;
  FwConfig cfg;
  cfg.beta = beta;
  cfg.max_iters = 150;
  const SolverTrace trace = fw_solve(p.dict, p.inst.signal, cfg);
  REQUIRE(!trace.records.empty());

  const auto states = test::replay_fw_states(trace, 60, beta);
  REQUIRE(states.size() == trace.records.size() + 1);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    CHECK(states[k].lpNorm<1>() == trace.records[k].iterate_l1);
  }
  for (const Eigen::VectorXd& x : states) {
    CHECK(x.lpNorm<1>() <= beta + 1e-10);
  }
  CHECK((trace.final_x - states.back()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("frank-wolfe residuals decrease monotonically") {
  const Problem p = make_problem(30, 60, 3, 200);
  FwConfig cfg;
  cfg.beta = 2.0 * p.inst.coeff_l1;
  cfg.max_iters = 150;
  const SolverTrace trace = fw_solve(p.dict, p.inst.signal, cfg);
  std::vector<double> rs;
  for (const IterationRecord& rec : trace.records) {
    rs.push_back(rec.residual_norm);
  }
  rs.push_back(trace.final_residual_norm);
  for (std::size_t k = 0; k + 1 < rs.size(); ++k) {
    CHECK(rs[k + 1] <= rs[k] * (1.0 + 1e-10));
  }
}

TEST_CASE("frank-wolfe recorded residuals match the replayed iterates") {
  const Problem p = make_problem(30, 60, 3, 200);
  const double beta = 1.5 * p.inst.coeff_l1;
  FwConfig cfg;
  cfg.beta = beta;
  cfg.max_iters = 150;
  const SolverTrace trace = fw_solve(p.dict, p.inst.signal, cfg);
  const auto states = test::replay_fw_states(trace, 60, beta);
  const double y_norm = p.inst.signal_l2;
  for (std::size_t k = 0; k < trace.records.size(); k += 10) {
    const double exact =
        (p.inst.signal - p.dict.matrix() * states[k]).norm();
    CHECK(std::abs(exact - trace.records[k].residual_norm) <= 1e-9 * y_norm);
  }
  const double final_exact =
      (p.inst.signal - p.dict.matrix() * trace.final_x).norm();
  CHECK(trace.final_residual_norm == final_exact);
}

TEST_CASE("frank-wolfe steps match the scalar minimization oracle") {
  SUBCASE("orthonormal dictionary") {
    const Dictionary dict(Eigen::MatrixXd::Identity(8, 8));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(8);
    y(0) = 1.5;
    y(3) = -0.75;
    y(6) = 0.375;
    FwConfig cfg;
    cfg.beta = 1.2 * 2.625;
    cfg.max_iters = 40;
    const SolverTrace trace = fw_solve(dict, y, cfg);
    REQUIRE(!trace.records.empty());
    check_line_search_against_oracle(dict, y, trace, cfg.beta);
  }
  SUBCASE("gaussian dictionary") {
    const Problem p = make_problem(30, 60, 3, 200);
    FwConfig cfg;
    cfg.beta = 2.0 * p.inst.coeff_l1;
    cfg.max_iters = 30;
    const SolverTrace trace = fw_solve(p.dict, p.inst.signal, cfg);
    REQUIRE(!trace.records.empty());
    check_line_search_against_oracle(p.dict, p.inst.signal, trace, cfg.beta);
  }
}

TEST_CASE("frank-wolfe stays on the true support in the guarded regime") {
  SynthConfig cfg;
  cfg.d = 200;
  cfg.n = 400;
  cfg.dict_seed = derive_seed(7, 0);
  cfg.signal_seed = derive_seed(7, 1);
  const Dictionary dict = gen_dictionary(cfg);
  const double mu = coherence(dict);
  const Eigen::Index m_star = max_recoverable_sparsity(mu, cfg.n);
  REQUIRE(m_star >= 1);
  cfg.m = m_star;
  const SparseInstance inst = gen_instance(dict, cfg);

  FwConfig solver_cfg;
  solver_cfg.beta = 4.0 * inst.coeff_l1;
  solver_cfg.max_iters = 300;
  solver_cfg.record_rho = true;
  const SolverTrace trace =
      fw_solve(dict, inst.signal, solver_cfg, &inst.support);
  REQUIRE(!trace.records.empty());
  for (const IterationRecord& rec : trace.records) {
    CHECK(inst.support.contains(rec.atom));
    REQUIRE(rec.rho.has_value());
    CHECK(*rec.rho < 1.0);
  }
  for (Eigen::Index i : trace.active_set) {
    CHECK(inst.support.contains(i));
  }

  // The residual never leaves the span of the support atoms.
  const Eigen::Index m = inst.support.size();
  Eigen::MatrixXd sub(dict.dim(), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    sub.col(k) = dict.matrix().col(inst.support.indices()[static_cast<std::size_t>(k)]);
  }
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(sub).householderQ() *
      Eigen::MatrixXd::Identity(dict.dim(), m);
  const Eigen::VectorXd r_final =
      inst.signal - dict.matrix() * trace.final_x;
  CHECK((r_final - q * (q.transpose() * r_final)).norm() <=
        1e-10 * inst.signal_l2);
}

TEST_CASE("frank-wolfe reports an exhausted iteration budget") {
  const Problem p = make_problem(20, 40, 3, 600);
  FwConfig cfg;
  cfg.beta = 1.05 * p.inst.coeff_l1;
  cfg.max_iters = 3;
  const SolverTrace trace = fw_solve(p.dict, p.inst.signal, cfg);
  CHECK(trace.records.size() == 3);
  CHECK_FALSE(trace.converged);
  CHECK(trace.stop_reason == StopReason::MaxIters);
}

TEST_CASE("frank-wolfe honors the default relative tolerance") {
  const Dictionary dict(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd y(2);
  y << 0.3, 0.2;
  FwConfig cfg;
  cfg.beta = 4.0;
  cfg.max_iters = 500;
  const SolverTrace trace = fw_solve(dict, y, cfg);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK(trace.final_residual_norm <= 1.01e-10 * y.norm());
}

TEST_CASE("matching pursuit peels an orthonormal expansion exactly") {
  const Dictionary dict(Eigen::MatrixXd::Identity(6, 6));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
  y(0) = 3.0;
  y(2) = -2.0;
  y(4) = 1.0;
  FwConfig cfg;
  cfg.max_iters = 10;
  const SolverTrace trace = mp_solve(dict, y, cfg);
  REQUIRE(trace.records.size() == 3);
  CHECK(trace.records[0].atom == 0);
  CHECK(trace.records[0].sign == 1);
  CHECK(trace.records[1].atom == 2);
  CHECK(trace.records[1].sign == -1);
  CHECK(trace.records[2].atom == 4);
  CHECK(trace.records[2].sign == 1);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK((trace.final_x - y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(trace.final_residual_norm == 0.0);
  CHECK(trace.active_set == std::vector<Eigen::Index>{0, 2, 4});
}

TEST_CASE("matching pursuit residuals decrease strictly") {
  const Problem p = make_problem(20, 40, 3, 400);
  FwConfig cfg;
  cfg.max_iters = 50;
  const SolverTrace trace = mp_solve(p.dict, p.inst.signal, cfg);
  REQUIRE(trace.records.size() >= 2);
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    CHECK(trace.records[k + 1].residual_norm < trace.records[k].residual_norm);
  }
}

TEST_CASE("matching pursuit stops stationary on an orthogonal signal") {
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(3, 2);
  atoms(0, 0) = 1.0;
  atoms(1, 1) = 1.0;
  const Dictionary dict(atoms);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  y(2) = 1.0;
  FwConfig cfg;
  const SolverTrace trace = mp_solve(dict, y, cfg);
  CHECK(trace.records.empty());
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::Stationary);
  CHECK(trace.final_residual_norm == 1.0);
}

TEST_CASE("orthogonal matching pursuit recovers orthonormal expansions") {
  const Dictionary dict(Eigen::MatrixXd::Identity(8, 8));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(8);
  y(1) = 1.25;
  y(5) = -0.5;
  y(7) = 0.25;
  FwConfig cfg;
  cfg.max_iters = 20;
  const SolverTrace trace = omp_solve(dict, y, cfg);
  REQUIRE(trace.records.size() == 3);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK((trace.final_x - y).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(trace.final_residual_norm <= 1e-14);
}

TEST_CASE("orthogonal matching pursuit recovers under a certified support") {
  const Problem p = make_problem(50, 70, 2, 301);
  // The support-specific recovery certificate must hold for this seed,
  // otherwise the assertion below would be unfounded.
  REQUIRE(exact_recovery_coefficient(p.dict, p.inst.support) < 1.0);

  FwConfig cfg;
  cfg.max_iters = 20;
  const SolverTrace trace = omp_solve(p.dict, p.inst.signal, cfg);
  REQUIRE(trace.records.size() == 2);
  for (const IterationRecord& rec : trace.records) {
    CHECK(p.inst.support.contains(rec.atom));
  }
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::ResidualTol);
  CHECK(trace.final_residual_norm <= 1.01e-10 * p.inst.signal_l2);
  CHECK((trace.final_x - p.inst.coefficients).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("orthogonal matching pursuit leaves the refit residual orthogonal") {
  const Problem p = make_problem(30, 60, 4, 302);
  FwConfig cfg;
  cfg.max_iters = 6;
  cfg.residual_tol = 0.0;
  const SolverTrace trace = omp_solve(p.dict, p.inst.signal, cfg);
  REQUIRE(!trace.records.empty());
  const Eigen::VectorXd r =
      p.inst.signal - p.dict.matrix() * trace.final_x;
  for (Eigen::Index i : trace.active_set) {
    CHECK(std::abs(p.dict.atom(i).dot(r)) <= 1e-10 * p.inst.signal_l2);
  }
}

TEST_CASE("orthogonal matching pursuit stalls outside the span") {
  Eigen::MatrixXd atoms = Eigen::MatrixXd::Zero(3, 2);
  atoms(0, 0) = 1.0;
  atoms(1, 1) = 1.0;
  const Dictionary dict(atoms);
  Eigen::VectorXd y(3);
  y << 1.0, 0.0, 1.0;  // one recoverable coordinate, one orthogonal
  FwConfig cfg;
  cfg.max_iters = 10;
  const SolverTrace trace = omp_solve(dict, y, cfg);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].atom == 0);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::Stationary);
  CHECK(trace.final_x(0) == 1.0);
  CHECK(trace.final_residual_norm == doctest::Approx(1.0));
}

TEST_CASE("orthogonal matching pursuit stops rather than reselect an atom") {
  // Two near-parallel atoms in the xy plane; the z component of the signal
  // is unreachable, so after both atoms are refit the residual stays well
  // above the tolerance while no fresh atom remains.
  const double theta = 1e-6;
  Eigen::MatrixXd atoms(3, 2);
  atoms << 1.0, std::cos(theta),
           0.0, std::sin(theta),
           0.0, 0.0;
  const Dictionary dict{atoms};
  Eigen::VectorXd y(3);
  y << 1.0, 0.5, 0.3;
  FwConfig cfg;
  cfg.max_iters = 10;
  cfg.residual_tol = 1e-14;
  const SolverTrace trace = omp_solve(dict, y, cfg);
  CHECK(trace.records.size() == 2);
  CHECK(trace.converged);
  CHECK(trace.stop_reason == StopReason::Stationary);
  CHECK(trace.final_residual_norm == doctest::Approx(0.3));
}

TEST_CASE("orthogonal matching pursuit rejects dependent selections") {
  const Dictionary dict = near_duplicate_pair(1e-12);
  Eigen::VectorXd y(2);
  y << 1.0, 0.5;
  FwConfig cfg;
  cfg.max_iters = 10;
  cfg.residual_tol = 1e-14;
  CHECK_THROWS_AS(omp_solve(dict, y, cfg), RankDeficientSelectionError);
}

TEST_CASE("good-atom ratio on hand-checkable states") {
  const Dictionary ortho(Eigen::MatrixXd::Identity(4, 4));
  Eigen::VectorXd r = Eigen::VectorXd::Zero(4);
  r(0) = 1.0;
  CHECK(good_atom_ratio(ortho, Support({0, 1}), r) == 0.0);
  r(2) = 1.0;
  CHECK(good_atom_ratio(ortho, Support({0, 1}), r) == 1.0);
  Eigen::VectorXd off = Eigen::VectorXd::Zero(4);
  off(2) = 1.0;
  CHECK_THROWS_AS(good_atom_ratio(ortho, Support({0, 1}), off),
                  UndefinedRatioError);

  // Basis pair plus the diagonal atom: with only the first basis atom on
  // the support, the diagonal atom correlates sqrt(2) times stronger.
  Eigen::MatrixXd fan(2, 3);
  const double h = std::sqrt(0.5);
  fan << 1.0, h, 0.0,
         0.0, h, 1.0;
  const Dictionary dict(fan);
  Eigen::VectorXd diag_r(2);
  diag_r << 1.0, 1.0;
  CHECK(good_atom_ratio(dict, Support({0}), diag_r) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(good_atom_ratio(dict, Support{}, diag_r), RangeError);
  CHECK_THROWS_AS(good_atom_ratio(dict, Support({5}), diag_r), RangeError);
  CHECK_THROWS_AS(good_atom_ratio(dict, Support({0}), Eigen::VectorXd::Ones(3)),
                  DimensionMismatchError);
}

TEST_CASE("all three solvers agree on the first selection") {
  const Problem p = make_problem(20, 40, 3, 500);
  FwConfig cfg;
  cfg.beta = 2.0 * p.inst.coeff_l1;
  cfg.max_iters = 5;
  const SolverTrace fw = fw_solve(p.dict, p.inst.signal, cfg);
  const SolverTrace mp = mp_solve(p.dict, p.inst.signal, cfg);
  const SolverTrace omp = omp_solve(p.dict, p.inst.signal, cfg);
  REQUIRE(!fw.records.empty());
  REQUIRE(!mp.records.empty());
  REQUIRE(!omp.records.empty());
  CHECK(fw.records[0].atom == mp.records[0].atom);
  CHECK(fw.records[0].atom == omp.records[0].atom);
  CHECK(fw.records[0].sign == mp.records[0].sign);
  CHECK(fw.records[0].sign == omp.records[0].sign);
  const auto direct = select_atom(p.dict, p.inst.signal);
  CHECK(direct.atom == fw.records[0].atom);
  CHECK(direct.sign == fw.records[0].sign);
}

TEST_CASE("solver configuration is validated") {
  FwConfig cfg;
  cfg.beta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.beta = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.beta = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.beta = 1.0;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.max_iters = 10;
  cfg.residual_tol = -1e-3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.residual_tol.reset();
  CHECK_NOTHROW(cfg.validate());

  const Dictionary dict(Eigen::MatrixXd::Identity(3, 3));
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  cfg.record_rho = true;
  CHECK_THROWS_AS(fw_solve(dict, y, cfg), ConfigError);
  const Support empty;
  CHECK_THROWS_AS(fw_solve(dict, y, cfg, &empty), RangeError);
  const Support outside({7});
  CHECK_THROWS_AS(mp_solve(dict, y, cfg, &outside), RangeError);
}
