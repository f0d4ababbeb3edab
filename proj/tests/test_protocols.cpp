#include "transducer/errors.hpp"
#include "transducer/metrics.hpp"
#include "transducer/protocols.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace transducer;
using std::numbers::pi;

namespace {

const EffectiveCouplings kBaseline{-1.0, 0.2, 0.1, std::nullopt};
const double kR = 1 / std::numbers::sqrt2;

ModeRegister four_modes() { return make_register({{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}}); }

Amplitudes unit(int slot) {
  Amplitudes v = Amplitudes::Zero();
  v(slot) = 1;
  return v;
}

// Apply a two-mode gate to modes (i, j) of a one-excitation amplitude vector.
// Basis of the gate: |00>, |0 1_j>, |1_i 0>, |11>.
Amplitudes apply_gate(const Eigen::Matrix4cd& u, int i, int j, const Amplitudes& x) {
  Amplitudes y = x;
  y(j) = u(1, 1) * x(j) + u(1, 2) * x(i);
  y(i) = u(2, 1) * x(j) + u(2, 2) * x(i);
  return y;
}

double max_abs_diff(const Amplitudes& x, const Amplitudes& y) { return (x - y).cwiseAbs().maxCoeff(); }

// Amplitudes of a pure one-excitation density matrix, phase fixed by the largest entry.
Amplitudes amplitudes_of(const ModeRegister& reg, const Matrix& rho) {
  Amplitudes v;
  Eigen::Index idx[4];
  for (int m = 0; m < 4; ++m) {
    std::vector<int> occ(4, 0);
    occ[m] = 1;
    idx[m] = reg.basis_index(occ);
  }
  int ref = 0;
  for (int m = 1; m < 4; ++m) {
    if (rho(idx[m], idx[m]).real() > rho(idx[ref], idx[ref]).real()) ref = m;
  }
  const double norm = std::sqrt(rho(idx[ref], idx[ref]).real());
  for (int m = 0; m < 4; ++m) v(m) = rho(idx[m], idx[ref]) / norm;
  return v;
}

}  // namespace

TEST_CASE("swap schedule durations") {
  const auto s = swap_protocol_schedule(kBaseline);
  REQUIRE(s.segments().size() == 3);
  CHECK(s.segments()[0].duration == doctest::Approx(pi / 2));
  CHECK(s.segments()[1].duration == doctest::Approx(5 * pi / 2));
  CHECK(s.segments()[2].duration == doctest::Approx(10 * pi / 2));
  CHECK(s.total_duration() == doctest::Approx(8 * pi));
  CHECK(s.segment_at(0) == 0);
  CHECK(s.segment_at(pi / 2 + 1e-9) == 1);
  CHECK(s.at(pi).couplings.G2 == 0.2);
  CHECK(s.at(pi).couplings.G1 == 0);
  CHECK_THROWS_AS(swap_protocol_schedule({1, 0, 0.1, std::nullopt}), ValidationError);
}

TEST_CASE("schedule validation") {
  ScheduleSegment bad;
  bad.label = "bad";
  bad.duration = 0;
  CHECK_THROWS_AS(CouplingSchedule({bad}), ValidationError);
  CHECK_THROWS_AS(CouplingSchedule({}), ValidationError);
  CHECK_THROWS_AS(adiabatic_schedule({1, 3, 0}, 1.5, 6), ValidationError);
  CHECK_THROWS_AS(adiabatic_schedule({1, 3, 15}, 1.5, 0), ValidationError);
  CHECK_THROWS_AS(entanglement_schedule(kBaseline, 1.2), ValidationError);
  CHECK_THROWS_AS(reversed_entanglement_schedule(kBaseline, -1.5), ValidationError);
}

TEST_CASE("gaussian pulse decays away from its centre") {
  const GaussianPulse p{1, 3, 15};
  CHECK(p(3) == 1);
  CHECK(p(0) == doctest::Approx(std::exp(-9.0 / 15)));
  CHECK(p(6) == doctest::Approx(p(0)));
  CHECK(evaluate(CouplingValue{p}, 3) == 1);
  CHECK(evaluate(CouplingValue{0.5}, 100) == 0.5);
}

TEST_CASE("lossless swap protocol moves the photon to the NV ensemble") {
  const auto reg = four_modes();
  const auto trace = simulate_schedule(basis_state(reg, std::vector<int>{1, 0, 0, 0}), swap_protocol_schedule(kBaseline), {});
  CHECK(std::abs(mode_population(trace, "d").final_value() - 1) < 1e-6);
  CHECK(mode_population(trace, "a").values.front() == 1);
  CHECK(trace.times.back() == doctest::Approx(8 * pi));

  const auto back =
      simulate_schedule(basis_state(reg, std::vector<int>{0, 0, 0, 1}), swap_protocol_schedule(kBaseline).reversed(), {});
  CHECK(std::abs(mode_population(back, "a").final_value() - 1) < 1e-6);
}

TEST_CASE("gate matrices") {
  const Eigen::Matrix4cd iswap = gate_unitary(1.0, pi / 2);
  const Complex i(0, 1);
  CHECK(std::abs(iswap(1, 1)) < 1e-12);
  CHECK(std::abs(iswap(2, 2)) < 1e-12);
  CHECK(std::abs(iswap(1, 2) - i) < 1e-12);
  CHECK(std::abs(iswap(2, 1) - i) < 1e-12);
  CHECK(iswap(0, 0) == Complex(1));
  CHECK(iswap(3, 3) == Complex(1));

  const Eigen::Matrix4cd root = gate_unitary(1.0, pi / 4);
  CHECK(std::abs(root(1, 1) - kR) < 1e-12);
  CHECK(std::abs(root(2, 2) - kR) < 1e-12);
  CHECK(std::abs(root(1, 2) - i * kR) < 1e-12);
  CHECK(std::abs(root(2, 1) - i * kR) < 1e-12);

  CHECK((gate_unitary(0.7, 0.0) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() == 0);
  CHECK(((root * root) - iswap).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-3, 3);
  for (int k = 0; k < 20; ++k) {
    const double g = dist(rng), t1 = dist(rng), t2 = dist(rng);
    const Eigen::Matrix4cd u = gate_unitary(g, t1);
    CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((gate_unitary(g, t1) * gate_unitary(g, t2) - gate_unitary(g, t1 + t2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  const Eigen::Matrix<std::complex<float>, 4, 4> single = gate_unitary<float>(1.0f, 0.5f);
  CHECK(std::abs(single(1, 2).imag() - std::sin(0.5f)) < 1e-6f);
}

TEST_CASE("swap schedule equals the gate product") {
  const auto schedule = swap_protocol_schedule(kBaseline);
  EvolveOptions opt;
  opt.sample_every = schedule.total_duration();
  const auto trace = simulate_schedule(unit(0), schedule, {}, opt);
  Amplitudes x = unit(0);
  // exp(-iHt) for H = +g(...) is gate_unitary(-g, t); gates act on (a,c), (b,c), (b,d).
  x = apply_gate(gate_unitary(-kBaseline.G1, pi / 2), 0, 2, x);
  x = apply_gate(gate_unitary(-kBaseline.G2, 5 * pi / 2), 1, 2, x);
  x = apply_gate(gate_unitary(-kBaseline.Gnv, 10 * pi / 2), 1, 3, x);
  CHECK(max_abs_diff(trace.amplitudes.back(), x) < 1e-8);
  CHECK((trace.populations(trace.size() - 1) - x.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-8);

  const auto reg = four_modes();
  const auto master = simulate_schedule(basis_state(reg, std::vector<int>{1, 0, 0, 0}), schedule, {}, opt);
  const Amplitudes from_rho = amplitudes_of(reg, master.states.back());
  CHECK(max_abs_diff(from_rho, x / x(3) * std::abs(x(3))) < 1e-8);
}

TEST_CASE("entanglement protocol step states") {
  const auto schedule = entanglement_schedule(kBaseline, kR);
  REQUIRE(schedule.segments().size() == 3);
  CHECK(schedule.segments()[0].duration == doctest::Approx(pi / (4 * 0.1)));
  EvolveOptions opt;
  opt.sample_every = 1e9;

  Amplitudes x = unit(3);
  std::vector<Amplitudes> expected;
  x = apply_gate(gate_unitary(-kBaseline.Gnv, pi / 4 / kBaseline.Gnv), 1, 3, x);
  expected.push_back(x);
  x = apply_gate(gate_unitary(-kBaseline.G2, pi / 2 / kBaseline.G2), 2, 1, x);
  expected.push_back(x);
  x = apply_gate(gate_unitary(-kBaseline.G1, pi / 2), 0, 2, x);
  expected.push_back(x);

  Amplitudes state = unit(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto part = evolve_amplitudes(state, [&](double t) { return schedule.at(i, t); }, {},
                                        schedule.segment_span(i), opt);
    state = part.amplitudes.back();
    CHECK(max_abs_diff(state, expected[i]) < 1e-8);
  }
  CHECK(max_abs_diff(expected[0].cwiseAbs().cast<Complex>(), Amplitudes(0, kR, 0, kR)) < 1e-8);
  CHECK(max_abs_diff(expected[1].cwiseAbs().cast<Complex>(), Amplitudes(0, 0, kR, kR)) < 1e-8);
  CHECK(max_abs_diff(expected[2].cwiseAbs().cast<Complex>(), Amplitudes(kR, 0, 0, kR)) < 1e-8);
  // Microwave amplitude after the first gate is the conjugate of the printed i/sqrt(2).
  CHECK(std::abs(expected[0](1) / expected[0](3) - Complex(0, -1)) < 1e-12);
  // a = -i d: the state is (|1>_a|0>_d + i|0>_a|1>_d)/sqrt(2) up to global phase, the complex
  // conjugate of (|1>_a|0>_d - i|0>_a|1>_d)/sqrt(2) under the gate_unitary sign convention.
  CHECK(std::abs(state(0) / state(3) - Complex(0, -1)) < 1e-8);

  const auto reg = four_modes();
  const auto trace = simulate_schedule(basis_state(reg, std::vector<int>{0, 0, 0, 1}), schedule, {}, opt);
  CHECK(concurrence(trace.final_state(), "a", "d") == doctest::Approx(1).epsilon(1e-8));
}

TEST_CASE("entanglement protocol limits") {
  const auto reg = four_modes();
  const auto nv = basis_state(reg, std::vector<int>{0, 0, 0, 1});
  const auto full = simulate_schedule(nv, entanglement_schedule(kBaseline, 1.0), {});
  CHECK(std::abs(mode_population(full, "a").final_value() - 1) < 1e-6);
  CHECK(concurrence(full.final_state(), "a", "d") < 1e-6);

  const auto none_schedule = entanglement_schedule(kBaseline, 0.0);
  CHECK(none_schedule.segments().size() == 2);
  const auto none = simulate_schedule(nv, none_schedule, {});
  CHECK(std::abs(mode_population(none, "d").final_value() - 1) < 1e-12);
  CHECK(concurrence(none.final_state(), "a", "d") < 1e-12);
}

TEST_CASE("reversed entanglement protocol leaves alpha in the optical cavity") {
  const auto schedule = reversed_entanglement_schedule(kBaseline, kR);
  CHECK(schedule.segments()[0].duration == doctest::Approx(pi / 4));
  const auto reg = four_modes();
  const auto trace = simulate_schedule(basis_state(reg, std::vector<int>{1, 0, 0, 0}), schedule, {});
  CHECK(std::abs(mode_population(trace, "a").final_value() - 0.5) < 1e-6);
  CHECK(std::abs(mode_population(trace, "d").final_value() - 0.5) < 1e-6);
  CHECK(concurrence(trace.final_state(), "a", "d") == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("adiabatic passage keeps the REDC ensemble below half occupation") {
  const auto schedule = adiabatic_schedule({1, 3, 15}, 1.5, 6, 0.1);
  REQUIRE(schedule.segments().size() == 2);
  CHECK(schedule.total_duration() == doctest::Approx(6 + 5 * pi));
  CHECK(schedule.at(0.0).couplings.Gnv == 0);
  CHECK(schedule.at(3.0).couplings.G1 == 1);
  const auto reg = four_modes();
  const LindbladChannelSet rates{0.1, 0.001, 0.04, 0.01, 0};
  EvolveOptions opt;
  opt.sample_every = 0.01;
  const auto trace = simulate_schedule(basis_state(reg, std::vector<int>{1, 0, 0, 0}), schedule, rates, opt);
  CHECK(mode_population(trace, "c").peak() < 0.5);
}

TEST_CASE("a slow dark-state sweep carries the photon to the microwave cavity") {
  // G1 grows from ~0 to 20 G2, rotating the dark mode from the optical to the microwave cavity.
  const auto schedule = adiabatic_schedule({20, 60, 400}, 1.0, 60);
  const auto trace = simulate_schedule(unit(0), schedule, {});
  const Eigen::Vector4d p = trace.populations(trace.size() - 1);
  CHECK(p(1) > 0.99);
  double peak_c = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) peak_c = std::max(peak_c, trace.populations(k)(2));
  CHECK(peak_c < 0.01);
}

TEST_CASE("a zero-amplitude pulse leaves the photon to decay in place") {
  const auto schedule = adiabatic_schedule({0, 3, 15}, 1.5, 6);
  LindbladChannelSet rates{0.1, 0.001, 0.04, 0.01, 0};
  EvolveOptions opt;
  opt.sample_every = 0.5;
  const auto trace = simulate_schedule(unit(0), schedule, rates, opt);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const Eigen::Vector4d p = trace.populations(k);
    CHECK(std::abs(p(0) - std::exp(-0.1 * trace.times[k])) < 1e-10);
    CHECK(p.tail<3>().sum() == 0);
  }
}

TEST_CASE("reversing a pulsed schedule mirrors it in time") {
  const auto forward = adiabatic_schedule({1, 2, 15}, 1.5, 6, 0.1);
  const auto back = forward.reversed();
  const double total = forward.total_duration();
  for (double t : {0.5, 2.0, 5.5, 10.0, 20.0}) {
    const auto f = forward.at(t).couplings;
    const auto r = back.at(total - t).couplings;
    CHECK(f.G1 == doctest::Approx(r.G1));
    CHECK(f.G2 == r.G2);
    CHECK(f.Gnv == r.Gnv);
  }
}
