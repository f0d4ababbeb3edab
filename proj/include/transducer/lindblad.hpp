#pragma once

#include "transducer/couplings.hpp"
#include "transducer/hilbert.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace transducer {

/// Decay rates (units of g) for the four canonical modes plus the microwave bath occupation.
/// Rates for modes missing from a register are ignored.
struct LindbladChannelSet {
  double kappa_a = 0;
  double kappa_b = 0;
  double gamma_c = 0;
  double gamma_d = 0;
  double n_th = 0;

  void validate() const;
  bool lossless() const { return kappa_a == 0 && kappa_b == 0 && gamma_c == 0 && gamma_d == 0; }
};

struct JumpOperator {
  SparseMatrix op;  // already scaled by sqrt(rate)
  const char* mode;
};

/// Jump operators L with d rho/dt ⊃ L rho L† - ½{L†L, rho}; the microwave mode gets the
/// thermal pair sqrt(kappa_b (n+1)) b and sqrt(kappa_b n) b†.
std::vector<JumpOperator> jump_operators(const ModeRegister& reg, const LindbladChannelSet& channels);

struct TimeSpan {
  double start = 0;
  double end = 0;
  double length() const { return end - start; }
};

struct EvolveOptions {
  double dt = 1e-3;
  /// Interval between stored samples; 0 stores every step. The last step is always stored.
  double sample_every = 0;
  /// Bound on |Tr rho - 1| checked after every step.
  double trace_tolerance = 1e-6;
  /// Validate hermiticity and positivity of every stored sample.
  bool check_samples = true;
};

/// Number of fixed RK4 steps used for a span: ceil(length / dt), at least one.
std::size_t step_count(double length, double dt);

struct SimulationTrace {
  ModeRegister reg;
  std::vector<double> times;
  std::vector<Matrix> states;
  std::vector<double> trace_errors;
  double max_step_trace_error = 0;
  std::size_t steps = 0;

  std::size_t size() const { return times.size(); }
  DensityMatrix state(std::size_t i) const { return {reg, states[i]}; }
  DensityMatrix final_state() const { return state(states.size() - 1); }

  /// Continue this trace with `next`, whose first sample duplicates our last one.
  void extend(const SimulationTrace& next);
};

using HamiltonianFn = std::function<OperatorMatrix(double)>;

/// Fixed-step RK4 integration of the Lindblad master equation
///   d rho/dt = -i[H(t), rho] + sum_L (L rho L† - ½{L†L, rho}).
/// No renormalisation is applied; trace drift beyond the tolerance raises
/// NumericalError with the offending step index.
SimulationTrace evolve_master(const DensityMatrix& rho0, const HamiltonianFn& hamiltonian,
                              const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Single-excitation amplitude picture, valid at zero temperature.

using Amplitudes = Eigen::Vector4cd;  // (a, b, c, d)

struct AmplitudeDrive {
  EffectiveCouplings couplings;
  ModeDetunings detunings = ModeDetunings::Zero();
};

using AmplitudeDriveFn = std::function<AmplitudeDrive(double)>;

struct AmplitudeTrace {
  std::vector<double> times;
  std::vector<Amplitudes> amplitudes;

  std::size_t size() const { return times.size(); }
  Eigen::Vector4d populations(std::size_t i) const { return amplitudes[i].cwiseAbs2(); }
  void extend(const AmplitudeTrace& next);
};

AmplitudeTrace evolve_amplitudes(const Amplitudes& alpha0, const AmplitudeDriveFn& drive,
                                 const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options = {});

AmplitudeTrace evolve_amplitudes(const Amplitudes& alpha0, const EffectiveCouplings& couplings,
                                 const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Bad-cavity limit: both cavities adiabatically eliminated, leaving two
// radiation-damped spin modes  d/dt (c, d) = -[[A_cc, A_cd], [A_dc, A_dd]] (c, d).

struct ReducedSpinModel {
  double A_cc = 0;
  double A_cd = 0;
  double A_dc = 0;
  double A_dd = 0;
  /// Both roots of A_cd nu^2 + (A_cc - A_dd) nu - A_cd = 0; empty when A_cd = 0.
  std::optional<std::pair<double, double>> nu;
  bool premise_holds = false;

  bool decoupled() const { return !nu.has_value(); }

  /// Decay exponents of the two normal modes (c-component route A_cc + A_cd nu).
  std::pair<double, double> c_decay_rates() const;
  /// Same exponents through the d-component route A_dd + A_dc / nu.
  std::pair<double, double> d_decay_rates() const;

  /// Closed-form spin amplitudes (c, d) at time t.
  Eigen::Vector2cd evaluate(const Eigen::Vector2cd& initial, double t) const;
};

ReducedSpinModel bad_cavity_reduce(const EffectiveCouplings& couplings, const LindbladChannelSet& channels,
                                   double premise_ratio = 20.0);

}  // namespace transducer
