#include "transducer/lindblad.hpp"

#include "transducer/errors.hpp"

#include <cmath>
#include <string>

namespace transducer {

void LindbladChannelSet::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"kappa_a", kappa_a}, {"kappa_b", kappa_b}, {"gamma_c", gamma_c}, {"gamma_d", gamma_d}, {"n_th", n_th}};
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v) || v < 0) throw ValidationError(std::string(name) + " must be finite and >= 0");
  }
}

std::vector<JumpOperator> jump_operators(const ModeRegister& reg, const LindbladChannelSet& channels) {
  channels.validate();
  std::vector<JumpOperator> out;
  auto add = [&](const char* mode, double rate, bool raising) {
    if (rate <= 0 || !reg.contains(mode)) return;
    Matrix a = annihilation_op(reg, mode).matrix();
    Matrix op = std::sqrt(rate) * (raising ? Matrix(a.adjoint()) : a);
    out.push_back({op.sparseView(), mode});
  };
  add(kOptical, channels.kappa_a, false);
  add(kMicrowave, channels.kappa_b * (channels.n_th + 1), false);
  add(kMicrowave, channels.kappa_b * channels.n_th, true);
  add(kRedc, channels.gamma_c, false);
  add(kNv, channels.gamma_d, false);
  return out;
}

std::size_t step_count(double length, double dt) {
  if (!(dt > 0)) throw ValidationError("dt must be > 0");
  if (!(length >= 0)) throw ValidationError("time span must be non-negative");
  const double raw = length / dt;
  auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
  return n == 0 ? 1 : n;
}

void SimulationTrace::extend(const SimulationTrace& next) {
  if (times.empty()) {
    *this = next;
    return;
  }
  for (std::size_t i = 1; i < next.times.size(); ++i) {
    times.push_back(next.times[i]);
    states.push_back(next.states[i]);
    trace_errors.push_back(next.trace_errors[i]);
  }
  max_step_trace_error = std::max(max_step_trace_error, next.max_step_trace_error);
  steps += next.steps;
}

void AmplitudeTrace::extend(const AmplitudeTrace& next) {
  if (times.empty()) {
    *this = next;
    return;
  }
  times.insert(times.end(), next.times.begin() + 1, next.times.end());
  amplitudes.insert(amplitudes.end(), next.amplitudes.begin() + 1, next.amplitudes.end());
}

namespace {

const Complex kI{0.0, 1.0};

// d rho/dt for a Hermitian rho. With K = H - (i/2) sum L†L:
//   -i(K rho - rho K†) = -i X + i X†,  X = K rho,
// and L rho L† = L (L rho)†.
class LindbladGenerator {
 public:
  LindbladGenerator(const ModeRegister& reg, const LindbladChannelSet& channels)
      : jumps_(jump_operators(reg, channels)), damping_(reg.dimension(), reg.dimension()) {
    for (const auto& j : jumps_) damping_ += SparseMatrix(j.op.adjoint()) * j.op;
    damping_ *= Complex(0.0, -0.5);
  }

  void operator()(const SparseMatrix& h, const Matrix& rho, Matrix& out) const {
    const SparseMatrix k = h + damping_;
    const Matrix x = k * rho;
    out.noalias() = -kI * x;
    out.noalias() += kI * x.adjoint();
    for (const auto& j : jumps_) {
      const Matrix lr = j.op * rho;
      out.noalias() += j.op * lr.adjoint();
    }
  }

 private:
  std::vector<JumpOperator> jumps_;
  SparseMatrix damping_;
};

bool should_sample(std::size_t step, std::size_t n, std::size_t every) {
  return step == n || step % every == 0;
}

std::size_t sample_stride(double h, double sample_every) {
  if (sample_every <= 0) return 1;
  const auto k = static_cast<std::size_t>(std::llround(sample_every / h));
  return k == 0 ? 1 : k;
}

}  // namespace

SimulationTrace evolve_master(const DensityMatrix& rho0, const HamiltonianFn& hamiltonian,
                              const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options) {
  const ModeRegister& reg = rho0.reg();
  const LindbladGenerator generator(reg, channels);
  const std::size_t n = step_count(span.length(), options.dt);
  const double h = span.length() / static_cast<double>(n);
  const std::size_t every = sample_stride(h, options.sample_every);

  auto sparse_h = [&](double t, std::size_t step) -> SparseMatrix {
    OperatorMatrix op = hamiltonian(t);
    if (!(op.reg() == reg)) throw ValidationError("Hamiltonian register differs from state register");
    const double err = hermiticity_error(op.matrix());
    if (!(err <= 1e-10)) {
      throw ValidationError("Hamiltonian not Hermitian at t = " + std::to_string(t) + " (step " +
                            std::to_string(step) + ", error " + std::to_string(err) + ")");
    }
    return op.matrix().sparseView();
  };

  SimulationTrace trace;
  trace.reg = reg;
  trace.times.push_back(span.start);
  trace.states.push_back(rho0.matrix());
  trace.trace_errors.push_back(std::abs(rho0.matrix().trace() - Complex(1.0)));

  const Eigen::Index dim = reg.dimension();
  Matrix rho = rho0.matrix();
  Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
  SparseMatrix h_start = sparse_h(span.start, 0);

  for (std::size_t step = 1; step <= n; ++step) {
    const double t = span.start + static_cast<double>(step - 1) * h;
    const double t_next = span.start + static_cast<double>(step) * h;
    const SparseMatrix h_mid = sparse_h(t + h / 2, step);
    const SparseMatrix h_end = sparse_h(t_next, step);

    generator(h_start, rho, k1);
    tmp = rho + (h / 2) * k1;
    generator(h_mid, tmp, k2);
    tmp = rho + (h / 2) * k2;
    generator(h_mid, tmp, k3);
    tmp = rho + h * k3;
    generator(h_end, tmp, k4);
    rho += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    h_start = h_end;

    const double trace_error = std::abs(rho.trace() - Complex(1.0));
    trace.max_step_trace_error = std::max(trace.max_step_trace_error, trace_error);
    if (!(trace_error <= options.trace_tolerance)) {
      throw NumericalError("trace drifted by " + std::to_string(trace_error), step);
    }
    if (should_sample(step, n, every)) {
      if (options.check_samples) {
        if (auto why = density_violation(rho); !why.empty()) throw NumericalError(why, step);
      }
      trace.times.push_back(t_next);
      trace.states.push_back(rho);
      trace.trace_errors.push_back(trace_error);
    }
  }
  trace.steps = n;
  return trace;
}

namespace {

Amplitudes amplitude_rhs(const Amplitudes& x, const AmplitudeDrive& drive, const Eigen::Vector4d& half_rates) {
  const auto& c = drive.couplings;
  Amplitudes out;
  out(0) = -kI * c.G1 * x(2);
  out(1) = -kI * c.G2 * x(2) - kI * c.Gnv * x(3);
  out(2) = -kI * c.G1 * x(0) - kI * c.G2 * x(1);
  out(3) = -kI * c.Gnv * x(1);
  for (int i = 0; i < 4; ++i) out(i) -= (kI * drive.detunings(i) + half_rates(i)) * x(i);
  return out;
}

}  // namespace

AmplitudeTrace evolve_amplitudes(const Amplitudes& alpha0, const AmplitudeDriveFn& drive,
                                 const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options) {
  channels.validate();
  if (channels.n_th != 0) {
    throw ValidationError("amplitude equations require n_th = 0 (zero-temperature single-excitation sector)");
  }
  const Eigen::Vector4d half_rates =
      0.5 * Eigen::Vector4d(channels.kappa_a, channels.kappa_b, channels.gamma_c, channels.gamma_d);
  const std::size_t n = step_count(span.length(), options.dt);
  const double h = span.length() / static_cast<double>(n);
  const std::size_t every = sample_stride(h, options.sample_every);

  AmplitudeTrace trace;
  trace.times.push_back(span.start);
  trace.amplitudes.push_back(alpha0);
  Amplitudes x = alpha0;
  AmplitudeDrive d_start = drive(span.start);
  for (std::size_t step = 1; step <= n; ++step) {
    const double t = span.start + static_cast<double>(step - 1) * h;
    const double t_next = span.start + static_cast<double>(step) * h;
    const AmplitudeDrive d_mid = drive(t + h / 2);
    const AmplitudeDrive d_end = drive(t_next);
    const Amplitudes k1 = amplitude_rhs(x, d_start, half_rates);
    const Amplitudes k2 = amplitude_rhs(x + (h / 2) * k1, d_mid, half_rates);
    const Amplitudes k3 = amplitude_rhs(x + (h / 2) * k2, d_mid, half_rates);
    const Amplitudes k4 = amplitude_rhs(x + h * k3, d_end, half_rates);
    x += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    d_start = d_end;
    if (should_sample(step, n, every)) {
      trace.times.push_back(t_next);
      trace.amplitudes.push_back(x);
    }
  }
  return trace;
}

AmplitudeTrace evolve_amplitudes(const Amplitudes& alpha0, const EffectiveCouplings& couplings,
                                 const LindbladChannelSet& channels, TimeSpan span, const EvolveOptions& options) {
  const AmplitudeDrive fixed{couplings, ModeDetunings::Zero()};
  return evolve_amplitudes(alpha0, [&](double) { return fixed; }, channels, span, options);
}

std::pair<double, double> ReducedSpinModel::c_decay_rates() const {
  if (!nu) return {A_cc, A_cc};
  return {A_cc + A_cd * nu->first, A_cc + A_cd * nu->second};
}

std::pair<double, double> ReducedSpinModel::d_decay_rates() const {
  if (!nu) return {A_dd, A_dd};
  return {A_dd + A_dc / nu->first, A_dd + A_dc / nu->second};
}

Eigen::Vector2cd ReducedSpinModel::evaluate(const Eigen::Vector2cd& initial, double t) const {
  if (!nu) {
    return {initial(0) * std::exp(-A_cc * t), initial(1) * std::exp(-A_dd * t)};
  }
  // Normal modes (1, nu_±) decaying at A_cc + A_cd nu_±.
  const auto [np, nm] = *nu;
  const auto [rp, rm] = c_decay_rates();
  const Complex wp = (initial(1) - nm * initial(0)) / (np - nm);
  const Complex wm = initial(0) - wp;
  const Complex ep = wp * std::exp(-rp * t);
  const Complex em = wm * std::exp(-rm * t);
  return {ep + em, np * ep + nm * em};
}

ReducedSpinModel bad_cavity_reduce(const EffectiveCouplings& couplings, const LindbladChannelSet& channels,
                                   double premise_ratio) {
  channels.validate();
  if (!(channels.kappa_a > 0) || !(channels.kappa_b > 0)) {
    throw ValidationError("bad-cavity reduction needs kappa_a > 0 and kappa_b > 0");
  }
  const double g1 = couplings.G1, g2 = couplings.G2, gnv = couplings.Gnv;
  ReducedSpinModel m;
  m.A_cc = 2 * g1 * g1 / channels.kappa_a + 2 * g2 * g2 / channels.kappa_b + channels.gamma_c / 2;
  m.A_dd = 2 * gnv * gnv / channels.kappa_b + channels.gamma_d / 2;
  m.A_cd = 2 * g2 * gnv / channels.kappa_b;
  m.A_dc = m.A_cd;
  if (m.A_cd != 0) {
    const double diff = m.A_dd - m.A_cc;
    const double root = std::sqrt(diff * diff + 4 * m.A_cd * m.A_cd);
    m.nu = std::pair{(diff + root) / (2 * m.A_cd), (diff - root) / (2 * m.A_cd)};
  }
  m.premise_holds = channels.kappa_a >= premise_ratio * std::abs(g1) &&
                    channels.kappa_b >= premise_ratio * std::max(std::abs(g2), std::abs(gnv));
  return m;
}

}  // namespace transducer
