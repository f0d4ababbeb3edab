#include "transducer/models.hpp"

#include "transducer/errors.hpp"

#include <cmath>

namespace transducer {

EffectiveCouplings build_effective_couplings(double g_o, double omega, double delta_o, double g_mu, double n_spins) {
  if (delta_o == 0) throw ValidationError("optical detuning delta_o must be nonzero");
  if (!(n_spins >= 1)) throw ValidationError("spin number N must be >= 1");
  EffectiveCouplings c;
  c.G1 = -g_o * omega * std::sqrt(n_spins) / delta_o;
  c.G2 = g_mu * std::sqrt(n_spins);
  c.derived_from = CouplingDerivation{g_o, omega, delta_o, g_mu, n_spins};
  return c;
}

namespace {

std::optional<Matrix> hop(const ModeRegister& reg, const char* to, const char* from) {
  if (!reg.contains(to) || !reg.contains(from)) return std::nullopt;
  const Matrix up = annihilation_op(reg, to).matrix().adjoint();
  const Matrix down = annihilation_op(reg, from).matrix();
  const Matrix term = up * down;
  return Matrix(term + term.adjoint());
}

}  // namespace

HybridHamiltonian::HybridHamiltonian(const ModeRegister& reg)
    : reg_(reg),
      optical_redc_(hop(reg, kOptical, kRedc)),
      microwave_redc_(hop(reg, kMicrowave, kRedc)),
      microwave_nv_(hop(reg, kMicrowave, kNv)) {
  const char* labels[] = {kOptical, kMicrowave, kRedc, kNv};
  for (int i = 0; i < 4; ++i) {
    if (reg.contains(labels[i])) number_[i] = number_op(reg, labels[i]).matrix();
  }
}

void HybridHamiltonian::check_supported(const EffectiveCouplings& c, const ModeDetunings& detunings) const {
  if (c.G1 != 0 && !optical_redc_) throw ValidationError("G1 needs modes a and c in the register");
  if (c.G2 != 0 && !microwave_redc_) throw ValidationError("G2 needs modes b and c in the register");
  if (c.Gnv != 0 && !microwave_nv_) throw ValidationError("Gnv needs modes b and d in the register");
  const char* labels[] = {kOptical, kMicrowave, kRedc, kNv};
  for (int i = 0; i < 4; ++i) {
    if (detunings(i) != 0 && !number_[i]) {
      throw ValidationError(std::string("detuning given for absent mode '") + labels[i] + "'");
    }
  }
}

OperatorMatrix HybridHamiltonian::operator()(const EffectiveCouplings& c, const ModeDetunings& detunings) const {
  check_supported(c, detunings);
  Matrix h = Matrix::Zero(reg_.dimension(), reg_.dimension());
  if (optical_redc_ && c.G1 != 0) h += c.G1 * *optical_redc_;
  if (microwave_redc_ && c.G2 != 0) h += c.G2 * *microwave_redc_;
  if (microwave_nv_ && c.Gnv != 0) h += c.Gnv * *microwave_nv_;
  for (int i = 0; i < 4; ++i) {
    if (number_[i] && detunings(i) != 0) h += detunings(i) * *number_[i];
  }
  return {reg_, std::move(h)};
}

OperatorMatrix build_hybrid_hamiltonian(const ModeRegister& reg, const EffectiveCouplings& c,
                                        const ModeDetunings& detunings) {
  for (const char* l : {kOptical, kMicrowave, kRedc, kNv}) {
    if (!reg.contains(l)) throw ValidationError(std::string("register is missing canonical mode '") + l + "'");
  }
  return HybridHamiltonian(reg)(c, detunings);
}

void FullRedcParams::validate() const {
  const std::size_t n = delta_o.size();
  if (n == 0) throw ValidationError("full REDC model needs at least one spin");
  if (n > kMaxSpins) throw ValidationError("full REDC model supports at most 3 spins");
  if (delta_mu.size() != n || omega.size() != n || g_o.size() != n || g_mu.size() != n) {
    throw ValidationError("per-spin parameter lists have different lengths");
  }
}

FullRedcParams FullRedcParams::uniform(std::size_t n, double delta_o, double delta_mu, double omega, double g_o,
                                       double g_mu) {
  return {std::vector<double>(n, delta_o), std::vector<double>(n, delta_mu), std::vector<double>(n, omega),
          std::vector<double>(n, g_o), std::vector<double>(n, g_mu)};
}

std::string spin_label(std::size_t k) { return "s" + std::to_string(k); }

ModeRegister make_full_redc_register(std::size_t n_spins, int cavity_dim) {
  if (n_spins == 0 || n_spins > FullRedcParams::kMaxSpins) {
    throw ValidationError("full REDC model supports 1 to 3 spins");
  }
  std::vector<std::pair<std::string, int>> specs{{kOptical, cavity_dim}, {kMicrowave, cavity_dim}};
  for (std::size_t k = 1; k <= n_spins; ++k) specs.emplace_back(spin_label(k), 3);
  return make_register(specs);
}

OperatorMatrix build_full_redc_hamiltonian(const FullRedcParams& params, const ModeRegister& reg) {
  params.validate();
  const Matrix a = annihilation_op(reg, kOptical).matrix();
  const Matrix b = annihilation_op(reg, kMicrowave).matrix();
  auto ket_bra = [](int m, int n) {
    Matrix p = Matrix::Zero(3, 3);
    p(m, n) = 1.0;
    return p;
  };
  // Levels |1>, |2>, |3> sit at local indices 0, 1, 2.
  const Matrix p33 = ket_bra(2, 2), p22 = ket_bra(1, 1), s32 = ket_bra(2, 1), s21 = ket_bra(1, 0),
               s31 = ket_bra(2, 0);

  Matrix h = Matrix::Zero(reg.dimension(), reg.dimension());
  for (std::size_t k = 0; k < params.spins(); ++k) {
    const std::string label = spin_label(k + 1);
    if (reg.dim(label) != 3) throw ValidationError("spin '" + label + "' must have three levels");
    auto local = [&](const Matrix& m) { return local_operator(reg, label, m).matrix(); };
    h += params.delta_o[k] * local(p33) + params.delta_mu[k] * local(p22);
    const Matrix drive = params.omega[k] * local(s32);
    const Matrix cavity = params.g_mu[k] * b * local(s21) + params.g_o[k] * a * local(s31);
    h += drive + drive.adjoint() + cavity + cavity.adjoint();
  }
  return {reg, std::move(h)};
}

DarkBrightDecomposition dark_bright_transform(double G1, double G2, double omega_c) {
  if (G1 == 0 && G2 == 0) throw ValidationError("dark/bright transform needs a nonzero coupling");
  DarkBrightDecomposition d;
  d.theta = std::atan2(G1, G2);
  d.g_tot = std::hypot(G1, G2);
  const double s = std::sin(d.theta), c = std::cos(d.theta);
  d.bright = {s, c};
  d.dark = {-c, s};
  const double r = 1 / std::sqrt(2.0);
  d.plus = {r * s, r * c, r};
  d.minus = {r * s, r * c, -r};
  d.omega_dark = omega_c;
  d.omega_plus = omega_c + d.g_tot;
  d.omega_minus = omega_c - d.g_tot;
  return d;
}

VirtualCouplingModel virtual_coupling_reduce(double G2, double Gnv, double delta_mw) {
  if (delta_mw == 0) throw ValidationError("microwave detuning must be nonzero");
  VirtualCouplingModel m;
  m.delta_mw = delta_mw;
  m.g_tot = std::hypot(G2, Gnv);
  // Second-order elimination of the detuned photon shifts the bright state down by G_tot^2/delta.
  m.effective << G2 * G2, G2 * Gnv, G2 * Gnv, Gnv * Gnv;
  m.effective *= -1 / delta_mw;
  m.energy_dark = 0;
  m.energy_bright = -m.g_tot * m.g_tot / delta_mw;
  if (m.g_tot > 0) {
    m.dark = Eigen::Vector2d(-Gnv, G2) / m.g_tot;
    m.bright = Eigen::Vector2d(G2, Gnv) / m.g_tot;
  } else {
    m.dark = {0, 1};
    m.bright = {1, 0};
  }
  m.leakage_suppression = m.g_tot / std::abs(delta_mw);
  return m;
}

}  // namespace transducer
