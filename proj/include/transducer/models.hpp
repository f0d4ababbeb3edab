#pragma once

#include "transducer/couplings.hpp"
#include "transducer/hilbert.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace transducer {

/// G1 = -g_o * omega * sqrt(N) / delta_o,  G2 = g_mu * sqrt(N).
EffectiveCouplings build_effective_couplings(double g_o, double omega, double delta_o, double g_mu, double n_spins);

/// Precomputed pieces of H = G1 a†c + G2 b†c + Gnv b†d + h.c. + sum_i delta_i n_i
/// on any register holding a subset of the canonical modes.
class HybridHamiltonian {
 public:
  explicit HybridHamiltonian(const ModeRegister& reg);

  const ModeRegister& reg() const { return reg_; }

  /// Throws ValidationError if a nonzero coefficient refers to a mode the register lacks.
  void check_supported(const EffectiveCouplings& c, const ModeDetunings& detunings) const;

  OperatorMatrix operator()(const EffectiveCouplings& c, const ModeDetunings& detunings) const;

 private:
  ModeRegister reg_;
  std::optional<Matrix> optical_redc_;
  std::optional<Matrix> microwave_redc_;
  std::optional<Matrix> microwave_nv_;
  std::array<std::optional<Matrix>, 4> number_;
};

/// Effective four-mode Hamiltonian; the register must contain a, b, c and d.
OperatorMatrix build_hybrid_hamiltonian(const ModeRegister& reg, const EffectiveCouplings& c,
                                        const ModeDetunings& detunings = ModeDetunings::Zero());

// ---------------------------------------------------------------------------
// Three-level spin model before adiabatic elimination (small N only).

struct FullRedcParams {
  static constexpr std::size_t kMaxSpins = 3;

  std::vector<double> delta_o;   // level |3> detuning per spin
  std::vector<double> delta_mu;  // level |2> detuning per spin
  std::vector<double> omega;     // classical |3><2| drive
  std::vector<double> g_o;       // optical cavity on |1> <-> |3>
  std::vector<double> g_mu;      // microwave cavity on |1> <-> |2>

  std::size_t spins() const { return delta_o.size(); }
  void validate() const;

  static FullRedcParams uniform(std::size_t n, double delta_o, double delta_mu, double omega, double g_o,
                                double g_mu);
};

/// Spin k is labelled "s<k>" (1-based) with local levels |1>,|2>,|3> at indices 0,1,2.
std::string spin_label(std::size_t k);

/// Register [a, b, s1, ..., sN].
ModeRegister make_full_redc_register(std::size_t n_spins, int cavity_dim = 2);

OperatorMatrix build_full_redc_hamiltonian(const FullRedcParams& params, const ModeRegister& reg);

// ---------------------------------------------------------------------------

/// Hybrid optical/microwave eigenmodes of G1 a†c + G2 b†c + h.c.
/// Vectors are coefficient lists over (a, b) or (a, b, c).
struct DarkBrightDecomposition {
  double theta = 0;
  double g_tot = 0;
  Eigen::Vector2d dark;
  Eigen::Vector2d bright;
  Eigen::Vector3d plus;
  Eigen::Vector3d minus;
  double omega_dark = 0;
  double omega_plus = 0;
  double omega_minus = 0;
};

/// theta = atan2(G1, G2).
DarkBrightDecomposition dark_bright_transform(double G1, double G2, double omega_c = 0);

/// REDC and NV ensembles coupled through a far-detuned microwave resonator.
/// Vectors use the (c, d) one-excitation basis.
struct VirtualCouplingModel {
  double delta_mw = 0;
  double g_tot = 0;
  Eigen::Matrix2d effective;
  double energy_dark = 0;
  double energy_bright = 0;
  Eigen::Vector2d dark;
  Eigen::Vector2d bright;
  /// Amplitude of the virtual photon admixture in the bright state.
  double leakage_suppression = 0;
};

VirtualCouplingModel virtual_coupling_reduce(double G2, double Gnv, double delta_mw);

}  // namespace transducer
