#pragma once

#include <Eigen/Dense>

#include <optional>

namespace transducer {

// Canonical labels of the four-mode transducer.
inline constexpr const char* kOptical = "a";
inline constexpr const char* kMicrowave = "b";
inline constexpr const char* kRedc = "c";
inline constexpr const char* kNv = "d";

/// Inputs from which the optical and microwave collective couplings were derived.
struct CouplingDerivation {
  double g_o = 0;
  double omega = 0;
  double delta_o = 0;
  double g_mu = 0;
  double n_spins = 0;
};

/// Beam-splitter couplings in units of g. G1 is signed; protocols time on |G1|.
struct EffectiveCouplings {
  double G1 = 0;
  double G2 = 0;
  double Gnv = 0;
  std::optional<CouplingDerivation> derived_from;
};

/// Per-mode frequency offsets (a, b, c, d) in units of g.
using ModeDetunings = Eigen::Vector4d;

}  // namespace transducer
