#pragma once

#include "transducer/lindblad.hpp"
#include "transducer/models.hpp"

#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace transducer {

/// amplitude * exp(-(t - center)^2 / width), time in 1/g.
struct GaussianPulse {
  double amplitude = 1;
  double center = 0;
  double width = 1;

  void validate() const;
  double operator()(double t) const;
};

using CouplingValue = std::variant<double, GaussianPulse>;

double evaluate(const CouplingValue& v, double t);

struct ScheduleSegment {
  std::string label;
  double duration = 0;
  CouplingValue G1 = 0.0;
  CouplingValue G2 = 0.0;
  CouplingValue Gnv = 0.0;
  ModeDetunings detunings = ModeDetunings::Zero();
};

/// Piecewise coupling program starting at t = 0. Switching between segments is instantaneous.
class CouplingSchedule {
 public:
  explicit CouplingSchedule(std::vector<ScheduleSegment> segments);

  const std::vector<ScheduleSegment>& segments() const { return segments_; }
  double total_duration() const { return starts_.back() + segments_.back().duration; }
  double segment_start(std::size_t i) const { return starts_[i]; }
  TimeSpan segment_span(std::size_t i) const { return {starts_[i], starts_[i] + segments_[i].duration}; }

  /// Segment active at t in [0, total).
  std::size_t segment_at(double t) const;
  AmplitudeDrive at(double t) const { return at(segment_at(t), t); }
  AmplitudeDrive at(std::size_t segment, double t) const;

  /// Same program played backwards; pulse centres are mirrored.
  CouplingSchedule reversed() const;

 private:
  std::vector<ScheduleSegment> segments_;
  std::vector<double> starts_;
};

/// Three consecutive iSWAPs optical -> REDC -> microwave -> NV.
CouplingSchedule swap_protocol_schedule(const EffectiveCouplings& c);

/// Gaussian G1 pulse against constant G2 with the NV detuned (Gnv = 0) for `total_duration`,
/// optionally followed by a microwave -> NV iSWAP at `swap_Gnv`.
CouplingSchedule adiabatic_schedule(const GaussianPulse& pulse, double G2, double total_duration,
                                    std::optional<double> swap_Gnv = std::nullopt);

/// NV -> microwave partial swap for arcsin|alpha| / Gnv, then iSWAPs microwave -> REDC -> optical.
/// Zero-length segments are dropped.
CouplingSchedule entanglement_schedule(const EffectiveCouplings& c, double alpha);

/// Optical photon start: optical-REDC partial swap leaving amplitude alpha in the cavity
/// (duration arccos|alpha| / |G1|), then iSWAPs REDC -> microwave -> NV.
CouplingSchedule reversed_entanglement_schedule(const EffectiveCouplings& c, double alpha);

/// Two-mode one-excitation block [[1,0,0,0],[0,cos,i sin,0],[0,i sin,cos,0],[0,0,0,1]] with
/// argument g*t. The simulator's exp(-iHt) for H = +g(o_i† o_j + h.c.) equals gate_unitary(-g, t).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 4, 4> gate_unitary(Scalar g, Scalar t) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<std::complex<Scalar>, 4, 4> u = Eigen::Matrix<std::complex<Scalar>, 4, 4>::Identity();
  const Scalar phase = g * t;
  u(1, 1) = u(2, 2) = C(std::cos(phase), 0);
  u(1, 2) = u(2, 1) = C(0, std::sin(phase));
  return u;
}

SimulationTrace simulate_schedule(const DensityMatrix& rho0, const CouplingSchedule& schedule,
                                  const LindbladChannelSet& channels, const EvolveOptions& options = {});

AmplitudeTrace simulate_schedule(const Amplitudes& alpha0, const CouplingSchedule& schedule,
                                 const LindbladChannelSet& channels, const EvolveOptions& options = {});

}  // namespace transducer
