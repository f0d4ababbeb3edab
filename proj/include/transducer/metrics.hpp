#pragma once

#include "transducer/lindblad.hpp"

#include <string>
#include <vector>

namespace transducer {

enum class MetricKind { Population, Fidelity, Concurrence };

struct MetricSeries {
  MetricKind kind = MetricKind::Population;
  std::vector<std::string> modes;
  std::vector<double> times;
  std::vector<double> values;

  double peak() const;
  double final_value() const { return values.back(); }
};

/// Values in [-1e-9, 0) or (1, 1 + 1e-9] are clamped into [0, 1]; anything further
/// out raises NumericalError carrying `index`.
double clamp_unit(double value, const char* what, std::size_t index = 0);

/// Mean occupation <n> of one mode at every sample.
MetricSeries mode_population(const SimulationTrace& trace, const std::string& mode);
MetricSeries mode_population(const AmplitudeTrace& trace, const std::string& mode);

/// Uhlmann fidelity (Tr sqrt(sqrt(ideal) rho sqrt(ideal)))^2, evaluated as the squared
/// trace norm of sqrt(ideal) sqrt(rho).
double transfer_fidelity(const DensityMatrix& rho, const DensityMatrix& ideal);

MetricSeries fidelity_series(const SimulationTrace& trace, const std::vector<std::string>& modes,
                             const DensityMatrix& ideal);

/// Wootters concurrence of the reduced state of two modes. Modes with dim > 2 are
/// projected onto their {0, 1} subspace; more than 1e-6 probability outside it is an error.
double concurrence(const DensityMatrix& rho, const std::string& first, const std::string& second);

MetricSeries concurrence_series(const SimulationTrace& trace, const std::string& first, const std::string& second);

/// Single-click heralding: attempt_rate * p_det.
double heralded_rate(double attempt_rate, double p_det);

}  // namespace transducer
