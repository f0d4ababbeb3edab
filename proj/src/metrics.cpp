#include "transducer/metrics.hpp"

#include "transducer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace transducer {

double MetricSeries::peak() const {
  if (values.empty()) throw ValidationError("empty metric series");
  return *std::max_element(values.begin(), values.end());
}

double clamp_unit(double value, const char* what, std::size_t index) {
  constexpr double kSlack = 1e-9;
  if (!(value >= -kSlack && value <= 1 + kSlack)) {
    throw NumericalError(std::string(what) + " out of [0, 1]: " + std::to_string(value), index);
  }
  return std::clamp(value, 0.0, 1.0);
}

namespace {

double occupation(const ModeRegister& reg, const Matrix& rho, const std::string& mode) {
  const Matrix reduced = partial_trace(reg, rho, {mode});
  double n = 0;
  for (Eigen::Index k = 0; k < reduced.rows(); ++k) n += static_cast<double>(k) * reduced(k, k).real();
  return n;
}

int amplitude_slot(const std::string& mode) {
  for (int i = 0; const char* l : {kOptical, kMicrowave, kRedc, kNv}) {
    if (mode == l) return i;
    ++i;
  }
  throw ValidationError("unknown mode label '" + mode + "'");
}

}  // namespace

MetricSeries mode_population(const SimulationTrace& trace, const std::string& mode) {
  const int dim = trace.reg.dim(mode);
  MetricSeries s{MetricKind::Population, {mode}, trace.times, {}};
  s.values.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    double n = occupation(trace.reg, trace.states[i], mode);
    if (dim == 2) {
      n = clamp_unit(n, "population", i);
    } else if (n < -1e-9) {
      throw NumericalError("negative population " + std::to_string(n), i);
    } else {
      n = std::max(n, 0.0);
    }
    s.values.push_back(n);
  }
  return s;
}

MetricSeries mode_population(const AmplitudeTrace& trace, const std::string& mode) {
  const int slot = amplitude_slot(mode);
  MetricSeries s{MetricKind::Population, {mode}, trace.times, {}};
  s.values.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    s.values.push_back(clamp_unit(std::norm(trace.amplitudes[i](slot)), "population", i));
  }
  return s;
}

namespace {

double fidelity_raw(const Matrix& rho, const Matrix& ideal) {
  const Matrix product = hermitian_sqrt(ideal) * hermitian_sqrt(rho);
  Eigen::JacobiSVD<Matrix> svd(product);
  const double trace_norm = svd.singularValues().sum();
  return trace_norm * trace_norm;
}

}  // namespace

double transfer_fidelity(const DensityMatrix& rho, const DensityMatrix& ideal) {
  if (rho.dim() != ideal.dim()) throw ValidationError("fidelity between states of different dimension");
  return clamp_unit(fidelity_raw(rho.matrix(), ideal.matrix()), "fidelity");
}

MetricSeries fidelity_series(const SimulationTrace& trace, const std::vector<std::string>& modes,
                             const DensityMatrix& ideal) {
  const ModeRegister sub = trace.reg.subregister(modes);
  if (sub.dimension() != ideal.dim()) throw ValidationError("ideal state does not match the selected modes");
  MetricSeries s{MetricKind::Fidelity, {}, trace.times, {}};
  for (const auto& m : sub.modes()) s.modes.push_back(m.label);
  s.values.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Matrix reduced = partial_trace(trace.reg, trace.states[i], modes);
    s.values.push_back(clamp_unit(fidelity_raw(reduced, ideal.matrix()), "fidelity", i));
  }
  return s;
}

namespace {

// Two-qubit block of a two-mode reduced state, renormalised.
Matrix qubit_block(const ModeRegister& pair, const Matrix& reduced) {
  const int d1 = pair.modes()[0].dim, d2 = pair.modes()[1].dim;
  Matrix block(4, 4);
  const Eigen::Index idx[4] = {0, 1, d2, d2 + 1};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) block(i, j) = reduced(idx[i], idx[j]);
  }
  if (d1 > 2 || d2 > 2) {
    const double inside = block.trace().real();
    const double leakage = reduced.trace().real() - inside;
    if (leakage > 1e-6) {
      throw ValidationError("state leaks " + std::to_string(leakage) + " outside the two-qubit subspace");
    }
    block /= inside;
  }
  return block;
}

double wootters(const Matrix& rho) {
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  // With rho = W W†, the decreasing lambda_i are the singular values of W^T (Y⊗Y) W.
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2);
  const double floor = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, es.eigenvalues().maxCoeff());
  Matrix w = es.eigenvectors();
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double p = es.eigenvalues()(k);
    w.col(k) *= p > floor ? std::sqrt(p) : 0.0;
  }
  const Matrix tau = w.transpose() * yy * w;
  const Eigen::VectorXd lambda = Eigen::JacobiSVD<Matrix>(tau).singularValues();
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

double concurrence_raw(const ModeRegister& reg, const Matrix& rho, const std::string& first,
                       const std::string& second) {
  if (first == second) throw ValidationError("concurrence needs two distinct modes");
  const std::vector<std::string> keep{first, second};
  const ModeRegister pair = reg.subregister(keep);
  return wootters(qubit_block(pair, partial_trace(reg, rho, keep)));
}

}  // namespace

double concurrence(const DensityMatrix& rho, const std::string& first, const std::string& second) {
  return clamp_unit(concurrence_raw(rho.reg(), rho.matrix(), first, second), "concurrence");
}

MetricSeries concurrence_series(const SimulationTrace& trace, const std::string& first, const std::string& second) {
  MetricSeries s{MetricKind::Concurrence, {first, second}, trace.times, {}};
  s.values.reserve(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    s.values.push_back(clamp_unit(concurrence_raw(trace.reg, trace.states[i], first, second), "concurrence", i));
  }
  return s;
}

double heralded_rate(double attempt_rate, double p_det) {
  if (!(p_det >= 0 && p_det <= 1)) throw ValidationError("detection probability must lie in [0, 1]");
  if (!(attempt_rate >= 0)) throw ValidationError("attempt rate must be >= 0");
  return attempt_rate * p_det;
}

}  // namespace transducer
