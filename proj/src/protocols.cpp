#include "transducer/protocols.hpp"

#include "transducer/errors.hpp"

#include <algorithm>
#include <cmath>

namespace transducer {

using std::numbers::pi;

void GaussianPulse::validate() const {
  if (!(width > 0) || !std::isfinite(width)) throw ValidationError("pulse width must be > 0");
  if (!std::isfinite(amplitude) || !std::isfinite(center)) throw ValidationError("pulse parameters must be finite");
}

double GaussianPulse::operator()(double t) const {
  const double x = t - center;
  return amplitude * std::exp(-x * x / width);
}

double evaluate(const CouplingValue& v, double t) {
  return std::visit(
      [t](const auto& value) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(value)>, double>) {
          return value;
        } else {
          return value(t);
        }
      },
      v);
}

namespace {
void validate_value(const CouplingValue& v, const std::string& what) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) throw ValidationError(what + " must be finite");
  } else {
    std::get<GaussianPulse>(v).validate();
  }
}
}  // namespace

CouplingSchedule::CouplingSchedule(std::vector<ScheduleSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("schedule needs at least one segment");
  double t = 0;
  for (const auto& s : segments_) {
    if (!(s.duration > 0) || !std::isfinite(s.duration)) {
      throw ValidationError("segment '" + s.label + "' must have a positive finite duration");
    }
    validate_value(s.G1, s.label + ".G1");
    validate_value(s.G2, s.label + ".G2");
    validate_value(s.Gnv, s.label + ".Gnv");
    if (!s.detunings.allFinite()) throw ValidationError("segment '" + s.label + "' has non-finite detunings");
    starts_.push_back(t);
    t += s.duration;
  }
}

std::size_t CouplingSchedule::segment_at(double t) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  if (it == starts_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(starts_.begin(), it) - 1);
}

AmplitudeDrive CouplingSchedule::at(std::size_t segment, double t) const {
  const auto& s = segments_.at(segment);
  AmplitudeDrive d;
  d.couplings.G1 = evaluate(s.G1, t);
  d.couplings.G2 = evaluate(s.G2, t);
  d.couplings.Gnv = evaluate(s.Gnv, t);
  d.detunings = s.detunings;
  return d;
}

CouplingSchedule CouplingSchedule::reversed() const {
  const double total = total_duration();
  auto mirror = [total](CouplingValue v) {
    if (auto* p = std::get_if<GaussianPulse>(&v)) p->center = total - p->center;
    return v;
  };
  std::vector<ScheduleSegment> out(segments_.rbegin(), segments_.rend());
  for (auto& s : out) {
    s.G1 = mirror(s.G1);
    s.G2 = mirror(s.G2);
    s.Gnv = mirror(s.Gnv);
  }
  return CouplingSchedule(std::move(out));
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0)) throw ValidationError(std::string(name) + " must be nonzero for this protocol");
}

ScheduleSegment swap_segment(std::string label, double duration, double g1, double g2, double gnv) {
  ScheduleSegment s;
  s.label = std::move(label);
  s.duration = duration;
  s.G1 = g1;
  s.G2 = g2;
  s.Gnv = gnv;
  return s;
}

void require_alpha(double alpha) {
  if (!(std::abs(alpha) <= 1)) throw ValidationError("|alpha| must be <= 1");
}

}  // namespace

CouplingSchedule swap_protocol_schedule(const EffectiveCouplings& c) {
  require_positive(std::abs(c.G1), "G1");
  require_positive(std::abs(c.G2), "G2");
  require_positive(std::abs(c.Gnv), "Gnv");
  return CouplingSchedule({
      swap_segment("optical-redc", pi / (2 * std::abs(c.G1)), c.G1, 0, 0),
      swap_segment("redc-microwave", pi / (2 * std::abs(c.G2)), 0, c.G2, 0),
      swap_segment("microwave-nv", pi / (2 * std::abs(c.Gnv)), 0, 0, c.Gnv),
  });
}

CouplingSchedule adiabatic_schedule(const GaussianPulse& pulse, double G2, double total_duration,
                                    std::optional<double> swap_Gnv) {
  pulse.validate();
  if (!(G2 > 0)) throw ValidationError("adiabatic protocol needs G2 > 0");
  if (!(total_duration > 0)) throw ValidationError("adiabatic duration must be > 0");
  ScheduleSegment passage;
  passage.label = "dark-state passage";
  passage.duration = total_duration;
  passage.G1 = pulse;
  passage.G2 = G2;
  std::vector<ScheduleSegment> segments{passage};
  if (swap_Gnv) {
    require_positive(std::abs(*swap_Gnv), "Gnv");
    segments.push_back(swap_segment("microwave-nv", pi / (2 * std::abs(*swap_Gnv)), 0, 0, *swap_Gnv));
  }
  return CouplingSchedule(std::move(segments));
}

CouplingSchedule entanglement_schedule(const EffectiveCouplings& c, double alpha) {
  require_alpha(alpha);
  require_positive(std::abs(c.G1), "G1");
  require_positive(std::abs(c.G2), "G2");
  require_positive(std::abs(c.Gnv), "Gnv");
  std::vector<ScheduleSegment> segments;
  const double t_alpha = std::asin(std::abs(alpha)) / std::abs(c.Gnv);
  if (t_alpha > 0) segments.push_back(swap_segment("nv-microwave partial", t_alpha, 0, 0, c.Gnv));
  segments.push_back(swap_segment("microwave-redc", pi / (2 * std::abs(c.G2)), 0, c.G2, 0));
  segments.push_back(swap_segment("redc-optical", pi / (2 * std::abs(c.G1)), c.G1, 0, 0));
  return CouplingSchedule(std::move(segments));
}

CouplingSchedule reversed_entanglement_schedule(const EffectiveCouplings& c, double alpha) {
  require_alpha(alpha);
  require_positive(std::abs(c.G1), "G1");
  require_positive(std::abs(c.G2), "G2");
  require_positive(std::abs(c.Gnv), "Gnv");
  std::vector<ScheduleSegment> segments;
  const double t_alpha = std::acos(std::abs(alpha)) / std::abs(c.G1);
  if (t_alpha > 0) segments.push_back(swap_segment("optical-redc partial", t_alpha, c.G1, 0, 0));
  segments.push_back(swap_segment("redc-microwave", pi / (2 * std::abs(c.G2)), 0, c.G2, 0));
  segments.push_back(swap_segment("microwave-nv", pi / (2 * std::abs(c.Gnv)), 0, 0, c.Gnv));
  return CouplingSchedule(std::move(segments));
}

SimulationTrace simulate_schedule(const DensityMatrix& rho0, const CouplingSchedule& schedule,
                                  const LindbladChannelSet& channels, const EvolveOptions& options) {
  const HybridHamiltonian hamiltonian(rho0.reg());
  SimulationTrace out;
  DensityMatrix rho = rho0;
  for (std::size_t i = 0; i < schedule.segments().size(); ++i) {
    auto supplier = [&, i](double t) {
      const auto d = schedule.at(i, t);
      return hamiltonian(d.couplings, d.detunings);
    };
    auto part = evolve_master(rho, supplier, channels, schedule.segment_span(i), options);
    if (i + 1 < schedule.segments().size()) rho = part.final_state();
    out.extend(part);
  }
  return out;
}

AmplitudeTrace simulate_schedule(const Amplitudes& alpha0, const CouplingSchedule& schedule,
                                 const LindbladChannelSet& channels, const EvolveOptions& options) {
  AmplitudeTrace out;
  Amplitudes x = alpha0;
  for (std::size_t i = 0; i < schedule.segments().size(); ++i) {
    auto part = evolve_amplitudes(x, [&, i](double t) { return schedule.at(i, t); }, channels,
                                  schedule.segment_span(i), options);
    x = part.amplitudes.back();
    out.extend(part);
  }
  return out;
}

}  // namespace transducer
