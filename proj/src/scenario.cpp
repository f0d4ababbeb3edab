#include "transducer/scenario.hpp"

#include "transducer/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

namespace transducer {

using nlohmann::json;

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::Free: return "free";
    case ProtocolKind::Swap: return "swap";
    case ProtocolKind::Adiabatic: return "adiabatic";
    case ProtocolKind::Entanglement: return "entanglement";
    case ProtocolKind::EntanglementReversed: return "entanglement_reversed";
  }
  return "unknown";
}

namespace {

const char* const kCanonical[] = {kOptical, kMicrowave, kRedc, kNv};

ProtocolKind protocol_from_string(const std::string& s, const std::string& path) {
  for (auto k : {ProtocolKind::Free, ProtocolKind::Swap, ProtocolKind::Adiabatic, ProtocolKind::Entanglement,
                 ProtocolKind::EntanglementReversed}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError(path + ": unknown protocol '" + s + "'");
}

// Key-path aware view over a JSON node.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }
  const json& raw() const { return node_; }

  void require_object() const {
    if (!node_.is_object()) throw ValidationError((path_.empty() ? "document" : path_) + ": expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    require_object();
    for (const auto& item : node_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || item.key() == k;
      if (!known) throw ValidationError(where(item.key()) + ": unknown key");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

  Reader at(const char* key) const {
    if (!has(key)) throw ValidationError(where(key) + ": missing");
    return {node_.at(key), where(key)};
  }

  double number(const char* key) const {
    const Reader r = at(key);
    if (!r.node_.is_number()) throw ValidationError(r.path_ + ": expected a number");
    return r.node_.get<double>();
  }

  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer(const char* key) const {
    const Reader r = at(key);
    if (!r.node_.is_number_integer()) throw ValidationError(r.path_ + ": expected an integer");
    return r.node_.get<int>();
  }

  std::string string(const char* key) const {
    const Reader r = at(key);
    if (!r.node_.is_string()) throw ValidationError(r.path_ + ": expected a string");
    return r.node_.get<std::string>();
  }

  bool boolean_or(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const Reader r = at(key);
    if (!r.node_.is_boolean()) throw ValidationError(r.path_ + ": expected true or false");
    return r.node_.get<bool>();
  }

 private:
  const json& node_;
  std::string path_;
};

Complex read_amplitude(const Reader& term) {
  const Reader a = term.at("amplitude");
  if (a.raw().is_number()) return {a.raw().get<double>(), 0.0};
  if (a.raw().is_array() && a.raw().size() == 2 && a.raw()[0].is_number() && a.raw()[1].is_number()) {
    return {a.raw()[0].get<double>(), a.raw()[1].get<double>()};
  }
  throw ValidationError(a.path() + ": expected a number or [re, im]");
}

std::map<std::string, int> read_occupations(const Reader& r) {
  r.require_object();
  std::map<std::string, int> occ;
  for (const auto& item : r.raw().items()) {
    if (!item.value().is_number_integer()) throw ValidationError(r.where(item.key()) + ": expected an integer");
    occ[item.key()] = item.value().get<int>();
  }
  return occ;
}

ModeDetunings read_detunings(const Reader& r) {
  r.allow_only({"a", "b", "c", "d"});
  ModeDetunings d = ModeDetunings::Zero();
  for (int i = 0; i < 4; ++i) d(i) = r.number_or(kCanonical[i], 0.0);
  return d;
}

json detunings_json(const ModeDetunings& d) {
  json out = json::object();
  for (int i = 0; i < 4; ++i) {
    if (d(i) != 0) out[kCanonical[i]] = d(i);
  }
  return out;
}

// Re-raise a library validation failure under a config key path.
template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

ScenarioConfig scenario_from_json(const json& doc) {
  const Reader root(doc, "");
  root.allow_only({"name", "register", "couplings", "channels", "initial_state", "protocol", "integrator", "output"});
  ScenarioConfig c;
  if (root.has("name")) c.name = root.string("name");

  if (root.has("register")) {
    const Reader reg = root.at("register");
    if (!reg.raw().is_array() || reg.raw().empty()) throw ValidationError("register: expected a non-empty array");
    c.modes.clear();
    for (std::size_t i = 0; i < reg.raw().size(); ++i) {
      const Reader m(reg.raw()[i], "register[" + std::to_string(i) + "]");
      m.allow_only({"label", "dim"});
      c.modes.emplace_back(m.string("label"), m.integer("dim"));
    }
  }

  {
    const Reader cp = root.at("couplings");
    cp.allow_only({"G1", "G2", "Gnv", "derive"});
    if (cp.has("derive")) {
      if (cp.has("G1") || cp.has("G2")) {
        throw ValidationError("couplings: give either derive or explicit G1/G2, not both");
      }
      const Reader d = cp.at("derive");
      d.allow_only({"g_o", "omega", "delta_o", "g_mu", "N"});
      const double g_o = d.number("g_o"), omega = d.number("omega"), delta_o = d.number("delta_o"),
                   g_mu = d.number("g_mu"), n = d.number("N");
      c.couplings = with_path(d.path(), [&] { return build_effective_couplings(g_o, omega, delta_o, g_mu, n); });
    } else {
      c.couplings.G1 = cp.number_or("G1", 0.0);
      c.couplings.G2 = cp.number_or("G2", 0.0);
    }
    c.couplings.Gnv = cp.number_or("Gnv", 0.0);
  }

  if (root.has("channels")) {
    const Reader ch = root.at("channels");
    ch.allow_only({"kappa_a", "kappa_b", "gamma_c", "gamma_d", "n_th"});
    c.channels.kappa_a = ch.number_or("kappa_a", 0.0);
    c.channels.kappa_b = ch.number_or("kappa_b", 0.0);
    c.channels.gamma_c = ch.number_or("gamma_c", 0.0);
    c.channels.gamma_d = ch.number_or("gamma_d", 0.0);
    c.channels.n_th = ch.number_or("n_th", 0.0);
  }

  {
    const Reader init = root.at("initial_state");
    init.allow_only({"fock", "superposition"});
    if (init.has("fock") == init.has("superposition")) {
      throw ValidationError("initial_state: give exactly one of fock or superposition");
    }
    c.initial.terms.clear();
    if (init.has("fock")) {
      c.initial.terms.push_back({read_occupations(init.at("fock")), 1.0});
    } else {
      const Reader sup = init.at("superposition");
      if (!sup.raw().is_array() || sup.raw().empty()) {
        throw ValidationError(sup.path() + ": expected a non-empty array");
      }
      for (std::size_t i = 0; i < sup.raw().size(); ++i) {
        const Reader term(sup.raw()[i], sup.path() + "[" + std::to_string(i) + "]");
        term.allow_only({"occupations", "amplitude"});
        c.initial.terms.push_back({read_occupations(term.at("occupations")), read_amplitude(term)});
      }
    }
  }

  {
    const Reader p = root.at("protocol");
    p.allow_only({"name", "alpha", "pulse", "duration", "append_swap", "detunings"});
    c.protocol.kind = protocol_from_string(p.string("name"), p.where("name"));
    c.protocol.alpha = p.number_or("alpha", c.protocol.alpha);
    c.protocol.duration = p.number_or("duration", c.protocol.duration);
    c.protocol.append_swap = p.boolean_or("append_swap", c.protocol.append_swap);
    if (p.has("pulse")) {
      const Reader pulse = p.at("pulse");
      pulse.allow_only({"amplitude", "center", "width"});
      c.protocol.pulse = {pulse.number("amplitude"), pulse.number("center"), pulse.number("width")};
    }
    if (p.has("detunings")) c.protocol.detunings = read_detunings(p.at("detunings"));
  }

  if (root.has("integrator")) {
    const Reader in = root.at("integrator");
    in.allow_only({"dt", "sample_every"});
    c.dt = in.number_or("dt", c.dt);
    c.sample_every = in.number_or("sample_every", c.sample_every);
  }

  if (root.has("output")) {
    const Reader out = root.at("output");
    out.allow_only({"g_physical_MHz"});
    if (out.has("g_physical_MHz")) c.g_physical_MHz = out.number("g_physical_MHz");
  }

  c.validate();
  return c;
}

ScenarioConfig parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ValidationError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                          ": " + e.what());
  }
  return scenario_from_json(doc);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

json scenario_to_json(const ScenarioConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["register"] = json::array();
  for (const auto& [label, dim] : c.modes) doc["register"].push_back({{"label", label}, {"dim", dim}});

  json couplings;
  if (c.couplings.derived_from) {
    const auto& d = *c.couplings.derived_from;
    couplings["derive"] = {{"g_o", d.g_o}, {"omega", d.omega}, {"delta_o", d.delta_o}, {"g_mu", d.g_mu},
                           {"N", d.n_spins}};
  } else {
    couplings["G1"] = c.couplings.G1;
    couplings["G2"] = c.couplings.G2;
  }
  couplings["Gnv"] = c.couplings.Gnv;
  doc["couplings"] = couplings;

  doc["channels"] = {{"kappa_a", c.channels.kappa_a}, {"kappa_b", c.channels.kappa_b},
                     {"gamma_c", c.channels.gamma_c}, {"gamma_d", c.channels.gamma_d},
                     {"n_th", c.channels.n_th}};

  if (c.initial.is_fock() && c.initial.terms.front().amplitude == Complex(1.0)) {
    doc["initial_state"] = {{"fock", c.initial.terms.front().occupations}};
  } else {
    json terms = json::array();
    for (const auto& t : c.initial.terms) {
      terms.push_back({{"occupations", t.occupations}, {"amplitude", {t.amplitude.real(), t.amplitude.imag()}}});
    }
    doc["initial_state"] = {{"superposition", terms}};
  }

  json protocol{{"name", to_string(c.protocol.kind)}};
  switch (c.protocol.kind) {
    case ProtocolKind::Adiabatic:
      protocol["pulse"] = {{"amplitude", c.protocol.pulse.amplitude},
                           {"center", c.protocol.pulse.center},
                           {"width", c.protocol.pulse.width}};
      protocol["duration"] = c.protocol.duration;
      protocol["append_swap"] = c.protocol.append_swap;
      break;
    case ProtocolKind::Entanglement:
    case ProtocolKind::EntanglementReversed:
      protocol["alpha"] = c.protocol.alpha;
      break;
    case ProtocolKind::Free:
      protocol["duration"] = c.protocol.duration;
      protocol["detunings"] = detunings_json(c.protocol.detunings);
      break;
    case ProtocolKind::Swap:
      break;
  }
  doc["protocol"] = protocol;
  doc["integrator"] = {{"dt", c.dt}, {"sample_every", c.sample_every}};
  if (c.g_physical_MHz) doc["output"] = {{"g_physical_MHz", *c.g_physical_MHz}};
  return doc;
}

std::string scenario_hash(const ScenarioConfig& config) {
  const std::string text = scenario_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CouplingSchedule ScenarioConfig::schedule() const {
  switch (protocol.kind) {
    case ProtocolKind::Swap:
      return swap_protocol_schedule(couplings);
    case ProtocolKind::Adiabatic:
      return adiabatic_schedule(protocol.pulse, couplings.G2, protocol.duration,
                                protocol.append_swap ? std::optional<double>(couplings.Gnv) : std::nullopt);
    case ProtocolKind::Entanglement:
      return entanglement_schedule(couplings, protocol.alpha);
    case ProtocolKind::EntanglementReversed:
      return reversed_entanglement_schedule(couplings, protocol.alpha);
    case ProtocolKind::Free: {
      ScheduleSegment s;
      s.label = "free evolution";
      s.duration = protocol.duration;
      s.G1 = couplings.G1;
      s.G2 = couplings.G2;
      s.Gnv = couplings.Gnv;
      s.detunings = protocol.detunings;
      return CouplingSchedule({s});
    }
  }
  throw ValidationError("protocol: unsupported kind");
}

DensityMatrix ScenarioConfig::initial_state() const {
  const ModeRegister r = reg();
  std::vector<Amplitude> amplitudes;
  for (std::size_t i = 0; i < initial.terms.size(); ++i) {
    const std::string path = "initial_state term " + std::to_string(i);
    std::vector<int> occ(r.size(), 0);
    for (const auto& [label, n] : initial.terms[i].occupations) {
      if (!r.contains(label)) throw ValidationError(path + ": occupation for undeclared mode '" + label + "'");
      occ[r.index_of(label)] = n;
    }
    with_path(path, [&] { return r.basis_index(occ); });
    amplitudes.push_back({occ, initial.terms[i].amplitude});
  }
  return with_path("initial_state", [&] { return superposition_state(r, amplitudes); });
}

void ScenarioConfig::validate() const {
  std::set<std::string> canonical(std::begin(kCanonical), std::end(kCanonical));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (!canonical.count(modes[i].first)) {
      throw ValidationError("register[" + std::to_string(i) + "].label: must be one of a, b, c, d");
    }
  }
  const ModeRegister r = with_path("register", [&] { return make_register(modes); });

  for (const auto& [key, v] : {std::pair{"G1", couplings.G1}, {"G2", couplings.G2}, {"Gnv", couplings.Gnv}}) {
    if (!std::isfinite(v)) throw ValidationError(std::string("couplings.") + key + ": must be finite");
  }
  for (const auto& [key, v] : {std::pair{"kappa_a", channels.kappa_a}, {"kappa_b", channels.kappa_b},
                               {"gamma_c", channels.gamma_c}, {"gamma_d", channels.gamma_d},
                               {"n_th", channels.n_th}}) {
    if (!std::isfinite(v) || v < 0) throw ValidationError(std::string("channels.") + key + ": must be >= 0");
  }
  if (!(dt > 0) || !std::isfinite(dt)) throw ValidationError("integrator.dt: must be > 0");
  if (!(sample_every >= 0) || !std::isfinite(sample_every)) {
    throw ValidationError("integrator.sample_every: must be >= 0");
  }
  if (g_physical_MHz && !(*g_physical_MHz > 0)) throw ValidationError("output.g_physical_MHz: must be > 0");
  if (protocol.kind == ProtocolKind::Free && !(protocol.duration > 0)) {
    throw ValidationError("protocol.duration: must be > 0");
  }

  const CouplingSchedule sched = with_path("protocol", [&] { return schedule(); });
  const HybridHamiltonian h(r);
  for (std::size_t i = 0; i < sched.segments().size(); ++i) {
    const auto d = sched.at(i, sched.segment_start(i));
    with_path("couplings", [&] {
      h.check_supported(d.couplings, d.detunings);
      return 0;
    });
  }
  initial_state();
}

// ---------------------------------------------------------------------------

std::vector<std::string> preset_names() {
  return {"fig2b", "fig2c", "fig3b", "fig3c", "fig3d", "fig4", "appC-reversed"};
}

namespace {

ScenarioConfig default_baseline(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  // |G1| = 5 G2 = 10 Gnv = g.
  c.couplings.G1 = -1.0;
  c.couplings.G2 = 0.2;
  c.couplings.Gnv = 0.1;
  // kappa_a = 2.5 gamma_c = 10 gamma_nv = 100 kappa_b = 0.1 g
  c.channels = {0.1, 0.001, 0.04, 0.01, 0.0};
  c.g_physical_MHz = 1.0;
  return c;
}

ScenarioConfig adiabatic_baseline(const std::string& name) {
  ScenarioConfig c = default_baseline(name);
  // G2 = 1.5 g = 15 Gnv; G1 follows the pulse.
  c.couplings.G1 = 0.0;
  c.couplings.G2 = 1.5;
  c.couplings.Gnv = 0.1;
  c.protocol.kind = ProtocolKind::Adiabatic;
  c.protocol.pulse = {1.0, 3.0, 15.0};
  c.protocol.duration = 6.0;
  c.protocol.append_swap = true;
  return c;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  if (name == "fig2b" || name == "fig3d") {
    ScenarioConfig c = default_baseline(name);
    c.protocol.kind = ProtocolKind::Swap;
    return c;
  }
  if (name == "fig2c") {
    ScenarioConfig c = default_baseline(name);
    c.protocol.kind = ProtocolKind::Swap;
    const double r = 1 / std::numbers::sqrt2;
    c.initial.terms = {{{{kOptical, 0}}, r}, {{{kOptical, 1}}, r}};
    return c;
  }
  if (name == "fig3b" || name == "fig3c") return adiabatic_baseline(name);
  if (name == "fig4") {
    ScenarioConfig c = default_baseline(name);
    c.protocol.kind = ProtocolKind::Entanglement;
    c.initial.terms = {{{{kNv, 1}}, 1.0}};
    return c;
  }
  if (name == "appC-reversed") {
    ScenarioConfig c = default_baseline(name);
    c.protocol.kind = ProtocolKind::EntanglementReversed;
    return c;
  }
  throw ValidationError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> target_mode(const ScenarioConfig& c) {
  switch (c.protocol.kind) {
    case ProtocolKind::Swap: return std::string(kNv);
    case ProtocolKind::Adiabatic: return std::string(c.protocol.append_swap ? kNv : kMicrowave);
    default: return std::nullopt;
  }
}

std::vector<std::string> fidelity_modes(const ScenarioConfig& c) {
  switch (c.protocol.kind) {
    case ProtocolKind::Entanglement:
    case ProtocolKind::EntanglementReversed: return {kOptical, kNv};
    case ProtocolKind::Free: return {};
    default: return {*target_mode(c)};
  }
}

// Total excitation number of a Fock input, or -1 for a superposition.
int fock_quanta(const InitialStateSpec& initial) {
  if (!initial.is_fock() || std::abs(initial.terms.front().amplitude) != 1.0) return -1;
  int n = 0;
  for (const auto& [label, k] : initial.terms.front().occupations) n += k;
  return n;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  ScenarioResult result;
  result.config = config;
  const ModeRegister reg = config.reg();
  const DensityMatrix rho0 = config.initial_state();
  const CouplingSchedule schedule = config.schedule();

  EvolveOptions options;
  options.dt = config.dt;
  options.sample_every = config.sample_every;
  result.trace = simulate_schedule(rho0, schedule, config.channels, options);
  const SimulationTrace& trace = result.trace;

  for (int i = 0; i < 4; ++i) {
    if (reg.contains(kCanonical[i])) result.populations[i] = mode_population(trace, kCanonical[i]);
  }

  const auto modes = fidelity_modes(config);
  const bool have_modes =
      !modes.empty() && std::all_of(modes.begin(), modes.end(), [&](const auto& m) { return reg.contains(m); });
  if (have_modes) {
    const auto target = target_mode(config);
    const int quanta = fock_quanta(config.initial);
    if (target && quanta >= 0 && quanta < reg.dim(*target)) {
      const ModeRegister sub = reg.subregister({*target});
      result.fidelity = fidelity_series(trace, modes, basis_state(sub, std::vector<int>{quanta}));
    } else {
      EvolveOptions ideal_options = options;
      ideal_options.sample_every = schedule.total_duration();
      const auto lossless = simulate_schedule(rho0, schedule, LindbladChannelSet{}, ideal_options);
      result.fidelity = fidelity_series(trace, modes, partial_trace(lossless.final_state(), modes));
    }
  }
  if (reg.contains(kOptical) && reg.contains(kNv)) {
    try {
      result.concurrence_ad = concurrence_series(trace, kOptical, kNv);
    } catch (const ValidationError&) {
      // Truncation leakage: the column stays empty.
    }
  }

  Summary& s = result.summary;
  s.name = config.name;
  s.hash = scenario_hash(config);
  s.protocol = to_string(config.protocol.kind);
  s.total_duration = schedule.total_duration();
  if (config.g_physical_MHz) s.duration_us = s.total_duration / *config.g_physical_MHz;
  if (result.fidelity) {
    s.peak_fidelity = result.fidelity->peak();
    s.final_fidelity = result.fidelity->final_value();
  }
  if (auto target = target_mode(config); target && reg.contains(*target)) {
    s.efficiency = mode_population(trace, *target).final_value();
  }
  if (result.concurrence_ad) {
    s.final_concurrence = result.concurrence_ad->final_value();
    s.peak_concurrence = result.concurrence_ad->peak();
  }
  if (result.populations[2]) s.max_redc_population = result.populations[2]->peak();
  for (int i = 0; i < 4; ++i) {
    if (result.populations[i]) s.final_populations[i] = result.populations[i]->final_value();
  }

  s.max_trace_error = trace.max_step_trace_error;
  s.min_eigenvalue = std::numeric_limits<double>::infinity();
  double initial_excitations = 0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto d = diagnose(trace.states[k]);
    s.max_hermiticity_error = std::max(s.max_hermiticity_error, d.hermiticity_error);
    s.min_eigenvalue = std::min(s.min_eigenvalue, d.min_eigenvalue);
    double total = 0;
    for (const auto& p : result.populations) {
      if (p) total += p->values[k];
    }
    if (k == 0) initial_excitations = total;
    s.excitation_drift = std::max(s.excitation_drift, std::abs(total - initial_excitations));
  }
  result.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

namespace {

void put_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

}  // namespace

std::string trace_csv(const ScenarioResult& r) {
  std::string out = "t,pop_a,pop_b,pop_c,pop_d,fidelity,concurrence_ad,trace_err\n";
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    put_number(out, r.trace.times[k]);
    for (const auto& p : r.populations) {
      out += ',';
      if (p) put_number(out, p->values[k]);
    }
    out += ',';
    if (r.fidelity) put_number(out, r.fidelity->values[k]);
    out += ',';
    if (r.concurrence_ad) put_number(out, r.concurrence_ad->values[k]);
    out += ',';
    put_number(out, r.trace.trace_errors[k]);
    out += '\n';
  }
  return out;
}

json summary_json(const Summary& s) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json pops = json::object();
  for (int i = 0; i < 4; ++i) pops[kCanonical[i]] = opt(s.final_populations[i]);
  return {{"scenario", s.name},
          {"scenario_hash", s.hash},
          {"protocol", s.protocol},
          {"total_duration", s.total_duration},
          {"total_duration_us", opt(s.duration_us)},
          {"peak_fidelity", opt(s.peak_fidelity)},
          {"final_fidelity", opt(s.final_fidelity)},
          {"efficiency", opt(s.efficiency)},
          {"final_concurrence_ad", opt(s.final_concurrence)},
          {"peak_concurrence_ad", opt(s.peak_concurrence)},
          {"max_pop_c", opt(s.max_redc_population)},
          {"final_populations", pops},
          {"max_trace_error", s.max_trace_error},
          {"max_hermiticity_error", s.max_hermiticity_error},
          {"min_eigenvalue", s.min_eigenvalue},
          {"excitation_drift", s.excitation_drift}};
}

void RunOverrides::apply(ScenarioConfig& config) const {
  if (dt) config.dt = *dt;
  if (sample_every) config.sample_every = *sample_every;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw OutputError("failed to write '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::string file_stem(const std::string& s) {
  std::string out = s;
  for (char& ch : out) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return out;
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  const std::string stem = file_stem(result.config.name);
  const auto trace_path = dir / (stem + "_trace.csv");
  const auto summary_path = dir / (stem + "_summary.json");
  write_file(trace_path, trace_csv(result));
  write_file(summary_path, summary_json(result.summary).dump(2) + "\n");
  return {trace_path, summary_path};
}

namespace {

json* locate(json& doc, const std::string& key_path) {
  json* node = &doc;
  std::stringstream ss(key_path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

}  // namespace

std::vector<ScenarioResult> sweep_results(const json& base, const std::string& key_path,
                                         const std::vector<double>& values, const RunOverrides& overrides) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  const json canonical = scenario_to_json(scenario_from_json(base));
  {
    json probe = canonical;
    const json* node = locate(probe, key_path);
    if (!node || !node->is_number()) {
      throw ValidationError("sweep key '" + key_path + "' does not address a scalar numeric field");
    }
  }

  std::vector<ScenarioConfig> configs;
  for (double v : values) {
    json doc = canonical;
    *locate(doc, key_path) = v;
    ScenarioConfig c = scenario_from_json(doc);
    overrides.apply(c);
    configs.push_back(std::move(c));
  }

  std::vector<std::future<ScenarioResult>> jobs;
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
  }
  std::vector<ScenarioResult> results;
  for (auto& j : jobs) results.push_back(j.get());
  return results;
}

std::vector<SweepRow> sweep(const json& base, const std::string& key_path, const std::vector<double>& values,
                            const RunOverrides& overrides) {
  const auto results = sweep_results(base, key_path, values, overrides);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Summary& s = results[i].summary;
    rows.push_back({values[i], s.peak_fidelity, s.efficiency, s.final_concurrence, results[i].runtime_s});
  }
  return rows;
}

std::string sweep_csv(const std::string& key_path, const std::vector<SweepRow>& rows) {
  std::string out = key_path + ",peak_fidelity,efficiency,final_concurrence,runtime_s\n";
  for (const auto& r : rows) {
    put_number(out, r.value);
    for (const auto& v : {r.peak_fidelity, r.efficiency, r.final_concurrence}) {
      out += ',';
      if (v) put_number(out, *v);
    }
    out += ',';
    put_number(out, r.runtime_s);
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> run_preset(const std::string& name, const std::filesystem::path& out_dir,
                                              const RunOverrides& overrides) {
  ScenarioConfig config = preset(name);
  overrides.apply(config);
  auto files = write_outputs(run_scenario(config), out_dir);
  if (name == "fig3c" || name == "fig3d") {
    const std::string key = "channels.gamma_c";
    const auto rows = sweep(scenario_to_json(config), key, {0.01, 0.04, 0.1, 0.2}, overrides);
    const auto path = out_dir / (file_stem(name) + "_sweep_gamma_c.csv");
    write_file(path, sweep_csv(key, rows));
    files.push_back(path);
  }
  return files;
}

std::vector<std::filesystem::path> run_config(const std::filesystem::path& config_path,
                                              const std::filesystem::path& out_dir, const RunOverrides& overrides) {
  ScenarioConfig config = load_scenario(config_path);
  overrides.apply(config);
  return write_outputs(run_scenario(config), out_dir);
}

std::filesystem::path run_sweep(const std::filesystem::path& config_path, const std::string& key_path,
                                const std::vector<double>& values, const std::filesystem::path& out_dir,
                                const RunOverrides& overrides) {
  const ScenarioConfig base = load_scenario(config_path);
  const auto rows = sweep(scenario_to_json(base), key_path, values, overrides);
  ensure_dir(out_dir);
  std::string key_stem = key_path;
  std::replace(key_stem.begin(), key_stem.end(), '.', '_');
  const auto path = out_dir / (file_stem(base.name) + "_sweep_" + file_stem(key_stem) + ".csv");
  write_file(path, sweep_csv(key_path, rows));
  return path;
}

}  // namespace transducer
