#include "nlds/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nlds/error.hpp"

namespace nlds {

using nlohmann::json;

namespace {

template <typename E>
struct EnumName {
  E value;
  const char* name;
};

constexpr EnumName<Reaction::Kind> kReactionNames[] = {
    {Reaction::Kind::zero, "zero"},
    {Reaction::Kind::linear, "linear"},
    {Reaction::Kind::chafee_infante, "chafee_infante"},
    {Reaction::Kind::polynomial, "polynomial"},
};
constexpr EnumName<Diffusion::Kind> kDiffusionNames[] = {
    {Diffusion::Kind::constant, "constant"},
    {Diffusion::Kind::rational, "rational"},
    {Diffusion::Kind::affine, "affine"},
};
constexpr EnumName<Forcing::Kind> kForcingNames[] = {
    {Forcing::Kind::none, "none"},
    {Forcing::Kind::constant, "constant"},
    {Forcing::Kind::separable, "separable"},
};
constexpr EnumName<Functional> kFunctionalNames[] = {
    {Functional::l2_norm_sq, "l2_norm_sq"},
    {Functional::h10_norm, "h10_norm"},
    {Functional::mean_integral, "mean_integral"},
};

template <typename E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_enum(const EnumName<E> (&table)[N], const json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError({field + " must be a string"});
  const auto s = j.get<std::string>();
  for (const auto& e : table) {
    if (s == e.name) return e.value;
  }
  throw ValidationError({field + ": unknown value \"" + s + "\""});
}

/// Rejects keys outside `allowed`.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError({where + " must be an object"});
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) throw ValidationError({where + ": unknown key \"" + k + "\""});
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ValidationError({where + "." + key + " has the wrong type"});
  }
}

json mode_to_json(const Mode& m) {
  return {{"k", m.k}, {"amplitude", m.amplitude}, {"slope", m.slope},
          {"frequency", m.frequency}, {"phase", m.phase}};
}

Mode mode_from_json(const json& j) {
  check_keys(j, "spec.phi.modes[]", {"k", "amplitude", "slope", "frequency", "phase"});
  Mode m;
  read(j, "k", m.k, "mode");
  read(j, "amplitude", m.amplitude, "mode");
  read(j, "slope", m.slope, "mode");
  read(j, "frequency", m.frequency, "mode");
  read(j, "phase", m.phase, "mode");
  return m;
}

}  // namespace

json spec_to_json(const ProblemSpec& s) {
  json modes = json::array();
  for (const auto& m : s.phi.modes) modes.push_back(mode_to_json(m));
  json phi = {{"modes", modes}, {"seed", s.phi.seed}};
  phi["normalize_to"] = s.phi.normalize_to ? json(*s.phi.normalize_to) : json(nullptr);
  return {
      {"lambda", s.lambda},
      {"gamma", s.gamma},
      {"rho", s.rho},
      {"m", s.m},
      {"M", s.M},
      {"c0", s.c0},
      {"f", {{"kind", name_of(kReactionNames, s.f.kind)}, {"coeffs", s.f.coeffs}}},
      {"a", {{"kind", name_of(kDiffusionNames, s.a.kind)}, {"p0", s.a.p0}, {"p1", s.a.p1}}},
      {"l", name_of(kFunctionalNames, s.l)},
      {"phi", phi},
      {"h",
       {{"kind", name_of(kForcingNames, s.h.kind)},
        {"amplitude", s.h.amplitude},
        {"frequency", s.h.frequency}}},
  };
}

ProblemSpec spec_from_json(const json& j) {
  check_keys(j, "spec", {"lambda", "gamma", "rho", "m", "M", "c0", "f", "a", "l", "phi", "h"});
  ProblemSpec s = ProblemSpec::canonical();
  read(j, "lambda", s.lambda, "spec");
  read(j, "gamma", s.gamma, "spec");
  read(j, "rho", s.rho, "spec");
  read(j, "m", s.m, "spec");
  read(j, "M", s.M, "spec");
  read(j, "c0", s.c0, "spec");
  if (auto it = j.find("f"); it != j.end()) {
    check_keys(*it, "spec.f", {"kind", "coeffs"});
    if (it->contains("kind")) s.f.kind = parse_enum(kReactionNames, it->at("kind"), "spec.f.kind");
    s.f.coeffs.clear();
    read(*it, "coeffs", s.f.coeffs, "spec.f");
  }
  if (auto it = j.find("a"); it != j.end()) {
    check_keys(*it, "spec.a", {"kind", "p0", "p1"});
    if (it->contains("kind")) s.a.kind = parse_enum(kDiffusionNames, it->at("kind"), "spec.a.kind");
    read(*it, "p0", s.a.p0, "spec.a");
    read(*it, "p1", s.a.p1, "spec.a");
  }
  if (auto it = j.find("l"); it != j.end()) s.l = parse_enum(kFunctionalNames, *it, "spec.l");
  if (auto it = j.find("phi"); it != j.end()) {
    check_keys(*it, "spec.phi", {"modes", "seed", "normalize_to"});
    InitialProfile p;
    if (auto mi = it->find("modes"); mi != it->end()) {
      if (!mi->is_array()) throw ValidationError({"spec.phi.modes must be an array"});
      for (const auto& m : *mi) p.modes.push_back(mode_from_json(m));
    }
    read(*it, "seed", p.seed, "spec.phi");
    if (auto ni = it->find("normalize_to"); ni != it->end() && !ni->is_null()) {
      double v = 0.0;
      read(*it, "normalize_to", v, "spec.phi");
      p.normalize_to = v;
    }
    s.phi = std::move(p);
  }
  if (auto it = j.find("h"); it != j.end()) {
    check_keys(*it, "spec.h", {"kind", "amplitude", "frequency"});
    Forcing h;
    if (it->contains("kind")) h.kind = parse_enum(kForcingNames, it->at("kind"), "spec.h.kind");
    read(*it, "amplitude", h.amplitude, "spec.h");
    read(*it, "frequency", h.frequency, "spec.h");
    s.h = h;
  }
  return s;
}

json config_to_json(const RunConfig& c) {
  const auto& d = c.spec.disc;
  const auto& p = c.params;
  json params = {
      {"T", p.T},
      {"T_transform", p.T_transform},
      {"record_every", p.record_every},
      {"n_intervals", p.n_intervals},
      {"bundle_size", p.bundle_size},
      {"bundle_amplitude", p.bundle_amplitude},
      {"member_seeds", p.member_seeds},
      {"snap_every", p.snap_every},
      {"segment_samples", p.segment_samples},
      {"window_fraction", p.window_fraction},
      {"tolerance", p.tolerance},
      {"threads", p.threads},
  };
  params["K"] = p.K ? json(*p.K) : json(nullptr);
  return {
      {"schema_version", kSchemaVersion},
      {"seed", c.seed},
      {"out", c.out_dir},
      {"spec", spec_to_json(c.spec)},
      {"discretization",
       {{"dx", 1.0 / (d.n_interior + 1)},
        {"dtau", d.dtau},
        {"dt", d.dt},
        {"ds", d.ds},
        {"dsigma", d.dsigma}}},
      {"params", params},
  };
}

int interior_nodes_for_spacing(double dx) {
  if (!(dx > 0.0 && dx <= 1.0 / 3.0)) throw ValidationError({"dx must lie in (0, 1/3]"});
  const double cells = 1.0 / dx;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * rounded) {
    throw ValidationError({"dx must divide [0, 1] into an integer number of cells"});
  }
  return static_cast<int>(rounded) - 1;
}

RunConfig config_from_json(const json& j) {
  check_keys(j, "config", {"schema_version", "seed", "out", "spec", "discretization", "params"});
  int version = kSchemaVersion;
  read(j, "schema_version", version, "config");
  if (version != kSchemaVersion) {
    throw ValidationError({"unsupported schema_version " + std::to_string(version)});
  }
  RunConfig c;
  read(j, "seed", c.seed, "config");
  read(j, "out", c.out_dir, "config");
  if (auto it = j.find("spec"); it != j.end()) c.spec = spec_from_json(*it);
  if (auto it = j.find("discretization"); it != j.end()) {
    check_keys(*it, "discretization", {"dx", "dtau", "dt", "ds", "dsigma"});
    auto& d = c.spec.disc;
    if (auto dx = it->find("dx"); dx != it->end()) {
      if (!dx->is_number()) throw ValidationError({"discretization.dx has the wrong type"});
      d.n_interior = interior_nodes_for_spacing(dx->get<double>());
    }
    read(*it, "dtau", d.dtau, "discretization");
    read(*it, "dt", d.dt, "discretization");
    read(*it, "ds", d.ds, "discretization");
    read(*it, "dsigma", d.dsigma, "discretization");
  }
  if (auto it = j.find("params"); it != j.end()) {
    check_keys(*it, "params",
               {"T", "T_transform", "record_every", "K", "n_intervals", "bundle_size",
                "bundle_amplitude", "member_seeds", "snap_every", "segment_samples",
                "window_fraction", "tolerance", "threads"});
    auto& p = c.params;
    read(*it, "T", p.T, "params");
    read(*it, "T_transform", p.T_transform, "params");
    read(*it, "record_every", p.record_every, "params");
    if (auto k = it->find("K"); k != it->end() && !k->is_null()) {
      double v = 0.0;
      read(*it, "K", v, "params");
      p.K = v;
    }
    read(*it, "n_intervals", p.n_intervals, "params");
    read(*it, "bundle_size", p.bundle_size, "params");
    read(*it, "bundle_amplitude", p.bundle_amplitude, "params");
    read(*it, "member_seeds", p.member_seeds, "params");
    read(*it, "snap_every", p.snap_every, "params");
    read(*it, "segment_samples", p.segment_samples, "params");
    read(*it, "window_fraction", p.window_fraction, "params");
    read(*it, "tolerance", p.tolerance, "params");
    read(*it, "threads", p.threads, "params");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file", path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
  }
  return config_from_json(j);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.dx) cfg.spec.disc.n_interior = interior_nodes_for_spacing(*o.dx);
  if (o.dtau) cfg.spec.disc.dtau = cfg.spec.disc.dt = *o.dtau;
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
  std::vector<std::string> diag = validate_spec(cfg.spec);
  const auto& p = cfg.params;
  if (!(p.T > 0.0)) diag.push_back("T must be positive");
  if (!(p.T_transform > 0.0)) diag.push_back("T_transform must be positive");
  if (p.record_every < 1) diag.push_back("record_every must be at least 1");
  if (p.K && !(*p.K >= 0.0)) diag.push_back("K must be nonnegative");
  if (p.n_intervals < 1) diag.push_back("n_intervals must be at least 1");
  if (p.bundle_size < 1) diag.push_back("bundle_size must be at least 1");
  if (!(p.bundle_amplitude >= 0.0)) diag.push_back("bundle_amplitude must be nonnegative");
  if (!(p.snap_every > 0.0)) diag.push_back("snap_every must be positive");
  if (p.segment_samples < 2) diag.push_back("segment_samples must be at least 2");
  if (!(p.window_fraction > 0.0 && p.window_fraction < 1.0)) {
    diag.push_back("window_fraction must lie in (0, 1)");
  }
  if (!(p.tolerance > 0.0)) diag.push_back("tolerance must be positive");
  if (p.threads < 0) diag.push_back("threads must be nonnegative");
  return diag;
}

std::string spec_hash(const ProblemSpec& spec) {
  json j = spec_to_json(spec);
  j["disc"] = {{"n_interior", spec.disc.n_interior}, {"dtau", spec.disc.dtau},
               {"dt", spec.disc.dt}, {"ds", spec.disc.ds}, {"dsigma", spec.disc.dsigma}};
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace nlds
