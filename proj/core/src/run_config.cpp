#include "levyif/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "levyif/errors.hpp"

namespace levyif {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double get_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double get_positive(const ordered_json& j, const std::string& path) {
  const double v = get_number(j, path);
  if (!std::isfinite(v) || v <= 0.0) fail(path, "must be finite and > 0");
  return v;
}

std::uint64_t get_count(const ordered_json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

/// Scalar or length-n array of numbers.
Vec get_broadcast(const ordered_json& j, std::size_t n,
                  const std::string& path) {
  Vec out;
  if (j.is_number()) {
    out.assign(n, j.get<double>());
  } else if (j.is_array()) {
    if (j.size() != n) fail(path, "expected a scalar or an array of length n");
    for (const auto& v : j) {
      if (!v.is_number()) fail(path, "expected numbers");
      out.push_back(v.get<double>());
    }
  } else {
    fail(path, "expected a scalar or an array");
  }
  return out;
}

Vec get_vector(const ordered_json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vec out;
  for (const auto& v : j) {
    if (!v.is_number()) fail(path, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void reject_unknown_keys(const ordered_json& j, const std::string& path,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(path + "." + key, "unknown key");
  }
}

}  // namespace

ordered_json distribution_to_json(const Distribution& d) {
  switch (d.kind()) {
    case DistKind::Constant:
      return {{"type", "constant"}, {"value", d.param_a()}};
    case DistKind::Uniform:
      return {{"type", "uniform"}, {"a", d.param_a()}, {"b", d.param_b()}};
    case DistKind::Exponential:
      return {{"type", "exponential"}, {"mean", d.param_a()}};
    case DistKind::LogNormal:
      return {{"type", "lognormal"}, {"mu", d.param_a()},
              {"sigma2", d.param_b()}};
  }
  return {};
}

Distribution distribution_from_json(const ordered_json& j,
                                    const std::string& path) {
  if (j.is_number())  // shorthand: a bare number means a constant law
    return Distribution::constant(j.get<double>());
  if (!j.is_object() || !j.contains("type"))
    fail(path, "expected a distribution object with a \"type\"");
  const std::string type = j["type"].get<std::string>();

  Distribution d = Distribution::constant(1.0);
  if (type == "constant") {
    reject_unknown_keys(j, path, {"type", "value"});
    if (!j.contains("value")) fail(path, "constant law needs \"value\"");
    d = Distribution::constant(get_number(j["value"], path + ".value"));
  } else if (type == "uniform") {
    reject_unknown_keys(j, path, {"type", "a", "b"});
    if (!j.contains("a") || !j.contains("b"))
      fail(path, "uniform law needs \"a\" and \"b\"");
    d = Distribution::uniform(get_number(j["a"], path + ".a"),
                              get_number(j["b"], path + ".b"));
  } else if (type == "exponential") {
    reject_unknown_keys(j, path, {"type", "mean"});
    if (!j.contains("mean")) fail(path, "exponential law needs \"mean\"");
    d = Distribution::exponential(get_number(j["mean"], path + ".mean"));
  } else if (type == "lognormal") {
    reject_unknown_keys(j, path, {"type", "mu", "sigma2"});
    if (!j.contains("mu") || !j.contains("sigma2"))
      fail(path, "lognormal law needs \"mu\" and \"sigma2\"");
    d = Distribution::lognormal(get_number(j["mu"], path + ".mu"),
                                get_number(j["sigma2"], path + ".sigma2"));
  } else {
    fail(path + ".type", "unknown distribution name \"" + type + "\"");
  }
  try {
    d.validate();
  } catch (const ParameterError& e) {
    fail(path, e.what());
  }
  return d;
}

namespace {

NetworkConfig parse_network(const ordered_json& j) {
  if (!j.is_object()) fail("network", "expected an object");
  reject_unknown_keys(j, "network",
                      {"symmetric", "neurons", "signal_laws",
                       "max_spikes_per_neuron"});

  NetworkConfig cfg;

  if (j.contains("symmetric")) {
    if (j.contains("neurons") || j.contains("signal_laws"))
      fail("network", "give either \"symmetric\" or explicit "
                      "\"neurons\"+\"signal_laws\", not both");
    const auto& s = j["symmetric"];
    reject_unknown_keys(s, "network.symmetric",
                        {"n", "H", "w", "nu", "sigma", "jump_rate",
                         "jump_law"});
    for (const char* key : {"n", "H", "w", "nu"})
      if (!s.contains(key))
        fail("network.symmetric", std::string("missing \"") + key + "\"");

    const auto n = std::size_t(get_count(s["n"], "network.symmetric.n"));
    if (n == 0) fail("network.symmetric.n", "must be >= 1");
    const Vec h = get_broadcast(s["H"], n, "network.symmetric.H");
    const Vec w = get_broadcast(s["w"], n, "network.symmetric.w");
    const double nu = get_positive(s["nu"], "network.symmetric.nu");
    const double sigma =
        s.contains("sigma") ? get_number(s["sigma"], "network.symmetric.sigma")
                            : 0.0;
    if (!std::isfinite(sigma) || sigma < 0.0)
      fail("network.symmetric.sigma", "must be finite and >= 0");
    const double jump_rate =
        s.contains("jump_rate")
            ? get_number(s["jump_rate"], "network.symmetric.jump_rate")
            : 0.0;
    std::optional<Distribution> jump_law;
    if (s.contains("jump_law") && !s["jump_law"].is_null())
      jump_law =
          distribution_from_json(s["jump_law"], "network.symmetric.jump_law");

    for (std::size_t i = 0; i < n; ++i) {
      if (!(w[i] > 0.0))
        fail("network.symmetric.w[" + std::to_string(i + 1) + "]",
             "must be > 0");
      if (!(h[i] > w[i]))
        fail("network.symmetric.H[" + std::to_string(i + 1) + "]",
             "H must exceed w (self-signal mean above cross-signal mean)");
    }
    try {
      cfg = NetworkConfig::symmetric(n, h, w, nu, sigma, jump_rate, jump_law);
    } catch (const ParameterError& e) {
      fail("network.symmetric", e.what());
    }
  } else {
    if (!j.contains("neurons") || !j.contains("signal_laws"))
      fail("network", "needs \"symmetric\" or \"neurons\"+\"signal_laws\"");
    const auto& neurons = j["neurons"];
    if (!neurons.is_array() || neurons.empty())
      fail("network.neurons", "expected a nonempty array");
    const std::size_t n = neurons.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::string path = "network.neurons[" + std::to_string(i + 1) + "]";
      const auto& spec = neurons[i];
      reject_unknown_keys(spec, path, {"nu", "sigma", "jump_rate", "jump_law"});
      LevySpec ls;
      if (!spec.contains("nu")) fail(path, "missing \"nu\"");
      ls.nu = get_positive(spec["nu"], path + ".nu");
      ls.sigma = spec.contains("sigma")
                     ? get_number(spec["sigma"], path + ".sigma")
                     : 0.0;
      ls.jump_rate = spec.contains("jump_rate")
                         ? get_number(spec["jump_rate"], path + ".jump_rate")
                         : 0.0;
      if (spec.contains("jump_law") && !spec["jump_law"].is_null())
        ls.jump_law =
            distribution_from_json(spec["jump_law"], path + ".jump_law");
      try {
        ls.validate();
      } catch (const ParameterError& e) {
        fail(path, e.what());
      }
      cfg.specs.push_back(ls);
    }

    const auto& laws = j["signal_laws"];
    if (!laws.is_array() || laws.size() != n)
      fail("network.signal_laws", "expected an n x n array of laws");
    cfg.signal_laws.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!laws[i].is_array() || laws[i].size() != n)
        fail("network.signal_laws[" + std::to_string(i + 1) + "]",
             "expected a row of n laws");
      for (std::size_t k = 0; k < n; ++k) {
        std::ostringstream path;
        path << "network.signal_laws[" << i + 1 << "][" << k + 1 << "]";
        cfg.signal_laws[i].push_back(
            distribution_from_json(laws[i][k], path.str()));
      }
    }
  }

  if (j.contains("max_spikes_per_neuron"))
    cfg.max_spikes_per_neuron = std::size_t(
        get_count(j["max_spikes_per_neuron"], "network.max_spikes_per_neuron"));

  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    fail("network", e.what());
  }
  return cfg;
}

}  // namespace

Vec RunConfig::initial_state() const {
  if (sim.z0) return *sim.z0;
  return Vec(network.n(), 1.0);
}

Vec RunConfig::fluid_phi0() const {
  if (fluid.phi0) return *fluid.phi0;
  return Vec(network.n(), 1.0 / double(network.n()));
}

RunConfig parse_config(const ordered_json& doc) {
  if (!doc.is_object()) fail("$", "config document must be a JSON object");
  reject_unknown_keys(doc, "$",
                      {"network", "sim", "fluid", "verify", "outputs"});
  if (!doc.contains("network")) fail("$", "missing \"network\"");

  RunConfig cfg;
  cfg.network = parse_network(doc["network"]);
  const std::size_t n = cfg.network.n();

  if (!doc.contains("sim") || !doc["sim"].is_object())
    fail("$", "missing \"sim\" section");
  const auto& sim = doc["sim"];
  reject_unknown_keys(sim, "sim",
                      {"horizon", "dt", "replicas", "seed", "sample_stride",
                       "z0"});
  if (!sim.contains("seed"))
    fail("sim.seed", "a seed is mandatory; runs never draw ambient entropy");
  cfg.sim.seed = get_count(sim["seed"], "sim.seed");
  if (sim.contains("horizon"))
    cfg.sim.horizon = get_positive(sim["horizon"], "sim.horizon");
  if (sim.contains("dt")) cfg.sim.dt = get_positive(sim["dt"], "sim.dt");
  if (cfg.sim.horizon < cfg.sim.dt) fail("sim.horizon", "must be >= dt");
  if (sim.contains("replicas")) {
    cfg.sim.replicas = get_count(sim["replicas"], "sim.replicas");
    if (cfg.sim.replicas == 0) fail("sim.replicas", "must be >= 1");
  }
  if (sim.contains("sample_stride"))
    cfg.sim.sample_stride = get_count(sim["sample_stride"], "sim.sample_stride");
  if (sim.contains("z0")) {
    Vec z0 = get_vector(sim["z0"], "sim.z0");
    if (z0.size() != n) fail("sim.z0", "length must equal the neuron count");
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(z0[i]) || z0[i] < 0.0)
        fail("sim.z0[" + std::to_string(i + 1) + "]", "must be >= 0");
    cfg.sim.z0 = std::move(z0);
  }

  if (doc.contains("fluid")) {
    const auto& fl = doc["fluid"];
    reject_unknown_keys(fl, "fluid", {"phi0", "horizon"});
    if (fl.contains("phi0")) {
      Vec phi0 = get_vector(fl["phi0"], "fluid.phi0");
      if (phi0.size() != n)
        fail("fluid.phi0", "length must equal the neuron count");
      for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(phi0[i]) || phi0[i] < 0.0)
          fail("fluid.phi0[" + std::to_string(i + 1) + "]", "must be >= 0");
      cfg.fluid.phi0 = std::move(phi0);
    }
    if (fl.contains("horizon"))
      cfg.fluid.horizon = get_positive(fl["horizon"], "fluid.horizon");
  }

  if (doc.contains("verify")) {
    if (!doc["verify"].is_object()) fail("verify", "expected an object");
    cfg.verify = doc["verify"];
  }

  if (doc.contains("outputs")) {
    const auto& out = doc["outputs"];
    reject_unknown_keys(out, "outputs", {"dir", "format"});
    if (out.contains("dir")) cfg.outputs.dir = out["dir"].get<std::string>();
    if (out.contains("format")) {
      cfg.outputs.format = out["format"].get<std::string>();
      if (cfg.outputs.format != "json" && cfg.outputs.format != "csv")
        fail("outputs.format", "expected \"json\" or \"csv\"");
    }
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ordered_json RunConfig::to_json() const {
  ordered_json net;
  if (network.preset) {
    // the shorthand is kept on output so round-trips preserve the preset
    const auto& spec = network.specs.front();
    ordered_json sym{{"n", network.n()},
                     {"H", network.preset->h},
                     {"w", network.preset->w},
                     {"nu", network.preset->nu},
                     {"sigma", spec.sigma},
                     {"jump_rate", spec.jump_rate}};
    sym["jump_law"] =
        spec.jump_law ? distribution_to_json(*spec.jump_law) : ordered_json();
    net["symmetric"] = std::move(sym);
  } else {
    ordered_json neurons = ordered_json::array();
    for (const auto& spec : network.specs) {
      ordered_json s{{"nu", spec.nu},
                     {"sigma", spec.sigma},
                     {"jump_rate", spec.jump_rate}};
      s["jump_law"] = spec.jump_law ? distribution_to_json(*spec.jump_law)
                                    : ordered_json();
      neurons.push_back(std::move(s));
    }
    net["neurons"] = std::move(neurons);
    ordered_json laws = ordered_json::array();
    for (const auto& row : network.signal_laws) {
      ordered_json r = ordered_json::array();
      for (const auto& law : row) r.push_back(distribution_to_json(law));
      laws.push_back(std::move(r));
    }
    net["signal_laws"] = std::move(laws);
  }
  net["max_spikes_per_neuron"] = network.max_spikes_per_neuron;

  ordered_json simj{{"horizon", sim.horizon},
                    {"dt", sim.dt},
                    {"replicas", sim.replicas},
                    {"seed", sim.seed},
                    {"sample_stride", sim.sample_stride},
                    {"z0", initial_state()}};

  ordered_json fluidj{{"phi0", fluid_phi0()}, {"horizon", fluid.horizon}};

  return ordered_json{{"network", std::move(net)},
                      {"sim", std::move(simj)},
                      {"fluid", std::move(fluidj)},
                      {"verify", verify.is_null() ? ordered_json::object()
                                                  : verify},
                      {"outputs", ordered_json{{"dir", outputs.dir},
                                               {"format", outputs.format}}}};
}

}  // namespace levyif
