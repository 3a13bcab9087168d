#include "p14/cli/config.hpp"

#include "p14/state_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

namespace p14::cli {

namespace {

using nlohmann::json;

// Typed access to one JSON object; finish() rejects keys that were never read.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("'" + key + "' must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) fail("'" + key + "' must contain finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  HalfInteger half(const std::string& key) {
    const double d = number(key);
    try {
      return HalfInteger::from_double(d);
    } catch (const std::domain_error&) {
      fail("'" + key + "' must be a non-negative half-integer");
    }
  }
  HalfInteger half(const std::string& key, HalfInteger fallback) { return has(key) ? half(key) : fallback; }

  std::string child(const std::string& key) const { return path_ + "." + key; }

  void forbid(const std::string& key, const std::string& why) {
    if (has(key)) fail("'" + key + "' " + why);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

AxisSpec read_axis(const json& j, const std::string& path, bool spatial) {
  ObjectReader r(j, path);
  AxisSpec a;
  if (spatial && r.has("direction")) a.direction = static_cast<int>(r.integer("direction"));
  const long long points = r.integer("points");
  if (points < 0) r.fail("'points' must be non-negative");
  a.points = static_cast<std::size_t>(points);
  a.extent = r.number("extent");
  r.finish();
  return a;
}

MomentumGrid read_grid(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const json& spatial = r.raw("spatial");
  if (!spatial.is_array()) r.fail("'spatial' must be an array");
  std::vector<AxisSpec> axes;
  for (std::size_t k = 0; k < spatial.size(); ++k) {
    axes.push_back(read_axis(spatial[k], r.child("spatial[" + std::to_string(k) + "]"), true));
  }
  const AxisSpec mass = read_axis(r.raw("mass"), r.child("mass"), false);
  r.finish();
  try {
    return make_grid(std::move(axes), mass);
  } catch (const std::domain_error& e) {
    r.fail(e.what());
  }
}

IrrepLabel read_label(ObjectReader& r) {
  const std::string cls = r.string("class", "");
  if (cls == "I") {
    r.forbid("eta", "is not used by class I");
    r.forbid("l0", "is not used by class I");
    r.forbid("l1", "is not used by class I");
    const double kappa = r.number("kappa");
    if (!(kappa > 0.0)) r.fail("'kappa' must be positive");
    return ClassI{kappa, r.half("s", HalfInteger{}), r.half("I", HalfInteger{})};
  }
  if (cls == "II") {
    for (const char* k : {"kappa", "eta", "I", "l0", "l1"}) r.forbid(k, "is not used by class II");
    return ClassII{r.half("s", HalfInteger{})};
  }
  if (cls == "III") {
    for (const char* k : {"kappa", "s", "I"}) r.forbid(k, "is not used by class III");
    const double eta = r.number("eta");
    if (!(eta > 0.0)) r.fail("'eta' must be positive");
    const HalfInteger l0 = r.half("l0", HalfInteger{});
    Complex l1{0.0, 0.0};
    if (r.has("l1")) {
      const auto v = r.numbers("l1");
      if (v.size() != 2) r.fail("'l1' must be [re, im]");
      l1 = {v[0], v[1]};
    }
    const LabelVerdict verdict = validate_class3_label(eta, l0.value(), l1);
    if (!verdict.valid) r.fail("invalid class III label: " + verdict.reason);
    return ClassIII{eta, l0, l1};
  }
  if (cls.empty()) r.fail("missing required key 'class'");
  r.fail("'class' must be one of I, II, III (class IV has no propagation equation)");
}

PacketConfig read_packet(const json& j, const std::string& path, const MomentumGrid& grid, int components) {
  ObjectReader r(j, path);
  PacketConfig p;
  const std::string kind = r.string("kind", "position");
  if (kind == "position") p.kind = PacketConfig::Kind::Position;
  else if (kind == "momentum") p.kind = PacketConfig::Kind::Momentum;
  else r.fail("'kind' must be 'position' or 'momentum'");

  const std::size_t rank = grid.rank();
  auto per_axis = [&](const std::string& key, std::vector<double> fallback) {
    if (!r.has(key)) return fallback;
    auto v = r.numbers(key);
    if (v.size() != rank) r.fail("'" + key + "' needs " + std::to_string(rank) + " entries (spatial axes, then mass)");
    return v;
  };
  std::vector<double> centers(rank);
  for (std::size_t a = 0; a < rank; ++a) centers[a] = grid.center(a);
  p.center = per_axis("center", centers);
  if (!r.has("width")) r.fail("missing required key 'width'");
  p.width = per_axis("width", {});
  for (double w : p.width) {
    if (w < 0.0) r.fail("'width' entries must be non-negative");
  }
  p.momentum = per_axis("momentum", std::vector<double>(rank, 0.0));

  const std::string block = r.string("block", "particle");
  if (block == "particle") p.block = PacketConfig::Block::Particle;
  else if (block == "antiparticle") p.block = PacketConfig::Block::Antiparticle;
  else if (block == "both") p.block = PacketConfig::Block::Both;
  else r.fail("'block' must be 'particle', 'antiparticle' or 'both'");

  if (r.has("component")) {
    const long long c = r.integer("component");
    if (c < 0 || c >= components) r.fail("'component' out of range 0.." + std::to_string(components - 1));
    p.component = static_cast<int>(c);
  }
  p.noise = r.number("noise", 0.0);
  if (p.noise < 0.0) r.fail("'noise' must be non-negative");
  r.finish();
  return p;
}

const char* block_name(PacketConfig::Block b) {
  switch (b) {
    case PacketConfig::Block::Particle: return "particle";
    case PacketConfig::Block::Antiparticle: return "antiparticle";
    case PacketConfig::Block::Both: return "both";
  }
  return "particle";
}

// Displacement x - c folded into [-L/2, L/2).
double periodic_offset(double x, double c, double extent) {
  double d = std::fmod(x - c, extent);
  if (d < -0.5 * extent) d += extent;
  if (d >= 0.5 * extent) d -= extent;
  return d;
}

std::size_t nearest_site(const MomentumGrid& grid, std::size_t a, double x) {
  const double n = static_cast<double>(grid.axis(a).points);
  double k = std::round(x / grid.dx(a));
  k = std::fmod(k, n);
  if (k < 0) k += n;
  return static_cast<std::size_t>(k);
}

std::size_t nearest_mode(const MomentumGrid& grid, std::size_t a, double p) {
  const auto n = static_cast<long long>(grid.axis(a).points);
  const auto freq = static_cast<long long>(std::llround(p / grid.dp(a)));
  if (freq < -n / 2 || freq >= n / 2) {
    throw ConfigError("packet momentum " + std::to_string(p) + " lies outside the lattice on axis " +
                      std::to_string(a));
  }
  return static_cast<std::size_t>(freq < 0 ? freq + n : freq);
}

// Uniform on [-1, 1) from raw 64-bit output, independent of <random> distributions.
double uniform_pm1(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

}  // namespace

std::pair<HalfInteger, HalfInteger> RunConfig::internal_spins() const {
  if (const auto* c1 = std::get_if<ClassI>(&label)) return {c1->s, c1->isospin};
  if (const auto* c2 = std::get_if<ClassII>(&label)) return {c2->s, HalfInteger{}};
  return {HalfInteger{}, HalfInteger{}};
}

RunConfig parse_run_config(const json& j, Command command) {
  ObjectReader r(j, "config");
  IrrepLabel label = read_label(r);
  MomentumGrid grid = read_grid(r.raw("grid"), r.child("grid"));

  RunConfig cfg{label, grid, {}, {}, SubthresholdPolicy::ProjectOut, 0.0, 0, std::nullopt};
  const auto [s, iso] = cfg.internal_spins();
  cfg.packet = read_packet(r.raw("packet"), r.child("packet"), grid, s.multiplicity() * iso.multiplicity());

  if (command == Command::Evolve || r.has("times")) {
    cfg.times = r.numbers("times");
    if (cfg.times.empty()) r.fail("'times' must not be empty");
  }
  const std::string policy = r.string("policy", "project-out");
  if (policy == "project-out") cfg.policy = SubthresholdPolicy::ProjectOut;
  else if (policy == "reject") cfg.policy = SubthresholdPolicy::Reject;
  else r.fail("'policy' must be 'project-out' or 'reject'");
  cfg.reject_tolerance = r.number("reject_tolerance", 0.0);
  if (cfg.reject_tolerance < 0.0) r.fail("'reject_tolerance' must be non-negative");
  if (r.has("seed")) {
    const long long seed = r.integer("seed");
    if (seed < 0) r.fail("'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (command == Command::Spectrum || r.has("bins")) {
    const long long bins = r.integer("bins");
    if (bins < 1) r.fail("'bins' must be at least 1");
    MassBins mb;
    mb.count = static_cast<std::size_t>(bins);
    if (r.has("m_range")) {
      const auto range = r.numbers("m_range");
      if (range.size() != 2 || !(range[0] < range[1])) r.fail("'m_range' must be [lower, upper] with lower < upper");
      mb.lower = range[0];
      mb.upper = range[1];
    }
    cfg.bins = mb;
  } else if (r.has("m_range")) {
    r.fail("'m_range' requires 'bins'");
  }
  r.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, Command command) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(j, command);
}

nlohmann::ordered_json to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["label"] = label_to_json(config.label);
  j["grid"] = grid_to_json(config.grid);
  const PacketConfig& p = config.packet;
  j["packet"] = {{"kind", p.kind == PacketConfig::Kind::Position ? "position" : "momentum"},
                 {"center", p.center},
                 {"width", p.width},
                 {"momentum", p.momentum},
                 {"block", block_name(p.block)},
                 {"component", p.component},
                 {"noise", p.noise}};
  j["times"] = config.times;
  j["policy"] = config.policy == SubthresholdPolicy::ProjectOut ? "project-out" : "reject";
  j["reject_tolerance"] = config.reject_tolerance;
  j["seed"] = config.seed;
  if (config.bins) {
    j["bins"] = config.bins->count;
    if (config.bins->lower) j["m_range"] = {*config.bins->lower, *config.bins->upper};
  }
  return j;
}

WaveFunction build_initial_state(const RunConfig& config) {
  const MomentumGrid& grid = config.grid;
  const PacketConfig& p = config.packet;
  const auto [s, iso] = config.internal_spins();
  const bool in_position = p.kind == PacketConfig::Kind::Position;
  WaveFunction psi(grid, s, iso, in_position ? Representation::Position : Representation::Momentum);

  const std::size_t rank = grid.rank();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXcd shape = Eigen::VectorXcd::Ones(n);
  for (std::size_t a = 0; a < rank; ++a) {
    const double width = p.width[a];
    if (width == 0.0) {
      const std::size_t target =
          in_position ? nearest_site(grid, a, p.center[a]) : nearest_mode(grid, a, p.momentum[a]);
      for (Eigen::Index f = 0; f < n; ++f) {
        if (grid.coordinate(static_cast<std::size_t>(f), a) != target) shape[f] = 0.0;
      }
      if (!in_position) {
        const double phase = -grid.momentum(a, target) * p.center[a];
        shape *= std::polar(1.0, phase);
      }
      continue;
    }
    for (Eigen::Index f = 0; f < n; ++f) {
      const std::size_t k = grid.coordinate(static_cast<std::size_t>(f), a);
      if (in_position) {
        const double x = grid.position(a, k);
        const double d = periodic_offset(x, p.center[a], grid.axis(a).extent);
        shape[f] *= std::polar(std::exp(-d * d / (4.0 * width * width)), p.momentum[a] * x);
      } else {
        const double q = grid.momentum(a, k);
        const double d = q - p.momentum[a];
        shape[f] *= std::polar(std::exp(-d * d / (4.0 * width * width)), -q * p.center[a]);
      }
    }
  }

  std::vector<int> blocks;
  if (p.block != PacketConfig::Block::Antiparticle) blocks.push_back(0);
  if (p.block != PacketConfig::Block::Particle) blocks.push_back(1);
  std::mt19937_64 rng(config.seed);
  for (int b : blocks) {
    auto ch = psi.channel(b, p.component);
    ch = shape;
    if (p.noise > 0.0) {
      for (Eigen::Index f = 0; f < n; ++f) {
        const double re = uniform_pm1(rng);
        const double im = uniform_pm1(rng);
        ch[f] += p.noise * Complex(re, im);
      }
    }
  }
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ConfigError("initial packet has zero norm on this grid");
  psi.data() /= norm;
  return in_position ? to_momentum(psi) : psi;
}

}  // namespace p14::cli
