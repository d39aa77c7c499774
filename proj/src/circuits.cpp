#include "magicmps/circuits.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace magicmps {

std::size_t CircuitSpec::gate_count() const {
  std::size_t c = 0;
  for (const auto& layer : layers) c += layer.size();
  return c;
}

namespace {

std::vector<GateOp> random_clifford_layer(std::size_t n, Rng& rng) {
  std::vector<GateOp> layer;
  if (rng.uniform_int(2) == 0) {
    for (std::size_t i = 0; i < n; ++i)
      layer.push_back(GateOp::make(rng.uniform_int(2) == 0 ? GateKind::S : GateKind::H, {i}));
  } else {
    std::size_t offset = rng.uniform_int(2);
    for (std::size_t i = offset; i + 1 < n; i += 2) {
      if (rng.uniform_int(2) == 0) {
        layer.push_back(GateOp::make(GateKind::CZ, {i, i + 1}));
      } else {
        bool control_left = rng.uniform_int(2) == 0;
        layer.push_back(GateOp::make(GateKind::CNOT,
                                     control_left ? std::vector<std::size_t>{i, i + 1}
                                                  : std::vector<std::size_t>{i + 1, i}));
      }
    }
  }
  return layer;
}

}  // namespace

CircuitSpec random_clifford_circuit(std::size_t n, std::size_t depth, std::uint64_t seed) {
  if (n < 2) throw ConfigError("random_clifford_circuit: need n >= 2");
  CircuitSpec c;
  c.n = n;
  c.family = "random-clifford";
  c.seed = seed;
  Rng rng(seed);
  for (std::size_t layer = 0; layer < depth; ++layer)
    c.layers.push_back(random_clifford_layer(n, rng));
  return c;
}

CircuitSpec t_doped_random_circuit(std::size_t n, std::size_t steps, std::uint64_t seed) {
  if (n < 2) throw ConfigError("t_doped_random_circuit: need n >= 2");
  CircuitSpec c;
  c.n = n;
  c.family = "t-doped";
  c.seed = seed;
  Rng rng(seed);
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<GateOp> layer;
    for (std::size_t i = t % 2; i + 1 < n; i += 2) {
      switch (rng.uniform_int(3)) {
        case 0: break;  // identity slot
        case 1: layer.push_back(GateOp::make(GateKind::CNOT, {i, i + 1})); break;
        case 2: layer.push_back(GateOp::make(GateKind::CNOT, {i + 1, i})); break;
      }
    }
    layer.push_back(GateOp::make(GateKind::T, {rng.uniform_int(n)}));
    c.layers.push_back(std::move(layer));
  }
  return c;
}

CircuitSpec scrambling_circuit(std::size_t n, std::size_t n_ccz, std::uint64_t seed) {
  if (n < 3) throw ConfigError("scrambling_circuit: need n >= 3");
  CircuitSpec c;
  c.n = n;
  c.family = "scrambling";
  c.seed = seed;
  Rng rng(seed);
  // each block mixes random local Cliffords with full CZ brickwork on both
  // parities, so the CCZ inputs are generically entangled superpositions
  auto scramble_block = [&] {
    for (std::size_t parity = 0; parity < 2; ++parity) {
      std::vector<GateOp> singles;
      for (std::size_t i = 0; i < n; ++i)
        singles.push_back(GateOp::make(rng.uniform_int(2) == 0 ? GateKind::S : GateKind::H, {i}));
      c.layers.push_back(std::move(singles));
      std::vector<GateOp> cz;
      for (std::size_t i = parity; i + 1 < n; i += 2)
        cz.push_back(GateOp::make(GateKind::CZ, {i, i + 1}));
      c.layers.push_back(std::move(cz));
    }
  };
  scramble_block();
  for (std::size_t j = 0; j < n_ccz; ++j) {
    std::size_t a = rng.uniform_int(n - 2);
    c.layers.push_back({GateOp::make(GateKind::CCZ, {a, a + 1, a + 2})});
    scramble_block();
  }
  return c;
}

CircuitApplyResult apply_circuit(const MatrixProductState& psi, const CircuitSpec& circuit,
                                 const TruncationPolicy& policy) {
  if (psi.n_sites() != circuit.n) throw ConfigError("apply_circuit: size mismatch");
  CircuitApplyResult out;
  out.psi = psi;
  for (const auto& layer : circuit.layers)
    for (const auto& g : layer)
      out.truncation_error += apply_gate_inplace(out.psi, g, policy);
  return out;
}

std::string circuit_to_text(const CircuitSpec& c) {
  std::ostringstream os;
  os << "N=" << c.n << "\n";
  for (std::size_t l = 0; l < c.layers.size(); ++l) {
    if (l > 0) os << "\n";
    for (const auto& g : c.layers[l]) {
      os << gate_name(g.kind);
      for (std::size_t t : g.targets) os << " " << t;
      os << "\n";
    }
  }
  return os.str();
}

CircuitSpec circuit_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  CircuitSpec c;
  bool have_header = false;
  std::vector<GateOp> layer;
  bool layer_open = false;
  while (std::getline(is, line)) {
    // strip comments and whitespace
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) {
      if (layer_open) {
        c.layers.push_back(std::move(layer));
        layer.clear();
        layer_open = false;
      }
      continue;
    }
    if (!have_header) {
      if (tok.rfind("N=", 0) != 0) throw ConfigError("circuit text: expected N=<n> header");
      c.n = std::stoul(tok.substr(2));
      have_header = true;
      continue;
    }
    GateKind kind = gate_kind_from_name(tok);
    std::vector<std::size_t> targets;
    std::size_t t;
    while (ls >> t) targets.push_back(t);
    layer.push_back(GateOp::make(kind, std::move(targets)));
    layer_open = true;
  }
  if (layer_open) c.layers.push_back(std::move(layer));
  if (!have_header) throw ConfigError("circuit text: missing N=<n> header");
  for (const auto& l : c.layers)
    for (const auto& g : l)
      for (std::size_t tt : g.targets)
        if (tt >= c.n) throw ConfigError("circuit text: target out of range");
  return c;
}

std::string circuit_to_json(const CircuitSpec& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["family"] = c.family;
  j["seed"] = c.seed;
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : c.layers) {
    nlohmann::json jl = nlohmann::json::array();
    for (const auto& g : layer) jl.push_back({{"gate", gate_name(g.kind)}, {"targets", g.targets}});
    j["layers"].push_back(jl);
  }
  return j.dump(2);
}

CircuitSpec circuit_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  CircuitSpec c;
  c.n = j.at("n").get<std::size_t>();
  if (j.contains("family")) c.family = j["family"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  for (const auto& jl : j.at("layers")) {
    std::vector<GateOp> layer;
    for (const auto& jg : jl)
      layer.push_back(GateOp::make(gate_kind_from_name(jg.at("gate").get<std::string>()),
                                   jg.at("targets").get<std::vector<std::size_t>>()));
    c.layers.push_back(std::move(layer));
  }
  for (const auto& l : c.layers)
    for (const auto& g : l)
      for (std::size_t tt : g.targets)
        if (tt >= c.n) throw ConfigError("circuit json: target out of range");
  return c;
}

CircuitSpec load_circuit_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open circuit file " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  // JSON or text, decided by the first non-space character
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? circuit_from_json(text) : circuit_from_text(text);
  }
  throw ConfigError("circuit file is empty: " + path);
}

}  // namespace magicmps
