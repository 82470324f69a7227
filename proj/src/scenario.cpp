#include "mqht/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "mqht/chernoff.hpp"
#include "mqht/error.hpp"
#include "mqht/random.hpp"

namespace mqht {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(std::string_view origin, const std::string& path, const std::string& message) {
  throw Error(ErrorKind::ParseError, std::string(origin) + ": " + path + ": " + message);
}

struct Field {
  const json& node;
  std::string path;
  std::string_view origin;

  Field at(const std::string& key) const {
    if (!node.is_object() || !node.contains(key)) schema_error(origin, path, "missing field \"" + key + "\"");
    return Field{node.at(key), path + "." + key, origin};
  }
  Field at(std::size_t index) const { return Field{node.at(index), path + "[" + std::to_string(index) + "]", origin}; }

  const json& array() const {
    if (!node.is_array()) schema_error(origin, path, "expected an array");
    return node;
  }
  double number() const {
    if (!node.is_number()) schema_error(origin, path, "expected a number");
    return node.get<double>();
  }
  std::uint64_t unsigned_integer() const {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer() && node.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(node.get<std::int64_t>());
    schema_error(origin, path, "expected a non-negative integer");
  }
  Complex complex() const {
    if (!node.is_array() || node.size() != 2) schema_error(origin, path, "expected a [re, im] pair");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }
};

const char* const kStateKinds[] = {"matrix", "pure", "classical", "random", "mix"};

DensityMatrix parse_state(const Field& spec, std::size_t dim, const std::vector<DensityMatrix>& earlier);

DensityMatrix resolve_reference(const Field& ref, std::size_t dim, const std::vector<DensityMatrix>& earlier) {
  if (ref.node.is_object()) return parse_state(ref, dim, earlier);
  const std::uint64_t index = ref.unsigned_integer();
  if (index < 1 || index > earlier.size()) {
    schema_error(ref.origin, ref.path, "state index " + std::to_string(index) + " must refer to an earlier state (1.." +
                                           std::to_string(earlier.size()) + ")");
  }
  return earlier[index - 1];
}

DensityMatrix parse_state(const Field& spec, std::size_t dim, const std::vector<DensityMatrix>& earlier) {
  if (!spec.node.is_object()) schema_error(spec.origin, spec.path, "expected a state object");
  std::string kind;
  for (const char* candidate : kStateKinds) {
    if (spec.node.contains(candidate)) {
      if (!kind.empty()) schema_error(spec.origin, spec.path, "state spec has both \"" + kind + "\" and \"" + candidate + "\"");
      kind = candidate;
    }
  }
  if (kind.empty()) schema_error(spec.origin, spec.path, "expected one of matrix, pure, classical, random, mix");
  if (spec.node.size() != 1) schema_error(spec.origin, spec.path, "unexpected extra keys next to \"" + kind + "\"");
  const Field body = spec.at(kind);

  if (kind == "matrix") {
    const json& rows = body.array();
    if (rows.size() != dim) schema_error(spec.origin, body.path, "expected " + std::to_string(dim) + " rows");
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < dim; ++i) {
      const Field row = body.at(i);
      if (row.array().size() != dim) schema_error(spec.origin, row.path, "expected " + std::to_string(dim) + " entries");
      for (std::size_t j = 0; j < dim; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(j).complex();
    }
    return density_from_matrix(std::move(m));
  }
  if (kind == "pure") {
    if (body.array().size() != dim) schema_error(spec.origin, body.path, "expected " + std::to_string(dim) + " amplitudes");
    std::vector<Complex> v;
    for (std::size_t i = 0; i < dim; ++i) v.push_back(body.at(i).complex());
    return pure_state(v);
  }
  if (kind == "classical") {
    if (body.array().size() != dim) schema_error(spec.origin, body.path, "expected " + std::to_string(dim) + " probabilities");
    std::vector<double> p;
    for (std::size_t i = 0; i < dim; ++i) p.push_back(body.at(i).number());
    return classical_state(p);
  }
  if (kind == "random") {
    const std::uint64_t seed = body.at("seed").unsigned_integer();
    std::uint64_t rank = dim;
    if (body.node.contains("rank")) rank = body.at("rank").unsigned_integer();
    if (rank < 1 || rank > dim) schema_error(spec.origin, body.path + ".rank", "rank must lie in 1.." + std::to_string(dim));
    return random_density(dim, rank, seed);
  }
  // mix
  const DensityMatrix base = resolve_reference(body.at("base"), dim, earlier);
  const DensityMatrix other = resolve_reference(body.at("other"), dim, earlier);
  const double epsilon = body.at("epsilon").number();
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) schema_error(spec.origin, body.path + ".epsilon", "epsilon must lie in [0, 1]");
  return mix(base, other, epsilon);
}

}  // namespace

Scenario scenario_from_json(const json& doc, std::string_view origin) {
  const Field root{doc, "$", origin};
  if (!doc.is_object()) schema_error(origin, "$", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "version" && key != "dim" && key != "states" && key != "labels" && key != "generator") {
      schema_error(origin, "$." + key, "unknown field");
    }
  }
  const std::uint64_t version = root.at("version").unsigned_integer();
  if (version != kScenarioVersion) {
    schema_error(origin, "$.version", "unsupported version " + std::to_string(version));
  }
  const std::uint64_t dim = root.at("dim").unsigned_integer();
  if (dim < 1) schema_error(origin, "$.dim", "dimension must be >= 1");
  const Field states = root.at("states");
  std::vector<DensityMatrix> parsed;
  for (std::size_t k = 0; k < states.array().size(); ++k) {
    const Field spec = states.at(k);
    try {
      parsed.push_back(parse_state(spec, dim, parsed));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) throw;
      throw Error(e.kind(), std::string(origin) + ": " + spec.path + ": " + e.what());
    }
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const Field labels_field = root.at("labels");
    for (std::size_t k = 0; k < labels_field.array().size(); ++k) {
      const Field label = labels_field.at(k);
      if (!label.node.is_string()) schema_error(origin, label.path, "expected a string");
      labels.push_back(label.node.get<std::string>());
    }
  }
  return Scenario{static_cast<int>(version), dim, Ensemble(std::move(parsed), std::move(labels))};
}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ParseError, std::string(origin) + ":" + std::to_string(line) + ":" +
                                           std::to_string(column) + ": malformed JSON");
  }
  return scenario_from_json(doc, origin);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path.string());
}

std::string dump_scenario(const json& doc) { return doc.dump(2) + "\n"; }

std::optional<GenKind> parse_gen_kind(std::string_view text) {
  if (text == "condition-satisfying") return GenKind::ConditionSatisfying;
  if (text == "equidistant-classical") return GenKind::EquidistantClassical;
  if (text == "random") return GenKind::Random;
  return std::nullopt;
}

std::string_view to_string(GenKind kind) {
  switch (kind) {
    case GenKind::ConditionSatisfying: return "condition-satisfying";
    case GenKind::EquidistantClassical: return "equidistant-classical";
    case GenKind::Random: return "random";
  }
  return "unknown";
}

namespace {

json random_spec(std::size_t rank, std::uint64_t seed) { return json{{"random", {{"rank", rank}, {"seed", seed}}}}; }

json labels_for(std::size_t r) {
  json labels = json::array();
  for (std::size_t k = 1; k <= r; ++k) labels.push_back("rho" + std::to_string(k));
  return labels;
}

std::vector<double> peaked_distribution(std::size_t d, std::size_t peak, double q) {
  std::vector<double> p(d, (1.0 - q) / static_cast<double>(d - 1));
  p[peak] = q;
  return p;
}

json generate_condition_satisfying(const GenParams& params) {
  const std::size_t d = params.d;
  SplitMix64 seeds(params.seed);
  const std::uint64_t seed_rho1 = seeds.next();
  const std::uint64_t seed_sigma = seeds.next();
  std::vector<std::uint64_t> seed_rest;
  for (std::size_t k = 2; k < params.r; ++k) seed_rest.push_back(seeds.next());

  const DensityMatrix rho1 = random_density(d, d, seed_rho1);
  const DensityMatrix sigma = random_density(d, d, seed_sigma);
  std::vector<DensityMatrix> rest;
  for (std::uint64_t s : seed_rest) rest.push_back(random_density(d, d, s));

  struct Probe {
    bool satisfied = false;
    double xi12 = 0.0;
    double target = 0.0;  // 0.9 * xi_bar12 / 6
  };
  auto probe = [&](double epsilon) {
    std::vector<DensityMatrix> states{rho1, mix(rho1, sigma, epsilon)};
    states.insert(states.end(), rest.begin(), rest.end());
    Probe p;
    try {
      const PairwiseChernoff table(Ensemble(std::move(states)));
      p.xi12 = table.xi(0, 1);
      p.target = 0.9 * xi_bar(table, 0, 1) / 6.0;
      p.satisfied = p.xi12 > 0.0 && p.xi12 <= p.target;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DistinctnessViolation) throw;
    }
    return p;
  };

  double lo = 0.0;
  double hi = 1.0;
  const Probe at_one = probe(1.0);
  if (at_one.satisfied) {
    lo = 1.0;
  } else {
    for (int step = 0; step < kCalibrationSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      const Probe p = probe(mid);
      if (p.satisfied) {
        lo = mid;
        // Inside [0.5, 1] of the target: close pair, but decay still visible.
        if (p.xi12 >= 0.5 * p.target) break;
      } else {
        hi = mid;
      }
    }
  }
  if (lo == 0.0) {
    throw Error(ErrorKind::CalibrationFailed, "no epsilon in (0, 1] satisfies xi12 <= 0.9 xi_bar12 / 6 after " +
                                                  std::to_string(kCalibrationSteps) + " bisection steps");
  }

  json states = json::array();
  states.push_back(random_spec(d, seed_rho1));
  states.push_back(json{{"mix", {{"base", 1}, {"other", random_spec(d, seed_sigma)}, {"epsilon", lo}}}});
  for (std::uint64_t s : seed_rest) states.push_back(random_spec(d, s));
  json doc{{"version", kScenarioVersion},
           {"dim", d},
           {"generator", {{"kind", "condition-satisfying"}, {"seed", params.seed}, {"epsilon", lo}}},
           {"states", states},
           {"labels", labels_for(params.r)}};

  const Scenario reloaded = parse_scenario(dump_scenario(doc), "<generated>");
  const ConditionReport check = theorem_condition(reloaded.ensemble);
  if (!check.holds || !(check.pair == IndexPair{0, 1})) {
    throw Error(ErrorKind::CalibrationFailed, "generated scenario does not satisfy the condition on reload");
  }
  return doc;
}

json generate_equidistant_classical(const GenParams& params) {
  const std::size_t d = params.d;
  const std::size_t r = params.r;
  if (d < r) {
    throw Error(ErrorKind::InvalidArgument,
                "equidistant classical ensembles need d >= r (distinct diagonal states of a one-parameter family "
                "cannot be mutually equidistant)");
  }
  if (!(params.target_xi > 0.0)) throw Error(ErrorKind::InvalidArgument, "target xi must be positive");
  // xi between two peaked distributions grows from 0 at q = 1/d to +inf at q = 1.
  double lo = 1.0 / static_cast<double>(d);
  double hi = 1.0;
  for (int step = 0; step < 200 && hi - lo > 1e-15; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double xi = classical_chernoff(peaked_distribution(d, 0, mid), peaked_distribution(d, 1, mid));
    (xi < params.target_xi ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  json states = json::array();
  for (std::size_t k = 0; k < r; ++k) states.push_back(json{{"classical", peaked_distribution(d, k, q)}});
  return json{{"version", kScenarioVersion},
              {"dim", d},
              {"generator", {{"kind", "equidistant-classical"}, {"peak", q}, {"target_xi", params.target_xi}}},
              {"states", states},
              {"labels", labels_for(r)}};
}

json generate_random(const GenParams& params) {
  const std::size_t rank = params.rank.value_or(params.d);
  SplitMix64 seeds(params.seed);
  json states = json::array();
  for (std::size_t k = 0; k < params.r; ++k) states.push_back(random_spec(rank, seeds.next()));
  return json{{"version", kScenarioVersion},
              {"dim", params.d},
              {"generator", {{"kind", "random"}, {"seed", params.seed}}},
              {"states", states},
              {"labels", labels_for(params.r)}};
}

}  // namespace

json generate_scenario(const GenParams& params) {
  if (params.r < 2) throw Error(ErrorKind::InvalidArgument, "need r >= 2");
  if (params.d < 1) throw Error(ErrorKind::InvalidArgument, "need d >= 1");
  json doc;
  switch (params.kind) {
    case GenKind::ConditionSatisfying:
      if (params.r < 3) throw Error(ErrorKind::InvalidArgument, "condition-satisfying scenarios need r >= 3");
      if (params.d < 2) throw Error(ErrorKind::InvalidArgument, "condition-satisfying scenarios need d >= 2");
      doc = generate_condition_satisfying(params);
      break;
    case GenKind::EquidistantClassical:
      doc = generate_equidistant_classical(params);
      break;
    case GenKind::Random:
      if (params.rank && (*params.rank < 1 || *params.rank > params.d)) {
        throw Error(ErrorKind::InvalidArgument, "rank must lie in 1..d");
      }
      doc = generate_random(params);
      break;
  }
  // Every generated file must load.
  (void)scenario_from_json(doc, "<generated>");
  return doc;
}

}  // namespace mqht
