#include "pdapprox/config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace pdapprox {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Thrown while walking the document; carries the key so the caller can map
// it to a line in the source text.
struct KeyError {
  std::string key;
  std::string message;
};

std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Line of the first occurrence of "key" used as an object key.
int key_line(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    std::size_t after = pos + needle.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after])))
      ++after;
    if (after < text.size() && text[after] == ':') return line_col(text, pos).first;
  }
  return 0;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw KeyError{k, "unknown key '" + k + "'"};
}

double get_number(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw KeyError{key, "'" + key + "' must be a number"};
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x == std::floor(x) && std::abs(x) < 9.2e18) return std::int64_t(x);
  }
  throw KeyError{key, "'" + key + "' must be an integer"};
}

std::vector<double> get_numbers(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_array()) throw KeyError{key, "'" + key + "' must be an array of numbers"};
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw KeyError{key, "'" + key + "' must be an array of numbers"};
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

TargetSet target_from_json(const json& j) {
  if (!j.is_object()) throw KeyError{"target", "'target' must be an object"};
  if (!j.contains("kind") || !j["kind"].is_string())
    throw KeyError{"target", "'target' needs a string 'kind'"};
  const std::string kind = j["kind"];
  try {
    if (kind == "ball") {
      reject_unknown(j, {"kind", "center", "radius", "dimension"});
      std::vector<double> center;
      if (j.contains("center")) center = get_numbers(j, "center");
      else center.assign(j.contains("dimension") ? get_integer(j, "dimension") : 2, 0.0);
      return TargetSet::ball(center, j.contains("radius") ? get_number(j, "radius") : 1.0);
    }
    if (kind == "box") {
      reject_unknown(j, {"kind", "lower", "upper"});
      if (!j.contains("lower") || !j.contains("upper"))
        throw KeyError{"target", "box needs 'lower' and 'upper'"};
      return TargetSet::box(get_numbers(j, "lower"), get_numbers(j, "upper"));
    }
    if (kind == "ellipse") {
      reject_unknown(j, {"kind", "center", "semi_axes"});
      std::array<double, 2> c{0.0, 0.0};
      if (j.contains("center")) {
        const auto v = get_numbers(j, "center");
        if (v.size() != 2) throw KeyError{"center", "ellipse center needs 2 coordinates"};
        c = {v[0], v[1]};
      }
      if (!j.contains("semi_axes")) throw KeyError{"target", "ellipse needs 'semi_axes'"};
      const auto a = get_numbers(j, "semi_axes");
      if (a.size() != 2) throw KeyError{"semi_axes", "ellipse needs 2 semi-axes"};
      return TargetSet::ellipse(c, {a[0], a[1]});
    }
    if (kind == "polygon") {
      reject_unknown(j, {"kind", "vertices"});
      if (!j.contains("vertices") || !j["vertices"].is_array())
        throw KeyError{"target", "polygon needs a 'vertices' array"};
      std::vector<std::array<double, 2>> v;
      for (const auto& p : j["vertices"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw KeyError{"vertices", "polygon vertices must be [x, y] pairs"};
        v.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return TargetSet::polygon(v);
    }
  } catch (const std::invalid_argument& e) {
    throw KeyError{"kind", e.what()};
  }
  throw KeyError{"kind", "unknown target kind '" + kind + "'"};
}

ordered_json target_to_json(const TargetSet& a) {
  ordered_json j;
  j["kind"] = a.kind();
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BallShape>) {
          j["center"] = s.center;
          j["radius"] = s.radius;
        } else if constexpr (std::is_same_v<S, BoxShape>) {
          j["lower"] = s.lower;
          j["upper"] = s.upper;
        } else if constexpr (std::is_same_v<S, EllipseShape>) {
          j["center"] = s.center;
          j["semi_axes"] = s.semi_axes;
        } else {
          j["vertices"] = s.vertices;
        }
      },
      a.shape());
  return j;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": invalid JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw ConfigError("line 1: config must be a JSON object");

  ExperimentConfig c;
  try {
    reject_unknown(doc, {"experiment", "target", "t_grid", "replications", "seed",
                         "tail_mass", "samples_per_cell", "inside_samples", "symdiff",
                         "coupled", "workers", "pilot_replications", "rx_k", "rx_s",
                         "bootstrap", "slope_tolerance", "ks_threshold",
                         "constant_samples", "output_dir"});
    if (doc.contains("experiment")) {
      if (!doc["experiment"].is_string())
        throw KeyError{"experiment", "'experiment' must be a string"};
      c.experiment = doc["experiment"];
    }
    if (doc.contains("target")) c.target = target_from_json(doc["target"]);
    if (doc.contains("t_grid")) c.t_grid = get_numbers(doc, "t_grid");
    if (doc.contains("replications")) c.replications = int(get_integer(doc, "replications"));
    if (doc.contains("seed")) {
      const json& s = doc["seed"];
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
        throw KeyError{"seed", "'seed' must be a non-negative integer"};
      c.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("tail_mass")) c.tail_mass = get_number(doc, "tail_mass");
    if (doc.contains("samples_per_cell"))
      c.symdiff.samples_per_cell = int(get_integer(doc, "samples_per_cell"));
    if (doc.contains("inside_samples"))
      c.symdiff.inside_samples = int(get_integer(doc, "inside_samples"));
    for (const char* key : {"symdiff", "coupled"}) {
      if (!doc.contains(key)) continue;
      if (!doc[key].is_boolean())
        throw KeyError{key, std::string("'") + key + "' must be true or false"};
    }
    if (doc.contains("symdiff")) c.compute_symdiff = doc["symdiff"];
    if (doc.contains("coupled")) c.coupled = doc["coupled"];
    if (doc.contains("workers")) c.workers = int(get_integer(doc, "workers"));
    if (doc.contains("pilot_replications"))
      c.pilot_replications = int(get_integer(doc, "pilot_replications"));
    if (doc.contains("rx_k")) {
      c.rx_k.clear();
      for (double k : get_numbers(doc, "rx_k")) {
        if (k != std::floor(k)) throw KeyError{"rx_k", "'rx_k' entries must be integers"};
        c.rx_k.push_back(int(k));
      }
    }
    if (doc.contains("rx_s")) c.rx_s = get_numbers(doc, "rx_s");
    if (doc.contains("bootstrap")) c.bootstrap = int(get_integer(doc, "bootstrap"));
    if (doc.contains("slope_tolerance")) c.slope_tolerance = get_number(doc, "slope_tolerance");
    if (doc.contains("ks_threshold")) c.ks_threshold = get_number(doc, "ks_threshold");
    if (doc.contains("constant_samples")) {
      const auto n = get_integer(doc, "constant_samples");
      if (n < 1) throw KeyError{"constant_samples", "'constant_samples' must be >= 1"};
      c.constant_samples = std::uint64_t(n);
    }
    if (doc.contains("output_dir")) {
      if (!doc["output_dir"].is_string())
        throw KeyError{"output_dir", "'output_dir' must be a string"};
      c.output_dir = doc["output_dir"];
    }
  } catch (const KeyError& e) {
    const int line = key_line(text, e.key);
    throw ConfigError((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                      e.message);
  }
  try {
    validate(c);
  } catch (const ConfigError& e) {
    // Point at the key most likely responsible.
    const std::string msg = e.what();
    for (const char* key : {"t_grid", "replications", "tail_mass", "workers", "experiment",
                            "bootstrap", "rx_k", "rx_s", "samples_per_cell",
                            "inside_samples", "pilot_replications", "target"}) {
      if (msg.find(std::string(key).substr(0, 6)) != std::string::npos ||
          (std::string(key) == "t_grid" && msg.find("t must") != std::string::npos)) {
        const int line = key_line(text, key);
        if (line > 0) throw ConfigError("line " + std::to_string(line) + ": " + msg);
      }
    }
    throw;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["experiment"] = c.experiment;
  j["target"] = target_to_json(c.target);
  j["t_grid"] = c.t_grid;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["tail_mass"] = c.tail_mass;
  j["samples_per_cell"] = c.symdiff.samples_per_cell;
  j["inside_samples"] = c.symdiff.inside_samples;
  j["symdiff"] = c.compute_symdiff;
  j["coupled"] = c.coupled;
  j["workers"] = c.workers;
  j["pilot_replications"] = c.pilot_replications;
  j["rx_k"] = c.rx_k;
  j["rx_s"] = c.rx_s;
  j["bootstrap"] = c.bootstrap;
  j["slope_tolerance"] = c.slope_tolerance;
  j["ks_threshold"] = c.ks_threshold;
  j["constant_samples"] = c.constant_samples;
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace pdapprox
