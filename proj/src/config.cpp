#include "dencomb/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dencomb/error.hpp"

namespace dencomb {

const char* to_string(MseMode m) {
  switch (m) {
    case MseMode::oracle: return "oracle";
    case MseMode::sure: return "sure";
    case MseMode::external: return "external";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key), v = trim(raw_value);
  if (key == "clean") clean = v;
  else if (key == "noisy") noisy = v;
  else if (key == "sigma") sigma255 = to_double(key, v);
  else if (key == "clipped") clipped = to_bool(key, v);
  else if (key == "denoisers") denoisers = split_list(v);
  else if (key == "labels") labels = split_list(v);
  else if (key == "mse_mode") {
    if (v == "oracle") mse_mode = MseMode::oracle;
    else if (v == "sure") mse_mode = MseMode::sure;
    else if (v == "external") mse_mode = MseMode::external;
    else throw ParseError("config: unknown mse_mode '" + v + "'");
  } else if (key == "mse_file") mse_file = v;
  else if (key == "solver") {
    try {
      solver = solver_from_string(v);
    } catch (const InvalidParameter& e) {
      throw ParseError(std::string("config: ") + e.what());
    }
  } else if (key == "max_iter") max_iter = static_cast<int>(to_int(key, v));
  else if (key == "pg_step") pg_step = to_double(key, v);
  else if (key == "booster") {
    if (v.empty() || v == "none") booster.reset();
    else {
      try {
        booster = boost_rule_from_string(v);
      } catch (const InvalidParameter& e) {
        throw ParseError(std::string("config: ") + e.what());
      }
    }
  } else if (key == "booster_iterations") booster_iterations = static_cast<int>(to_int(key, v));
  else if (key == "booster_inner") booster_inner = v;
  else if (key == "sigmas") {
    sigmas.clear();
    for (const auto& s : split_list(v)) sigmas.push_back(to_double(key, s));
  } else if (key == "trials") trials = static_cast<int>(to_int(key, v));
  else if (key == "sure_probes") sure_probes = static_cast<int>(to_int(key, v));
  else if (key == "sure_epsilon") sure_epsilon = to_double(key, v);
  else if (key == "bench_k") bench_k = static_cast<int>(to_int(key, v));
  else if (key == "bench_trials") bench_trials = static_cast<int>(to_int(key, v));
  else if (key == "patch") patch = static_cast<int>(to_int(key, v));
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ParseError("config: seed must be non-negative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") out_dir = v;
  else throw ParseError("config: unknown key '" + key + "'");
}

std::vector<DenoiserSpec> RunConfig::denoiser_specs() const {
  std::vector<DenoiserSpec> specs;
  for (const auto& d : denoisers) {
    try {
      specs.push_back(DenoiserSpec::parse(d, sigma255));
    } catch (const InvalidParameter& e) {
      throw ParseError(std::string("config: ") + e.what());
    }
  }
  return specs;
}

std::vector<std::string> RunConfig::denoiser_labels() const {
  if (!labels.empty()) return labels;
  std::vector<std::string> out;
  for (const auto& spec : denoiser_specs()) {
    std::string l = spec.describe();
    std::replace(l.begin(), l.end(), ':', '_');
    std::replace(l.begin(), l.end(), '/', '_');
    std::string base = l;
    for (int n = 2; std::find(out.begin(), out.end(), l) != out.end(); ++n) l = base + "#" + std::to_string(n);
    out.push_back(l);
  }
  return out;
}

BoosterSpec RunConfig::booster_spec() const {
  BoosterSpec spec;
  spec.rule = booster.value_or(BoostRule::twicing);
  spec.iterations = booster_iterations;
  try {
    spec.inner = DenoiserSpec::parse(booster_inner, sigma255);
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return spec;
}

void RunConfig::validate() const {
  if (denoisers.empty()) throw ParseError("config: at least one denoiser is required");
  const auto specs = denoiser_specs();
  if (!labels.empty()) {
    if (labels.size() != denoisers.size()) throw ParseError("config: labels and denoisers differ in length");
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
      throw ParseError("config: labels must be unique");
    }
    for (const auto& l : labels)
      if (l.find_first_of(",\n") != std::string::npos) throw ParseError("config: labels may not contain ',' or newlines");
  }
  if (!(sigma255 > 0.0)) throw ParseError("config: sigma must be positive");
  if (clean.empty() && noisy.empty()) throw ParseError("config: need a clean or a noisy image");
  if (mse_mode == MseMode::oracle && clean.empty()) throw ParseError("config: oracle mse_mode requires a clean image");
  if (mse_mode == MseMode::external && mse_file.empty()) throw ParseError("config: external mse_mode requires mse_file");
  if (mse_mode == MseMode::sure) {
    for (const auto& s : specs)
      if (s.kind == DenoiserKind::external_file) {
        throw ParseError("config: sure mode cannot probe external_file denoisers");
      }
  }
  if (solver == SolverId::closed_form_2way && denoisers.size() != 2) {
    throw ParseError("config: closed_form_2way needs exactly two denoisers");
  }
  if (max_iter < 1) throw ParseError("config: max_iter must be >= 1");
  if (trials < 1) throw ParseError("config: trials must be >= 1");
  if (sure_probes < 1) throw ParseError("config: sure_probes must be >= 1");
  if (!(sure_epsilon > 0.0)) throw ParseError("config: sure_epsilon must be positive");
  if (booster_iterations < 1) throw ParseError("config: booster_iterations must be >= 1");
  if (patch < 1) throw ParseError("config: patch must be >= 1");
  for (double s : sigmas)
    if (!(s > 0.0)) throw ParseError("config: sigmas must be positive");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Image load_image_source(const std::string& source) {
  const std::string prefix = "synthetic:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string dims = source.substr(prefix.size());
    const auto x = dims.find('x');
    try {
      const int w = std::stoi(dims.substr(0, x));
      const int h = x == std::string::npos ? w : std::stoi(dims.substr(x + 1));
      return synthetic_image(w, h);
    } catch (const std::logic_error&) {
      throw ParseError("bad synthetic image spec '" + source + "'");
    }
  }
  return read_pgm(source);
}

}  // namespace dencomb
