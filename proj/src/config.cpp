#include "srptq/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "srptq/analytics.hpp"
#include "srptq/error.hpp"

namespace srptq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view field, const std::string& msg) {
  throw Error(ErrorCode::ConfigParse, "field '" + std::string(field) + "': " + msg);
}

double number_field(const json& obj, std::string_view parent, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(std::string(parent) + "." + key, "expected a number");
  return v.get<double>();
}

Distribution distribution_from(const json& obj, std::string_view field) {
  if (!obj.is_object()) fail(field, "expected an object");
  static const std::set<std::string> known{"family", "shape", "scale", "mean", "value"};
  for (const auto& [k, _] : obj.items())
    if (!known.count(k)) fail(std::string(field) + "." + k, "unknown key");
  if (!obj.contains("family") || !obj["family"].is_string())
    fail(std::string(field) + ".family", "missing or not a string");

  Family family;
  try {
    family = parse_family(obj["family"].get<std::string>());
  } catch (const Error& e) {
    fail(std::string(field) + ".family", e.what());
  }

  const bool has_mean = obj.contains("mean");
  const bool has_scale = obj.contains("scale");
  const bool has_value = obj.contains("value");
  if (int(has_mean) + int(has_scale) + int(has_value) != 1)
    fail(field, "exactly one of 'mean', 'scale' or 'value' is required");

  double shape = 1.0;
  if (family == Family::Weibull || family == Family::Pareto) {
    if (!obj.contains("shape")) fail(std::string(field) + ".shape", "required for this family");
    shape = number_field(obj, field, "shape");
  }
  try {
    if (has_mean) return Distribution::with_mean(family, shape, number_field(obj, field, "mean"));
    const double scale = number_field(obj, field, has_scale ? "scale" : "value");
    switch (family) {
      case Family::Exponential: return Distribution::exponential(scale);
      case Family::Weibull: return Distribution::weibull(shape, scale);
      case Family::Pareto: return Distribution::pareto(shape, scale);
      case Family::Deterministic: return Distribution::deterministic(scale);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParse) throw;
    fail(field, e.what());
  }
  fail(field, "unreachable");
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ConfigParse,
                "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                    ": " + e.what());
  }
}

json distribution_to_json(const Distribution& d) {
  json j;
  j["family"] = std::string(to_string(d.family()));
  if (d.family() == Family::Weibull || d.family() == Family::Pareto) j["shape"] = d.shape();
  j["scale"] = d.scale();
  return j;
}

}  // namespace

std::string_view to_string(Discipline d) {
  switch (d) {
    case Discipline::SRPT: return "srpt";
    case Discipline::FCFS: return "fcfs";
    case Discipline::LCFS: return "lcfs";
    case Discipline::PriorityLoss: return "priority_loss";
  }
  return "?";
}

Discipline parse_discipline(std::string_view name) {
  if (name == "srpt") return Discipline::SRPT;
  if (name == "fcfs") return Discipline::FCFS;
  if (name == "lcfs") return Discipline::LCFS;
  if (name == "priority_loss" || name == "loss") return Discipline::PriorityLoss;
  throw Error(ErrorCode::UnknownDiscipline, "'" + std::string(name) + "'");
}

RateTriple resolve_rates(std::optional<double> lambda, std::optional<int> servers,
                         std::optional<double> rho, double mu) {
  const int given = int(lambda.has_value()) + int(servers.has_value()) + int(rho.has_value());
  if (given < 2)
    throw Error(ErrorCode::InvalidArgument, "two of {lambda, servers, rho} are required");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
  if (lambda && !(*lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (servers && *servers < 1) throw Error(ErrorCode::InvalidArgument, "servers must be >= 1");
  if (rho && !(*rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");

  RateTriple t;
  if (servers && rho) {
    t.servers = *servers;
    t.rho = *rho;
    t.lambda = *rho * *servers * mu;
    if (lambda && std::fabs(*lambda - t.lambda) > 1e-9 * t.lambda)
      throw Error(ErrorCode::InvalidArgument, "lambda, servers and rho are inconsistent");
  } else if (lambda && servers) {
    t.lambda = *lambda;
    t.servers = *servers;
    t.rho = *lambda / (*servers * mu);
  } else {
    const double s = *lambda / (*rho * mu);
    const double rounded = std::round(s);
    if (rounded < 1.0 || std::fabs(s - rounded) > 1e-9 * rounded)
      throw Error(ErrorCode::InvalidArgument,
                  "lambda/(rho mu) = " + std::to_string(s) + " is not a server count");
    t.servers = static_cast<int>(rounded);
    t.rho = *rho;
    t.lambda = *rho * t.servers * mu;
  }
  return t;
}

double SystemConfig::threshold() const {
  if (!(rho > 1.0) || !service.is_continuous()) return std::numeric_limits<double>::infinity();
  return solve_threshold(service, rho, mu()).tau;
}

SystemConfig SystemConfig::with_servers(int s) const {
  SystemConfig c = *this;
  const auto t = resolve_rates(std::nullopt, s, rho, mu());
  c.servers = t.servers;
  c.lambda = t.lambda;
  return c;
}

void SystemConfig::validate() const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (servers < 1) throw Error(ErrorCode::InvalidArgument, "servers must be >= 1");
  if (std::fabs(lambda - rho * servers * mu()) > 1e-12 * lambda)
    throw Error(ErrorCode::InvalidArgument, "lambda != rho * servers * mu");
  if (!(horizon > 0.0)) throw Error(ErrorCode::NonpositiveHorizon, "horizon must be positive");
  if (!(warmup >= 0.0) || !(warmup < horizon))
    throw Error(ErrorCode::InvalidArgument, "warmup must lie in [0, horizon)");
  if (batches < 5) throw Error(ErrorCode::InvalidArgument, "batches must be >= 5");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "at least one seed is required");
  if (discipline == Discipline::PriorityLoss) {
    if (!(rho > 1.0))
      throw Error(ErrorCode::NotOverloaded, "priority_loss needs rho > 1 so that tau exists");
    if (!service.is_continuous())
      throw Error(ErrorCode::InvalidArgument, "priority_loss needs a continuous service distribution");
  }
}

Distribution parse_distribution(std::string_view json_text, std::string_view field) {
  return distribution_from(parse_text(json_text), field);
}

SystemConfig parse_config(std::string_view json_text) {
  const json doc = parse_text(json_text);
  if (!doc.is_object()) fail("<root>", "expected an object");

  static const std::set<std::string> known{"lambda", "servers", "rho", "service", "patience",
                                           "discipline", "horizon", "warmup", "seeds", "batches",
                                           "debug_invariants", "verify", "comment"};
  for (const auto& [k, _] : doc.items())
    if (!known.count(k)) fail(k, "unknown field");

  SystemConfig cfg;
  for (const char* key : {"service", "patience"})
    if (!doc.contains(key)) fail(key, "missing required field");
  cfg.service = distribution_from(doc["service"], "service");
  cfg.patience = distribution_from(doc["patience"], "patience");

  std::optional<double> lambda, rho;
  std::optional<int> servers;
  if (doc.contains("lambda")) lambda = number_field(doc, "", "lambda");
  if (doc.contains("rho")) rho = number_field(doc, "", "rho");
  if (doc.contains("servers")) {
    if (!doc["servers"].is_number_integer()) fail("servers", "expected an integer");
    servers = doc["servers"].get<int>();
  }
  try {
    const auto t = resolve_rates(lambda, servers, rho, cfg.mu());
    cfg.lambda = t.lambda;
    cfg.servers = t.servers;
    cfg.rho = t.rho;
  } catch (const Error& e) {
    fail("lambda/servers/rho", e.what());
  }

  if (doc.contains("discipline")) {
    if (!doc["discipline"].is_string()) fail("discipline", "expected a string");
    cfg.discipline = parse_discipline(doc["discipline"].get<std::string>());
  }
  if (doc.contains("horizon")) cfg.horizon = number_field(doc, "", "horizon");
  cfg.warmup = doc.contains("warmup") ? number_field(doc, "", "warmup") : 0.1 * cfg.horizon;
  if (doc.contains("batches")) {
    if (!doc["batches"].is_number_integer()) fail("batches", "expected an integer");
    cfg.batches = doc["batches"].get<int>();
  }
  if (doc.contains("seeds")) {
    const auto& s = doc["seeds"];
    if (!s.is_array()) fail("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (const auto& v : s) {
      if (!v.is_number_unsigned()) fail("seeds", "expected nonnegative integers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (doc.contains("debug_invariants")) {
    if (!doc["debug_invariants"].is_boolean()) fail("debug_invariants", "expected a boolean");
    cfg.debug_invariants = doc["debug_invariants"].get<bool>();
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const SystemConfig& cfg) {
  json j;
  j["lambda"] = cfg.lambda;
  j["servers"] = cfg.servers;
  j["rho"] = cfg.rho;
  j["service"] = distribution_to_json(cfg.service);
  j["patience"] = distribution_to_json(cfg.patience);
  j["discipline"] = std::string(to_string(cfg.discipline));
  j["horizon"] = cfg.horizon;
  j["warmup"] = cfg.warmup;
  j["seeds"] = cfg.seeds;
  j["batches"] = cfg.batches;
  j["debug_invariants"] = cfg.debug_invariants;
  return j.dump(2);
}

std::vector<std::uint64_t> expand_seeds(std::uint64_t seed_base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = seed_base + i;
  return seeds;
}

}  // namespace srptq
