#include "hawkes/scenario.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "hawkes/errors.hpp"
#include "json.hpp"

namespace hawkes {
namespace {

using nlohmann::json;  // plain json: keys come out sorted -> canonical text

const char* extension_name(Extension e) {
  switch (e) {
    case Extension::kCyclic: return "cyclic";
    case Extension::kTailConstant: return "tail_constant";
    case Extension::kNull: return "null";
  }
  return "tail_constant";
}

Extension parse_extension(const std::string& s, const std::string& origin) {
  if (s == "cyclic") return Extension::kCyclic;
  if (s == "tail_constant") return Extension::kTailConstant;
  if (s == "null") return Extension::kNull;
  throw config_error(origin + ": unknown extension '" + s +
                     "' (expected cyclic | tail_constant | null)");
}

json kernel_json(const Kernel& k) {
  json j;
  if (const auto* e = std::get_if<Exponential>(&k.family())) {
    j["family"] = "exponential";
    j["rate"] = e->rate;
    j["weight"] = e->weight;
  } else if (const auto* e = std::get_if<ErlangK>(&k.family())) {
    j["family"] = "erlang";
    j["shape"] = e->shape;
    j["rate"] = e->rate;
    j["weight"] = e->weight;
  } else if (const auto* u = std::get_if<UniformSupport>(&k.family())) {
    j["family"] = "uniform";
    j["height"] = u->height;
    j["length"] = u->length;
  } else {
    const auto& t = std::get<Tabulated>(k.family());
    j["family"] = "tabulated";
    j["dt"] = t.dt;
    j["values"] = t.values;
  }
  return j;
}

Kernel kernel_from_json(const json& j, std::size_t index,
                        const std::string& origin) {
  const std::string where =
      origin + ": kernels[" + std::to_string(index) + "]";
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential")
      return Kernel(Exponential{j.at("rate").get<double>(),
                                j.at("weight").get<double>()});
    if (family == "erlang")
      return Kernel(ErlangK{j.at("shape").get<int>(),
                            j.at("rate").get<double>(),
                            j.at("weight").get<double>()});
    if (family == "uniform")
      return Kernel(UniformSupport{j.at("height").get<double>(),
                                   j.at("length").get<double>()});
    if (family == "tabulated")
      return Kernel(Tabulated{j.at("dt").get<double>(),
                              j.at("values").get<std::vector<double>>()});
    throw config_error(where + ": unknown kernel family '" + family + "'");
  } catch (const json::exception& e) {
    throw config_error(where + ": " + e.what());
  } catch (const validation_error& e) {
    throw config_error(where + ": " + e.what());
  }
}

json baseline_json(const Baseline& b) {
  json j;
  if (const auto* c = std::get_if<ConstantBaseline>(&b.kind())) {
    j["type"] = "constant";
    j["rate"] = c->rate;
  } else {
    const auto& p = std::get<PiecewiseBaseline>(b.kind());
    j["type"] = "piecewise";
    j["breakpoints"] = p.breakpoints;
    j["levels"] = p.levels;
  }
  return j;
}

Baseline baseline_from_json(const json& j, const std::string& origin) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant")
      return Baseline(ConstantBaseline{j.at("rate").get<double>()});
    if (type == "piecewise")
      return Baseline(PiecewiseBaseline{
          j.at("breakpoints").get<std::vector<double>>(),
          j.at("levels").get<std::vector<double>>()});
    throw config_error(origin + ": baseline: unknown type '" + type + "'");
  } catch (const json::exception& e) {
    throw config_error(origin + ": baseline: " + e.what());
  } catch (const validation_error& e) {
    throw config_error(origin + ": baseline: " + e.what());
  }
}

// the two parameter key names per claim family, in factory order
std::pair<const char*, const char*> claim_keys(ClaimFamily f) {
  switch (f) {
    case ClaimFamily::kDeterministic: return {"value", nullptr};
    case ClaimFamily::kExponential: return {"mean", nullptr};
    case ClaimFamily::kGamma: return {"shape", "scale"};
    case ClaimFamily::kPareto: return {"alpha", "scale"};
    case ClaimFamily::kWeibull: return {"shape", "scale"};
    case ClaimFamily::kLogNormal: return {"mu", "sigma"};
  }
  return {nullptr, nullptr};
}

ClaimLaw claim_from_json(const json& j, const std::string& origin) {
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "deterministic")
      return ClaimLaw::deterministic(j.at("value").get<double>());
    if (family == "exponential")
      return ClaimLaw::exponential(j.at("mean").get<double>());
    if (family == "gamma")
      return ClaimLaw::gamma(j.at("shape").get<double>(),
                             j.at("scale").get<double>());
    if (family == "pareto")
      return ClaimLaw::pareto(j.at("alpha").get<double>(),
                              j.at("scale").get<double>());
    if (family == "weibull")
      return ClaimLaw::weibull(j.at("shape").get<double>(),
                               j.at("scale").get<double>());
    if (family == "log_normal")
      return ClaimLaw::log_normal(j.at("mu").get<double>(),
                                  j.at("sigma").get<double>());
    throw config_error(origin + ": claims: unknown family '" + family + "'");
  } catch (const json::exception& e) {
    throw config_error(origin + ": claims: " + e.what());
  } catch (const validation_error& e) {
    throw config_error(origin + ": claims: " + e.what());
  }
}

json scenario_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["baseline"] = baseline_json(s.baseline);
  json ks = json::array();
  for (const Kernel& k : s.kernels) ks.push_back(kernel_json(k));
  j["kernels"] = std::move(ks);
  j["extension"] = extension_name(s.extension);
  j["horizon"] = s.horizon;
  j["replications"] = s.replications;
  j["seed"] = s.seed;
  j["tolerances"] = {{"series", s.series_tol},
                     {"grid_dt", s.grid_dt},
                     {"divergence_cap", s.divergence_cap}};
  if (s.claim_law) {
    json c;
    c["family"] = s.claim_law->family_name();
    const auto keys = claim_keys(s.claim_law->family());
    c[keys.first] = s.claim_law->param_a();
    if (keys.second) c[keys.second] = s.claim_law->param_b();
    c["premium"] = s.premium;
    c["reserve"] = s.reserve;
    j["claims"] = std::move(c);
  }
  if (s.partition)
    j["partition"] = {{"d", s.partition->d},
                      {"classes", s.partition->classes}};
  if (!s.output_dir.empty()) j["output_dir"] = s.output_dir;
  return j;
}

}  // namespace

KernelSequence Scenario::sequence() const {
  for (std::size_t i = 0; i < kernels.size(); ++i)
    if (kernels[i].l1_norm() >= 1.0) {
      std::ostringstream os;
      os << "kernel #" << (i + 1) << " (" << kernels[i].family_name()
         << ") has ||gamma|| = " << kernels[i].l1_norm()
         << " >= 1: the branching ratio must stay below one";
      throw stability_error(os.str());
    }
  return KernelSequence(baseline, kernels, extension);
}

std::string scenario_to_json(const Scenario& s) {
  return scenario_json(s).dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text,
                            const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(origin + ": " + e.what());
  }
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.baseline = baseline_from_json(j.at("baseline"), origin);
    const json& ks = j.at("kernels");
    if (!ks.is_array())
      throw config_error(origin + ": kernels must be an array");
    for (std::size_t i = 0; i < ks.size(); ++i)
      s.kernels.push_back(kernel_from_json(ks[i], i, origin));
    s.extension =
        parse_extension(j.at("extension").get<std::string>(), origin);
    s.horizon = j.at("horizon").get<double>();
    s.replications = j.at("replications").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      if (t.contains("series")) s.series_tol = t.at("series").get<double>();
      if (t.contains("grid_dt")) s.grid_dt = t.at("grid_dt").get<double>();
      if (t.contains("divergence_cap"))
        s.divergence_cap = t.at("divergence_cap").get<double>();
    }
    if (j.contains("claims")) {
      const json& c = j.at("claims");
      s.claim_law = claim_from_json(c, origin);
      s.premium = c.at("premium").get<double>();
      s.reserve = c.contains("reserve") ? c.at("reserve").get<double>() : 0.0;
    }
    if (j.contains("partition")) {
      PartitionSpec part;
      part.d = j.at("partition").at("d").get<int>();
      part.classes =
          j.at("partition").at("classes").get<std::vector<int>>();
      s.partition = part;
    }
    if (j.contains("output_dir"))
      s.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw config_error(origin + ": " + e.what());
  }

  if (!(s.horizon > 0.0))
    throw config_error(origin + ": horizon must be > 0");
  if (s.replications < 1)
    throw config_error(origin + ": replications must be >= 1");
  if (!(s.series_tol > 0.0) || !(s.grid_dt > 0.0) ||
      !(s.divergence_cap > 0.0))
    throw config_error(origin + ": all tolerances must be positive");
  if (s.claim_law && !(s.premium > 0.0))
    throw config_error(origin + ": claims: premium must be > 0");
  if (s.claim_law && s.reserve < 0.0)
    throw config_error(origin + ": claims: reserve must be >= 0");
  if (s.partition) {
    if (s.partition->d < 1)
      throw config_error(origin + ": partition: d must be >= 1");
    if (s.partition->classes.empty())
      throw config_error(origin + ": partition: classes must be nonempty");
    for (int c : s.partition->classes)
      if (c < 1 || c > s.partition->d)
        throw config_error(origin +
                           ": partition: class labels must lie in 1..d");
  }
  s.sequence();  // subcriticality and structural checks, kernel named
  return s;
}

Scenario load_scenario(const std::string& path,
                       std::vector<std::string>* warnings) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("scenario file not found: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  Scenario s = scenario_from_json(buf.str(), path);
  if (warnings && s.claim_law) {
    const double m = limit_constants(s.sequence(), s.series_tol).m;
    const double load = m * s.claim_law->mean();
    if (!(load < s.premium)) {
      std::ostringstream os;
      os << "net profit condition fails: m E[C1] = " << load
         << " >= premium = " << s.premium
         << "; simulation is still legal, the analytic ruin solvers refuse";
      warnings->push_back(os.str());
    }
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  write_file_atomic(path, scenario_to_json(s));
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp =
      path + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw config_error("cannot open for writing: " + tmp);
    os << content;
    os.flush();
    if (!os) throw config_error("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw config_error("cannot move temporary into place: " + path);
  }
}

void Report::add(const std::string& name, double value, double error,
                 const std::string& kind) {
  scalars.push_back(ReportScalar{name, value, error, kind});
}

std::string Report::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["scenario"] = scenario_json(scenario);
  json sc = json::array();
  for (const ReportScalar& s : scalars) {
    json e;
    e["name"] = s.name;
    e["value"] = s.value;
    e["error"] = s.error;
    e["error_kind"] = s.error_kind;
    sc.push_back(std::move(e));
  }
  j["scalars"] = std::move(sc);
  j["files"] = files;
  j["wall_seconds"] = wall_seconds;
  j["rng"] = {{"name", "philox4x32-10"}, {"seed", scenario.seed}};
  return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
  write_file_atomic(path, to_json());
}

}  // namespace hawkes
