#include "config_json.hpp"

#include "relreg/error.hpp"
#include "relreg/io.hpp"

#include <sstream>

namespace relreg::cli {

namespace {

std::string
model_name(ModelKind kind)
{
  switch (kind) {
    case ModelKind::Linear:
      return "linear";
    case ModelKind::Parabolic:
      return "parabolic";
    case ModelKind::Sinusoidal:
      return "sinusoidal";
    case ModelKind::Exponential:
      return "exponential";
    case ModelKind::NormalityLinear:
      return "normality-linear";
  }
  return "linear";
}

ModelKind
model_from_name(const std::string& name)
{
  if (name == "linear")
    return ModelKind::Linear;
  if (name == "parabolic")
    return ModelKind::Parabolic;
  if (name == "sinusoidal")
    return ModelKind::Sinusoidal;
  if (name == "exponential")
    return ModelKind::Exponential;
  if (name == "normality-linear")
    return ModelKind::NormalityLinear;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + name + "'");
}

double
number(const Json& j, const char* key)
{
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::InvalidArgument,
                std::string("config key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

} // namespace

Json
law_to_json(const Law& law)
{
  Json j;
  switch (law.kind) {
    case LawKind::Normal:
      j["law"] = "normal";
      j["mu"] = law.a;
      j["sigma"] = law.b;
      break;
    case LawKind::Exponential:
      j["law"] = "exponential";
      j["rate"] = law.a;
      break;
    case LawKind::Fixed:
      j["law"] = "fixed";
      j["value"] = law.a;
      break;
  }
  return j;
}

Law
law_from_json(const Json& j)
{
  if (!j.is_object() || !j.contains("law") || !j.at("law").is_string())
    throw Error(ErrorCode::InvalidArgument, "law needs a 'law' name");
  const auto name = j.at("law").get<std::string>();
  Law law;
  if (name == "normal")
    law = Law::normal(number(j, "mu"), number(j, "sigma"));
  else if (name == "exponential")
    law = Law::exponential(number(j, "rate"));
  else if (name == "fixed")
    law = Law::fixed(number(j, "value"));
  else
    throw Error(ErrorCode::InvalidArgument, "unknown law '" + name + "'");
  law.validate();
  return law;
}

Json
sim_config_to_json(const SimConfig& config)
{
  Json j;
  Json model;
  model["kind"] = model_name(config.model.kind);
  model["alpha"] = config.model.alpha;
  model["beta"] = config.model.beta;
  model["noise"] = config.model.noise;
  j["model"] = model;
  j["n"] = config.n;
  j["covariate"] = law_to_json(config.covariate);
  j["censor"] = law_to_json(config.censor);
  j["seed"] = config.seed;
  if (config.outliers) {
    Json o;
    o["count"] = config.outliers->count;
    o["mf"] = config.outliers->mf;
    j["outliers"] = o;
  } else {
    j["outliers"] = nullptr;
  }
  return j;
}

SimConfig
sim_config_from_json(const Json& j, SimConfig base)
{
  if (!j.is_object())
    throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  SimConfig c = base;
  try {
    if (j.contains("model")) {
      const auto& m = j.at("model");
      if (m.contains("kind"))
        c.model.kind = model_from_name(m.at("kind").get<std::string>());
      if (m.contains("alpha"))
        c.model.alpha = m.at("alpha").get<double>();
      if (m.contains("beta"))
        c.model.beta = m.at("beta").get<double>();
      if (m.contains("noise"))
        c.model.noise = m.at("noise").get<double>();
    }
    if (j.contains("n"))
      c.n = j.at("n").get<std::size_t>();
    if (j.contains("covariate"))
      c.covariate = law_from_json(j.at("covariate"));
    if (j.contains("censor"))
      c.censor = law_from_json(j.at("censor"));
    if (j.contains("seed"))
      c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("outliers")) {
      const auto& o = j.at("outliers");
      if (o.is_null())
        c.outliers.reset();
      else
        c.outliers = OutlierSpec{ o.at("count").get<std::size_t>(),
                                  o.at("mf").get<double>() };
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("bad simulation config: ") + e.what());
  }
  c.validate();
  return c;
}

Law
parse_law(const std::string& text)
{
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::InvalidArgument,
                "law must look like normal:mu,sigma | exp:rate | fixed:value");
  const auto name = text.substr(0, colon);
  std::vector<double> params;
  std::stringstream ss(text.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double v = 0.0;
    if (!io::parse_double(tok, v))
      throw Error(ErrorCode::InvalidArgument, "bad law parameter '" + tok + "'");
    params.push_back(v);
  }
  Law law;
  if (name == "normal" && params.size() == 2)
    law = Law::normal(params[0], params[1]);
  else if ((name == "exp" || name == "exponential") && params.size() == 1)
    law = Law::exponential(params[0]);
  else if (name == "fixed" && params.size() == 1)
    law = Law::fixed(params[0]);
  else
    throw Error(ErrorCode::InvalidArgument, "cannot parse law '" + text + "'");
  law.validate();
  return law;
}

} // namespace relreg::cli
