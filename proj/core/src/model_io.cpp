#include "zigpcast/model_io.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "zigpcast/data_io.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/report_io.hpp"

namespace zigpcast {

using nlohmann::json;

namespace {

json fit_to_json(RegressionKind kind, const RegressionFit& fit) {
  json j;
  j["kind"] = to_string(kind);
  j["alpha"] = fit.coefficients.alpha;
  j["beta"] = fit.coefficients.beta;
  j["gamma_log"] = fit.coefficients.gamma_log;
  j["fallback"] = fit.fallback;
  j["converged"] = fit.converged;
  j["log_likelihood"] = fit.log_likelihood;
  j["gradient_norm"] = fit.gradient_norm;
  j["iterations"] = fit.iterations;
  j["starts_converged"] = fit.starts_converged;
  j["n_observations"] = fit.n_observations;
  if (fit.gof) {
    j["gof"] = {{"statistic", fit.gof->statistic},
                {"df", fit.gof->df},
                {"p_value", fit.gof->p_value},
                {"n", fit.gof->n},
                {"floored", fit.gof->floored}};
  } else {
    j["gof"] = nullptr;
  }
  j["warnings"] = fit.warnings;
  return j;
}

RegressionFit fit_from_json(const json& j) {
  RegressionFit fit;
  fit.coefficients.alpha = j.at("alpha").get<std::vector<double>>();
  fit.coefficients.beta = j.at("beta").get<double>();
  fit.coefficients.gamma_log = j.at("gamma_log").get<double>();
  fit.fallback = j.value("fallback", false);
  fit.converged = j.value("converged", true);
  fit.log_likelihood = j.value("log_likelihood", 0.0);
  fit.gradient_norm = j.value("gradient_norm", 0.0);
  fit.iterations = j.value("iterations", 0);
  fit.starts_converged = j.value("starts_converged", 0);
  fit.n_observations = j.value("n_observations", 0);
  if (auto it = j.find("gof"); it != j.end() && !it->is_null()) {
    GofResult g;
    g.statistic = it->at("statistic").get<double>();
    g.df = it->at("df").get<int>();
    g.p_value = it->at("p_value").get<double>();
    g.n = it->at("n").get<int>();
    g.floored = it->value("floored", 0);
    fit.gof = g;
  }
  fit.warnings = j.value("warnings", std::vector<std::string>{});
  return fit;
}

std::size_t expected_alpha(RegressionKind kind) { return kind == RegressionKind::Nested ? 4 : 3; }

}  // namespace

std::string serialize_models(const ModelFile& file) {
  json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  json meta = json::object();
  for (const auto& [k, v] : file.metadata) meta[k] = v;
  doc["metadata"] = meta;
  json teams = json::array();
  for (const auto& [id, model] : file.models.models()) {
    json regs = json::array();
    for (auto kind : {RegressionKind::Attack, RegressionKind::Defense, RegressionKind::Nested}) {
      regs.push_back(fit_to_json(kind, model.fit(kind)));
    }
    teams.push_back({{"team", id}, {"regressions", regs}});
  }
  doc["teams"] = teams;
  return doc.dump(2) + "\n";
}

ModelFile deserialize_models(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  ModelFile out;
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw ConfigError(fmt::format("format must be '{}'", kModelFormat));
    }
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw ConfigError(fmt::format("unsupported version {}", doc.at("version").dump()));
    }
    if (auto it = doc.find("metadata"); it != doc.end()) {
      for (const auto& [k, v] : it->items()) out.metadata.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
    const auto& teams = doc.at("teams");
    for (std::size_t i = 0; i < teams.size(); ++i) {
      const auto& t = teams[i];
      TeamModel model;
      model.team = t.at("team").get<std::string>();
      if (out.models.contains(model.team)) throw ConfigError(fmt::format("team '{}' listed twice", model.team));
      bool seen[3] = {false, false, false};
      for (const auto& r : t.at("regressions")) {
        const auto kind = regression_kind_from_string(r.at("kind").get<std::string>());
        auto fit = fit_from_json(r);
        if (fit.coefficients.alpha.size() != expected_alpha(kind)) {
          throw ConfigError(fmt::format("team '{}': {} regression needs {} alpha coefficients, got {}", model.team,
                                        to_string(kind), expected_alpha(kind), fit.coefficients.alpha.size()));
        }
        const auto idx = static_cast<std::size_t>(kind);
        if (seen[idx]) throw ConfigError(fmt::format("team '{}': {} regression listed twice", model.team, to_string(kind)));
        seen[idx] = true;
        switch (kind) {
          case RegressionKind::Attack: model.attack = std::move(fit); break;
          case RegressionKind::Defense: model.defense = std::move(fit); break;
          case RegressionKind::Nested: model.nested = std::move(fit); break;
        }
      }
      if (!(seen[0] && seen[1] && seen[2])) {
        throw ConfigError(fmt::format("team '{}' lacks one of the attack/defense/nested regressions", model.team));
      }
      out.models.insert(std::move(model));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source, e.what()));
  }
  return out;
}

void write_models(const std::filesystem::path& path, const ModelFile& file) {
  write_text_file(path, serialize_models(file));
}

ModelFile read_models(const std::filesystem::path& path) {
  return deserialize_models(read_text_file(path), path.string());
}

}  // namespace zigpcast
