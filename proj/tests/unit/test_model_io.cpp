#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "zigpcast/errors.hpp"
#include "zigpcast/model_io.hpp"

using namespace zigpcast;

namespace {

ModelFile sample_file() {
  auto france = fixtures::elo_team("France");
  // Values without short decimal forms exercise round-trip precision.
  france.attack.coefficients.alpha = {1.0 / 3.0, 0.1 + 0.2, std::nextafter(0.2361780, 1.0)};
  france.attack.coefficients.beta = -std::sqrt(2.0);
  france.attack.log_likelihood = -1234.5678901234567;
  france.attack.gradient_norm = 3.2e-7;
  france.attack.iterations = 41;
  france.attack.starts_converged = 5;
  france.attack.n_observations = 180;
  france.attack.gof = GofResult{12.345678901, 7, 0.0891234567, 180, 2};
  france.nested.fallback = true;
  france.nested.converged = false;
  france.nested.warnings = {"covariate 'opponent goals' is constant", "second, with comma"};

  auto cote = fixtures::elo_team("Côte d'Ivoire");
  cote.defense.coefficients.gamma_log = -1e-300;

  ModelFile file;
  file.metadata = {{"seed", "7"}, {"window", "2014-01-01..2021-06-07"}};
  file.models.insert(france);
  file.models.insert(cote);
  return file;
}

nlohmann::json sample_json() { return nlohmann::json::parse(serialize_models(sample_file())); }

void expect_rejected(const nlohmann::json& doc, const std::string& fragment) {
  try {
    deserialize_models(doc.dump(), "m.json");
    ADD_FAILURE() << "expected ConfigError containing '" << fragment << "'";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("m.json"), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(ModelIo, RoundTripIsBitExact) {
  const auto file = sample_file();
  const auto back = deserialize_models(serialize_models(file));
  EXPECT_EQ(back.metadata, file.metadata);
  ASSERT_EQ(back.models.models().size(), 2u);
  for (const auto& [team, model] : file.models.models()) EXPECT_EQ(back.models.at(team), model) << team;
  EXPECT_EQ(serialize_models(back), serialize_models(file));
}

TEST(ModelIo, DocumentShape) {
  const auto doc = sample_json();
  EXPECT_EQ(doc.at("format"), kModelFormat);
  EXPECT_EQ(doc.at("version"), kModelFormatVersion);
  EXPECT_EQ(doc.at("metadata").at("seed"), "7");
  const auto& regs = doc.at("teams").at(1).at("regressions");
  ASSERT_EQ(regs.size(), 3u);
  EXPECT_EQ(regs.at(0).at("kind"), "attack");
  EXPECT_EQ(regs.at(0).at("alpha").size(), 3u);
  EXPECT_EQ(regs.at(2).at("alpha").size(), 4u);
  EXPECT_EQ(regs.at(0).at("gof").at("df"), 7);
  EXPECT_TRUE(regs.at(1).at("gof").is_null());
}

TEST(ModelIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "zigpcast_model_io";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "models.json";
  write_models(path, sample_file());
  const auto back = read_models(path);
  EXPECT_EQ(back.models.at("France"), sample_file().models.at("France"));
  EXPECT_THROW(read_models(dir / "absent.json"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(ModelIo, RejectsMalformedDocuments) {
  EXPECT_THROW(deserialize_models("{ not json", "m.json"), ConfigError);

  auto doc = sample_json();
  doc["format"] = "something-else";
  expect_rejected(doc, "format must be");

  doc = sample_json();
  doc["version"] = 99;
  expect_rejected(doc, "unsupported version 99");

  doc = sample_json();
  doc["teams"][0]["regressions"][0]["alpha"].push_back(1.0);
  expect_rejected(doc, "needs 3 alpha coefficients, got 4");

  doc = sample_json();
  doc["teams"][0]["regressions"].erase(2);
  expect_rejected(doc, "lacks one of");

  doc = sample_json();
  doc["teams"][0]["regressions"][1]["kind"] = "attack";
  expect_rejected(doc, "listed twice");

  doc = sample_json();
  doc["teams"].push_back(doc["teams"][0]);
  expect_rejected(doc, "listed twice");

  doc = sample_json();
  doc["teams"][0]["regressions"][0].erase("beta");
  expect_rejected(doc, "beta");
}
