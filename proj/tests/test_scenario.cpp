#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ethrisk/config.hpp"
#include "ethrisk/errors.hpp"
#include "ethrisk/scenario.hpp"

namespace ethrisk {
namespace {

using nlohmann::json;

json minimal() {
  return json{{"name", "mini"},
              {"duration_s", 5.0},
              {"reference_path", json::array({{0.0, 0.0}, {50.0, 0.0}})},
              {"ego", {{"l_m", 0.0}, {"speed_mps", 5.0}}},
              {"destination", {{"from_l_m", 40.0}, {"to_l_m", 50.0}}}};
}

json with_agent(json agent) {
  json doc = minimal();
  doc["agents"] = json::array({std::move(agent)});
  return doc;
}

json waypoint_agent() {
  return {{"id", "w"},
          {"class", "pedestrian"},
          {"trajectory",
           {{"type", "waypoints"},
            {"points", json::array({{{"t_s", 0.0}, {"x_m", 10.0}, {"y_m", -3.0}},
                                    {{"t_s", 2.0}, {"x_m", 10.0}, {"y_m", 1.0}}})}}}};
}

std::string validation_message(const json& doc) {
  try {
    parse_scenario(doc.dump());
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseScenario, MinimalScenario) {
  const Scenario sc = parse_scenario(minimal().dump());
  EXPECT_EQ(sc.name, "mini");
  EXPECT_TRUE(sc.agents.empty());
  EXPECT_DOUBLE_EQ(sc.duration, 5.0);
  EXPECT_DOUBLE_EQ(sc.road_width, 4.5);
  EXPECT_NEAR(sc.path->length(), 50.0, 1e-12);
  EXPECT_NEAR(sc.ego.speed, 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(sc.ego.wheelbase, 2.8);
}

TEST(ParseScenario, ClassDefaults) {
  json cyclist = {{"id", "c"},
                  {"class", "cyclist"},
                  {"trajectory", {{"type", "frenet_constant_velocity"}, {"l_m", 10.0}, {"speed_mps", 4.0}}}};
  const Scenario sc = parse_scenario(with_agent(cyclist).dump());
  ASSERT_EQ(sc.agents.size(), 1u);
  EXPECT_EQ(sc.agents[0].cls, AgentClass::kCyclist);
  EXPECT_DOUBLE_EQ(sc.agents[0].mass, 90.0);
  EXPECT_DOUBLE_EQ(sc.agents[0].half_length, 0.9);
  EXPECT_DOUBLE_EQ(sc.agents[0].half_width, 0.3);
  EXPECT_DOUBLE_EQ(sc.agents[0].prediction_noise, 0.2);
}

TEST(ParseScenario, WaypointTrackHoldsLastState) {
  const Scenario sc = parse_scenario(with_agent(waypoint_agent()).dump());
  const auto mid = sc.agents[0].state_at(*sc.path, 1.0);
  EXPECT_NEAR(mid.position.x, 10.0, 1e-12);
  EXPECT_NEAR(mid.position.y, -1.0, 1e-12);
  EXPECT_NEAR(mid.speed, 2.0, 1e-12);
  EXPECT_NEAR(mid.heading, M_PI / 2, 1e-12);
  const auto late = sc.agents[0].state_at(*sc.path, 4.5);
  EXPECT_NEAR(late.position.y, 1.0, 1e-12);
  EXPECT_EQ(late.speed, 0.0);
  EXPECT_NEAR(late.heading, M_PI / 2, 1e-12);
}

TEST(ParseScenario, ConstantVelocityAndFrenetTracks) {
  json cv = {{"id", "car"},
             {"class", "vehicle"},
             {"trajectory",
              {{"type", "constant_velocity"}, {"x_m", 40.0}, {"y_m", 3.5}, {"heading_rad", M_PI}, {"speed_mps", 10.0}}}};
  const Scenario sc = parse_scenario(with_agent(cv).dump());
  const auto s = sc.agents_at(1.5);
  EXPECT_NEAR(s[0].position.x, 25.0, 1e-9);
  EXPECT_NEAR(s[0].position.y, 3.5, 1e-9);

  json ft = {{"id", "f"},
             {"class", "vehicle"},
             {"trajectory", {{"type", "frenet_constant_velocity"}, {"l_m", 45.0}, {"d_m", -1.0}, {"speed_mps", 4.0}}}};
  const Scenario sf = parse_scenario(with_agent(ft).dump());
  const auto beyond = sf.agents_at(5.0)[0];
  EXPECT_NEAR(beyond.position.x, 65.0, 1e-9);
  EXPECT_NEAR(beyond.position.y, -1.0, 1e-9);
}

TEST(ParseScenario, MalformedNoiseNamesTheField) {
  json a = waypoint_agent();
  a["prediction_noise_m"] = -0.1;
  EXPECT_NE(validation_message(with_agent(a)).find("agents[0].prediction_noise_m"), std::string::npos);
  a["prediction_noise_m"] = "wide";
  EXPECT_NE(validation_message(with_agent(a)).find("agents[0].prediction_noise_m"), std::string::npos);
}

TEST(ParseScenario, ValidationErrorsNameTheInvariant) {
  json doc = minimal();
  doc["reference_path"] = json::array({{0.0, 0.0}});
  EXPECT_NE(validation_message(doc).find("reference_path"), std::string::npos);

  doc = minimal();
  doc["destination"] = {{"from_l_m", 40.0}, {"to_l_m", 80.0}};
  EXPECT_NE(validation_message(doc).find("destination"), std::string::npos);

  doc = minimal();
  doc["surprise"] = 1;
  EXPECT_NE(validation_message(doc).find("scenario.surprise: unknown field"), std::string::npos);

  doc = minimal();
  doc["dt_s"] = 0.05;
  EXPECT_NE(validation_message(doc).find("dt_s"), std::string::npos);

  doc = minimal();
  doc["ego"] = {{"x_m", 0.0}, {"y_m", 0.0}, {"l_m", 0.0}};
  EXPECT_NE(validation_message(doc).find("ego"), std::string::npos);

  doc = minimal();
  doc["ego"] = {{"x_m", 10.0}, {"y_m", 30.0}, {"heading_rad", 0.0}, {"speed_mps", 1.0}};
  EXPECT_NE(validation_message(doc).find("corridor"), std::string::npos);

  json a = waypoint_agent();
  a["trajectory"]["points"][1]["t_s"] = 0.0;
  EXPECT_NE(validation_message(with_agent(a)).find("strictly increasing"), std::string::npos);
  a = waypoint_agent();
  a["trajectory"]["points"][0]["t_s"] = 0.5;
  EXPECT_NE(validation_message(with_agent(a)).find("start at 0"), std::string::npos);
  a = waypoint_agent();
  a["class"] = "tram";
  EXPECT_NE(validation_message(with_agent(a)).find("agents[0].class"), std::string::npos);

  doc = with_agent(waypoint_agent());
  doc["agents"].push_back(waypoint_agent());
  EXPECT_NE(validation_message(doc).find("duplicate agent id"), std::string::npos);

  doc = minimal();
  doc["policies"] = {{"lane_keep", json::array({{2.0, 0.0, 5.0}})}};
  EXPECT_NE(validation_message(doc).find("reserved"), std::string::npos);
  doc["policies"] = {{"fast", json::array({{2.0, 0.0, 50.0}})}};
  EXPECT_NE(validation_message(doc).find("policies.fast"), std::string::npos);
  doc["policies"] = {{"left", json::array({{2.0, 3.0, 5.0}})}};
  EXPECT_NE(validation_message(doc).find("lateral target"), std::string::npos);
}

TEST(ParseScenario, SyntaxErrorsReportLineAndColumn) {
  try {
    parse_scenario("{\n  \"name\": \"x\",\n  oops\n}", "bad.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
  }
}

TEST(LoadScenario, BundledScenariosValidate) {
  const std::filesystem::path dir = std::filesystem::path(ETHRISK_SOURCE_DIR) / "scenarios";
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const Scenario sc = load_scenario(entry.path());
    EXPECT_EQ(sc.name, entry.path().stem().string());
    EXPECT_GT(sc.destination_to, sc.destination_from);
    ++count;
  }
  EXPECT_GE(count, 6);
  EXPECT_THROW(load_scenario(dir / "does_not_exist.json"), IoError);
}

TEST(RunConfig, ParsesSectionsAndRejectsUnknownFields) {
  const RunConfig cfg = parse_run_config(R"({
    "mode": "selfish",
    "cost": {"w_selfish": 5.0, "gamma_maximin": 1.5},
    "lagrange": {"cost_limit": 0.75, "aggregation": "discounted", "discount": 0.9},
    "reward": {"desired_speed_mps": 12.0},
    "replay": {"enabled": true, "capacity": 64}
  })");
  EXPECT_EQ(cfg.mode, RunMode::kSelfish);
  EXPECT_EQ(cfg.effective_cost().mode, CostMode::kSelfish);
  EXPECT_DOUBLE_EQ(cfg.cost.w_selfish, 5.0);
  EXPECT_DOUBLE_EQ(cfg.lagrange.cost_limit, 0.75);
  EXPECT_EQ(cfg.aggregation, CostAggregation::kDiscounted);
  EXPECT_DOUBLE_EQ(cfg.discount, 0.9);
  ASSERT_TRUE(cfg.desired_speed.has_value());
  EXPECT_DOUBLE_EQ(*cfg.desired_speed, 12.0);
  EXPECT_TRUE(cfg.replay_enabled);
  EXPECT_EQ(cfg.replay.capacity, 64u);

  EXPECT_THROW(parse_run_config(R"({"cost": {"w_typo": 1}})"), ValidationError);
  EXPECT_THROW(parse_run_config(R"({"mode": "reckless"})"), ValidationError);
  EXPECT_THROW(parse_run_config(R"({"cost": {"gamma_maximin": 0.5}})"), ValidationError);
  EXPECT_THROW(parse_run_config("{"), ParseError);
}

}  // namespace
}  // namespace ethrisk
