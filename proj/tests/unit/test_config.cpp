#include <doctest.h>

#include <cmath>
#include <fstream>

#include "gazescale/config.hpp"
#include "gazescale/errors.hpp"
#include "support.hpp"

using namespace gazescale;
using nlohmann::json;

TEST_CASE("defaults") {
  const EngineConfig c;
  CHECK(c.alignment.overlap_view_threshold == 0.25);
  CHECK(c.alignment.overlap_object_threshold == 0.15);
  CHECK(c.alignment.dispersion_mode_in == 15.0);
  CHECK(c.alignment.dispersion_mode_out == 17.0);
  CHECK(c.clamps.area == ClampRange{0.001, 1.0});
  CHECK(c.clamps.angle == ClampRange{3.0, 40.0});
  CHECK(c.clamps.span == ClampRange{0.01, 0.15});
  CHECK(c.clamps.depth == ClampRange{0.1, 0.5});
  CHECK(c.clamps.bimanual == ClampRange{0.01, 0.8});
  CHECK(c.frame_rate_hz == 90.0);
  CHECK(c.filter.beta == 90.0);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("json round trip and empty patch") {
  const EngineConfig c;
  const json j = config_to_json(c);
  CHECK(config_to_json(config_from_json(j)) == j);
  CHECK(config_to_json(apply_config_patch(c, json::object())) == j);
}

TEST_CASE("patches") {
  const EngineConfig base;
  const EngineConfig p = apply_config_patch(
      base, {{"dispersion_mode_in", 10.0}, {"clamp_span", {0.02, 0.2}}, {"dominant_hand", "left"}});
  CHECK(p.alignment.dispersion_mode_in == 10.0);
  CHECK(p.clamps.span == ClampRange{0.02, 0.2});
  CHECK(p.dominant_hand == Hand::Left);
  CHECK(p.alignment.dispersion_mode_out == 17.0);

  CHECK_THROWS_AS(apply_config_patch(base, {{"no_such_key", 1}}), ConfigError);
  CHECK_THROWS_AS(apply_config_patch(base, {{"filter_beta", "high"}}), ConfigError);
  CHECK_THROWS_AS(apply_config_patch(base, {{"dispersion_mode_in", 20.0}}), ConfigError);
  CHECK_THROWS_AS(apply_config_patch(base, {{"clamp_depth", {0.5, 0.1}}}), ConfigError);
  CHECK_THROWS_AS(apply_config_patch(base, json::array()), ConfigError);
}

TEST_CASE("load_config") {
  const std::string dir = testing::temp_dir("config");
  {
    std::ofstream(dir + "/defaults.json") << config_to_json(EngineConfig{}).dump(2);
    std::ofstream(dir + "/partial.json") << R"({"pinch_onset": 0.015})";
    std::ofstream(dir + "/broken.json") << "{";
  }
  CHECK(config_to_json(load_config(dir + "/defaults.json")) == config_to_json(EngineConfig{}));
  CHECK(load_config(dir + "/partial.json").pinch_onset == 0.015);
  CHECK_THROWS(load_config(dir + "/broken.json"));
  CHECK_THROWS(load_config(dir + "/missing.json"));
}
