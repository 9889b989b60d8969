#include "uavplan/scenario_io.hpp"

#include <fstream>
#include <json.hpp>

#include "uavplan/errors.hpp"

namespace uavplan {

namespace {

using nlohmann::json;

json task_to_json(const Task& t) {
  json j;
  j["id"] = t.id;
  j["x"] = t.position.x;
  j["y"] = t.position.y;
  j["type"] = type_name(t.type);
  json params = json::object();
  if (const auto* p = std::get_if<PointConstrainedTask>(&t.type)) {
    j["heading"] = p->entry_heading;
  } else if (const auto* l = std::get_if<LineTask>(&t.type)) {
    params["bx"] = l->endpoint_b.x;
    params["by"] = l->endpoint_b.y;
  } else if (const auto* c = std::get_if<CircleTask>(&t.type)) {
    params["radius"] = c->radius;
    params["sweeps"] = c->sweeps;
  } else if (const auto* a = std::get_if<AreaTask>(&t.type)) {
    params["width"] = a->width;
    params["height"] = a->height;
    params["orientation"] = a->orientation;
    params["lane_spacing"] = a->lane_spacing;
  }
  j["params"] = params;
  return j;
}

template <typename T>
T require(const json& j, const char* field, const char* where) {
  if (!j.contains(field))
    throw ScenarioError(std::string("scenario parse: missing field '") + field + "' in " +
                        where);
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ScenarioError(std::string("scenario parse: bad value for field '") + field +
                        "' in " + where);
  }
}

Task task_from_json(const json& j) {
  Task t;
  t.id = require<int>(j, "id", "task");
  t.position.x = require<double>(j, "x", "task");
  t.position.y = require<double>(j, "y", "task");
  t.created_at = 0.0;
  const auto type = require<std::string>(j, "type", "task");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (type == "point_free") {
    t.type = PointFreeTask{};
  } else if (type == "point_constrained") {
    t.type = PointConstrainedTask{require<double>(j, "heading", "task")};
  } else if (type == "line") {
    t.type = LineTask{{require<double>(params, "bx", "line params"),
                       require<double>(params, "by", "line params")}};
  } else if (type == "circle") {
    t.type = CircleTask{require<double>(params, "radius", "circle params"),
                        require<int>(params, "sweeps", "circle params")};
  } else if (type == "area") {
    t.type = AreaTask{require<double>(params, "width", "area params"),
                      require<double>(params, "height", "area params"),
                      require<double>(params, "orientation", "area params"),
                      require<double>(params, "lane_spacing", "area params")};
  } else {
    throw ScenarioError("scenario parse: unknown task type '" + type + "'");
  }
  return t;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["k"] = s.uav_count;
  j["n"] = s.task_count;
  j["area_side"] = s.area_side;
  j["base"] = {{"x", s.base.x}, {"y", s.base.y}, {"theta", s.base.theta}};
  j["uav_speed"] = s.uav_speed;
  j["turn_radius"] = s.turn_radius;
  j["seed"] = s.seed;
  json tasks = json::array();
  for (const auto& t : s.tasks) tasks.push_back(task_to_json(t));
  j["tasks"] = std::move(tasks);
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse: ") + e.what());
  }
  Scenario s;
  s.uav_count = require<int>(j, "k", "scenario");
  s.task_count = require<int>(j, "n", "scenario");
  s.area_side = require<double>(j, "area_side", "scenario");
  const json base = j.contains("base") ? j.at("base") : json::object();
  s.base = Pose{require<double>(base, "x", "base"), require<double>(base, "y", "base"),
                require<double>(base, "theta", "base")};
  s.uav_speed = require<double>(j, "uav_speed", "scenario");
  s.turn_radius = require<double>(j, "turn_radius", "scenario");
  s.seed = require<uint64_t>(j, "seed", "scenario");
  if (!j.contains("tasks") || !j.at("tasks").is_array())
    throw ScenarioError("scenario parse: missing field 'tasks'");
  for (const auto& tj : j.at("tasks")) s.tasks.push_back(task_from_json(tj));
  validate_scenario(s);
  return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot open scenario file for writing: " + path);
  out << scenario_to_json(s);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_json(text);
}

}  // namespace uavplan
