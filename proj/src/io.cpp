#include "pcx/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pcx {

using nlohmann::json;

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::vector<std::vector<double>> read_rows(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw InvalidInput(std::string(what) + " must be an array of rows");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) throw InvalidInput(std::string(what) + " entries must be numbers");
      r.push_back(x.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PcxInstance parse_instance(const std::string& text) {
  json j = parse_json(text);
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  try {
    Variant v = parse_variant(j.at("variant").get<std::string>());
    const json* matrix = nullptr;
    const json* points = nullptr;
    if (j.contains("matrix")) matrix = &j["matrix"];
    if (j.contains("points")) {
      if (j["points"].is_object()) matrix = &j["points"].at("matrix");
      else points = &j["points"];
    }
    if (!matrix && !points) throw InvalidInput("instance needs points or a matrix");

    std::shared_ptr<const MetricSpace> space;
    if (points) {
      auto coords = read_rows(*points, "points");
      if (coords.empty()) throw InvalidInput("instance has no points");
      const std::size_t dim = coords[0].size();
      for (const auto& c : coords)
        if (c.size() != dim || dim == 0) throw InvalidInput("points must share one positive dimension");
      int k = j.contains("k") ? j["k"].get<int>() : static_cast<int>(dim);
      space = std::make_shared<const MetricSpace>(MetricSpace::from_coordinates(std::move(coords), k));
    } else {
      int k = j.contains("k") ? j["k"].get<int>() : 1;
      space = std::make_shared<const MetricSpace>(MetricSpace::from_matrix(read_rows(*matrix, "matrix"), k));
    }

    std::vector<PointId> terminals;
    if (j.contains("terminals")) {
      terminals = j["terminals"].get<std::vector<PointId>>();
    } else {
      for (PointId p = 0; p < space->size(); ++p) terminals.push_back(p);
    }
    const json& pj = j.at("penalties");
    if (!pj.is_array()) throw InvalidInput("penalties must be an array");
    std::vector<double> penalties;
    for (const auto& x : pj) {
      if (x.is_null()) penalties.push_back(kMustVisit);
      else if (x.is_number()) penalties.push_back(x.get<double>());
      else throw InvalidInput("penalties must be numbers or null");
    }
    return PcxInstance(v, space, terminals, penalties);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad instance field: ") + e.what());
  }
}

std::string format_instance(const PcxInstance& inst) {
  json j;
  j["variant"] = variant_name(inst.variant());
  const MetricSpace& sp = inst.space();
  if (sp.has_coordinates()) {
    j["points"] = sp.coordinates();
  } else {
    std::vector<std::vector<double>> m(sp.size(), std::vector<double>(sp.size()));
    for (PointId a = 0; a < sp.size(); ++a)
      for (PointId b = 0; b < sp.size(); ++b) m[a][b] = sp.dist(a, b);
    j["points"] = {{"matrix", m}};
  }
  j["terminals"] = inst.terminals();
  json pen = json::array();
  for (PointId t : inst.terminals()) pen.push_back(number_or_null(inst.penalty(t)));
  j["penalties"] = pen;
  j["k"] = sp.doubling_dimension();
  return j.dump() + "\n";
}

PcxInstance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

void save_instance(const PcxInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << format_instance(inst);
}

std::string format_solution(const Solution& f, double cost) {
  json j;
  json edges = json::array();
  for (const Edge& e : f.edges) edges.push_back({e.a, e.b});
  j["edges"] = edges;
  j["self_loops"] = f.self_loops;
  j["cost"] = number_or_null(cost);
  return j.dump();
}

Solution parse_solution(const std::string& text) {
  json j = parse_json(text);
  try {
    Solution f;
    for (const auto& e : j.at("edges")) f.edges.emplace_back(e.at(0).get<PointId>(), e.at(1).get<PointId>());
    if (j.contains("self_loops")) f.self_loops = j["self_loops"].get<std::vector<PointId>>();
    return f;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad solution field: ") + e.what());
  }
}

std::string format_split_record(const SplitRecord& r) {
  json j;
  j["depth"] = r.depth;
  j["height"] = r.height;
  j["center"] = r.center;
  j["critical_value"] = r.critical_value;
  j["lambda"] = r.lambda;
  j["lambda_fallback"] = r.lambda_fallback;
  json t = json::array();
  for (double x : r.t_table) t.push_back(number_or_null(x));
  j["t_table"] = t;
  j["h"] = r.h;
  j["radius"] = r.radius;
  j["w1_terminals"] = r.w1_terminals;
  j["w2_terminals"] = r.w2_terminals;
  j["f1_solver"] = r.f1_solver;
  j["c1"] = number_or_null(r.c1);
  j["pi2_u"] = number_or_null(r.pi2_u);
  j["c2"] = number_or_null(r.c2);
  j["extended_cost"] = number_or_null(r.extended_cost);
  j["f2_covers_u"] = r.f2_covers_u;
  if (r.next_critical) j["next_critical"] = {r.next_critical->first, r.next_critical->second};
  else j["next_critical"] = nullptr;
  return j.dump();
}

SplitRecord parse_split_record(const std::string& line) {
  json j = parse_json(line);
  auto num = [](const json& x) {
    return x.is_null() ? std::numeric_limits<double>::infinity() : x.get<double>();
  };
  try {
    SplitRecord r;
    r.depth = j.at("depth");
    r.height = j.at("height");
    r.center = j.at("center");
    r.critical_value = j.at("critical_value");
    r.lambda = j.at("lambda");
    r.lambda_fallback = j.at("lambda_fallback");
    for (const auto& x : j.at("t_table")) r.t_table.push_back(num(x));
    r.h = j.at("h");
    r.radius = j.at("radius");
    r.w1_terminals = j.at("w1_terminals").get<std::vector<PointId>>();
    r.w2_terminals = j.at("w2_terminals").get<std::vector<PointId>>();
    r.f1_solver = j.at("f1_solver");
    r.c1 = num(j.at("c1"));
    r.pi2_u = num(j.at("pi2_u"));
    r.c2 = num(j.at("c2"));
    r.extended_cost = num(j.at("extended_cost"));
    r.f2_covers_u = j.at("f2_covers_u");
    if (!j.at("next_critical").is_null())
      r.next_critical = std::make_pair(j["next_critical"].at(0).get<int>(), j["next_critical"].at(1).get<PointId>());
    return r;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad split record: ") + e.what());
  }
}

std::string format_decomposition(const HierarchicalDecomposition& d) {
  json j;
  j["seed"] = d.seed();
  j["s"] = d.tree().nets().s;
  j["top"] = d.top();
  j["chi_base"] = d.options().chi_base;
  j["theta_p"] = d.options().theta_p;
  j["root"] = d.root();
  json clusters = json::array();
  for (const Cluster& c : d.clusters()) {
    json cj;
    cj["id"] = c.id;
    cj["height"] = c.height;
    cj["center"] = c.center;
    cj["radius"] = c.height > 0 && c.height < d.top() ? number_or_null(d.radius(c.height, c.center)) : json(nullptr);
    cj["parent"] = c.parent;
    cj["children"] = c.children;
    cj["points"] = c.points;
    cj["inner_portals"] = d.inner_portals(c.id);
    clusters.push_back(cj);
  }
  j["clusters"] = clusters;
  return j.dump() + "\n";
}

std::string format_dp_stats(const DpStats& stats, int budget_events) {
  json j;
  j["entries"] = stats.entries;
  j["states"] = stats.states;
  j["entries_per_height"] = stats.entries_per_height;
  j["budget_events"] = budget_events;
  return j.dump() + "\n";
}

}  // namespace pcx
