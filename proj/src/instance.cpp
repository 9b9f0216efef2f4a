#include "qhelly/instance.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qhelly {

using nlohmann::json;

namespace {

[[noreturn]] void input_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::InputError, path + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) input_error(path, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) input_error(path, std::string("missing field \"") + name + "\"");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) input_error(path, "expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) input_error(path, "expected a positive integer");
  return v.get<std::size_t>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) input_error(path, "expected an array");
  if (v.empty()) input_error(path, "must not be empty");
  return v;
}

HalfSpace parse_halfspace(const json& v, std::size_t dim, const std::string& path) {
  const json& a = array(field(v, "a", path), path + ".a");
  if (a.size() != dim) {
    input_error(path + ".a", "has " + std::to_string(a.size()) + " entries, expected " + std::to_string(dim));
  }
  Vector normal(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    normal(static_cast<Eigen::Index>(i)) = number(a[i], path + ".a[" + std::to_string(i) + "]");
  const double offset = number(field(v, "b", path), path + ".b");
  try {
    return HalfSpace(normal, offset);
  } catch (const Error& e) {
    input_error(path, e.detail());
  }
}

json generator_json(const GeneratorSpec& g) {
  return {{"kind", to_string(g.kind)},
          {"seed", g.seed},
          {"dimension", g.dimension},
          {"class_count", g.resolved_class_count()},
          {"members_per_class", g.members_per_class},
          {"target_volume", g.target_volume},
          {"facets", g.facets},
          {"slack", g.slack},
          {"hypothesis_k", g.hypothesis_k},
          {"spread", g.spread},
          {"max_attempts", g.max_attempts}};
}

GeneratorSpec parse_generator(const json& v) {
  const std::string path = "generator";
  GeneratorSpec g;
  if (!field(v, "kind", path).is_string()) input_error(path + ".kind", "expected a string");
  g.kind = generator_kind_from_string(v["kind"].get<std::string>());
  const json& seed = field(v, "seed", path);
  if (!seed.is_number_unsigned()) input_error(path + ".seed", "expected an unsigned integer");
  g.seed = seed.get<std::uint64_t>();
  g.dimension = count(field(v, "dimension", path), path + ".dimension");
  g.class_count = count(field(v, "class_count", path), path + ".class_count");
  g.members_per_class = count(field(v, "members_per_class", path), path + ".members_per_class");
  g.target_volume = number(field(v, "target_volume", path), path + ".target_volume");
  if (v.contains("facets")) g.facets = v["facets"].get<std::size_t>();
  if (v.contains("slack")) g.slack = number(v["slack"], path + ".slack");
  if (v.contains("hypothesis_k")) g.hypothesis_k = v["hypothesis_k"].get<std::size_t>();
  if (v.contains("spread")) g.spread = number(v["spread"], path + ".spread");
  if (v.contains("max_attempts")) g.max_attempts = v["max_attempts"].get<std::size_t>();
  return g;
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::CommonBall: return "common-ball";
    case GeneratorKind::TangentHalfspaces: return "tangent-halfspaces";
    case GeneratorKind::NestedBoxes: return "nested-boxes";
    case GeneratorKind::Adversarial: return "adversarial";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::CommonBall, GeneratorKind::TangentHalfspaces, GeneratorKind::NestedBoxes,
                 GeneratorKind::Adversarial})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::InputError, "unknown generator kind \"" + name + "\"");
}

std::size_t GeneratorSpec::resolved_class_count() const {
  return class_count ? class_count : dimension * (dimension + 3) / 2;
}

ColorClasses Instance::color_classes(bool validate) const {
  try {
    return ColorClasses(dimension, classes, validate);
  } catch (const Error& e) {
    throw Error(ErrorKind::InputError, e.detail());
  }
}

Instance parse_instance_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InputError, std::string("malformed JSON: ") + e.what());
  }
  Instance inst;
  inst.dimension = count(field(root, "dimension", "<root>"), "dimension");
  if (root.is_object() && root.contains("target_volume")) {
    inst.target_volume = number(root["target_volume"], "target_volume");
    if (!(inst.target_volume > 0.0)) input_error("target_volume", "must be positive");
  }
  const json& classes = array(field(root, "classes", "<root>"), "classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string cpath = "classes[" + std::to_string(i) + "]";
    const json& members = array(classes[i], cpath);
    std::vector<HPolytope> bodies;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const std::string bpath = cpath + "[" + std::to_string(j) + "]";
      const json& constraints = array(members[j], bpath);
      std::vector<HalfSpace> hs;
      for (std::size_t k = 0; k < constraints.size(); ++k)
        hs.push_back(parse_halfspace(constraints[k], inst.dimension, bpath + "[" + std::to_string(k) + "]"));
      bodies.emplace_back(inst.dimension, std::move(hs));
    }
    inst.classes.push_back(std::move(bodies));
  }
  if (root.contains("generator")) inst.generator = parse_generator(root["generator"]);
  inst.color_classes(true);
  return inst;
}

Instance parse_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InputError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

std::string emit_instance(const Instance& instance) {
  json root;
  root["dimension"] = instance.dimension;
  root["target_volume"] = instance.target_volume;
  if (instance.generator) root["generator"] = generator_json(*instance.generator);
  json classes = json::array();
  for (const auto& cls : instance.classes) {
    json members = json::array();
    for (const auto& body : cls) {
      json constraints = json::array();
      for (const auto& h : body.halfspaces()) {
        std::vector<double> a(h.normal().data(), h.normal().data() + h.normal().size());
        constraints.push_back({{"a", a}, {"b", h.offset()}});
      }
      members.push_back(std::move(constraints));
    }
    classes.push_back(std::move(members));
  }
  root["classes"] = std::move(classes);
  return root.dump(2) + "\n";
}

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InputError, "cannot write " + path.string());
  out << emit_instance(instance);
}

}  // namespace qhelly
