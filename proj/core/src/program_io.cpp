#include "cusmuda/program.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cusmuda {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json vector_to_json(const Vector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return data;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::invalid_argument(where + ": matrix data length does not match rows*cols");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  return m;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

std::string program_to_json(const MultistageProgram& program) {
  json doc;
  doc["T"] = program.num_stages();
  doc["x0"] = vector_to_json(program.x0);
  json stages = json::array();
  for (const auto& dist : program.stages) {
    json s;
    if (!dist.free_vars.empty()) {
      json fv = json::array();
      for (bool b : dist.free_vars) fv.push_back(b);
      s["free_vars"] = std::move(fv);
    }
    if (dist.recourse_lower_bound != -kInf) s["recourse_lower_bound"] = dist.recourse_lower_bound;
    json reals = json::array();
    for (const auto& r : dist.realizations) {
      reals.push_back(json{{"probability", r.probability},
                           {"c", vector_to_json(r.c)},
                           {"A", matrix_to_json(r.A)},
                           {"B", matrix_to_json(r.B)},
                           {"b_eq", vector_to_json(r.b_eq)},
                           {"G", matrix_to_json(r.G)},
                           {"H", matrix_to_json(r.H)},
                           {"b_le", vector_to_json(r.b_le)}});
    }
    s["realizations"] = std::move(reals);
    stages.push_back(std::move(s));
  }
  doc["stages"] = std::move(stages);
  return doc.dump(1);
}

MultistageProgram program_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("program: ") + e.what());
  }
  MultistageProgram program;
  try {
    program.x0 = vector_from_json(doc.at("x0"));
    const auto& stages = doc.at("stages");
    if (doc.contains("T") && doc.at("T").get<std::size_t>() != stages.size())
      throw std::invalid_argument("program: T does not match the number of stages");
    int t = 0;
    for (const auto& s : stages) {
      ++t;
      StageDistribution dist;
      if (s.contains("free_vars"))
        for (const auto& b : s.at("free_vars")) dist.free_vars.push_back(b.get<bool>());
      if (s.contains("recourse_lower_bound")) dist.recourse_lower_bound = s.at("recourse_lower_bound").get<double>();
      int j = 0;
      for (const auto& r : s.at("realizations")) {
        ++j;
        const std::string where = "stage " + std::to_string(t) + ", realization " + std::to_string(j);
        StageRealization sr;
        sr.probability = r.at("probability").get<double>();
        sr.c = vector_from_json(r.at("c"));
        sr.A = matrix_from_json(r.at("A"), where + " A");
        sr.B = matrix_from_json(r.at("B"), where + " B");
        sr.b_eq = vector_from_json(r.at("b_eq"));
        sr.G = matrix_from_json(r.at("G"), where + " G");
        sr.H = matrix_from_json(r.at("H"), where + " H");
        sr.b_le = vector_from_json(r.at("b_le"));
        dist.realizations.push_back(std::move(sr));
      }
      program.stages.push_back(std::move(dist));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("program: ") + e.what());
  }
  return program;
}

void write_program(const MultistageProgram& program, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << program_to_json(program) << '\n';
}

MultistageProgram read_program(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return program_from_json(ss.str());
}

}  // namespace cusmuda
