#include "glct/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace glct {

namespace {

nlohmann::json row_json(const MultReport& r) {
  nlohmann::json j;
  j["verifier"] = r.verifier;
  j["q"] = r.q;
  j["n"] = r.n;
  j["pi"] = r.pi;
  j["chi"] = r.chi;
  j["subgroup"] = r.subgroup;
  j["tower"] = r.tower;
  j["theta_orbit"] = r.theta_orbit;
  if (r.chi1 >= 0) j["chi1"] = r.chi1;
  if (r.chi2 >= 0) j["chi2"] = r.chi2;
  if (r.m >= 0) j["m"] = r.m;
  if (r.m_E >= 0) j["m_E"] = r.m_E;
  if (r.m_tilde >= 0) j["m_tilde"] = r.m_tilde;
  if (r.predicted >= 0) j["predicted"] = r.predicted;
  if (r.computed >= 0) j["computed"] = r.computed;
  j["method"] = r.method;
  j["pass"] = r.pass;
  j["counterexamples"] = r.counterexamples;
  j["wall_ms"] = r.wall_ms;
  return j;
}

} // namespace

std::string report_to_json(const MultReport& rep) { return row_json(rep).dump(2); }

std::string report_to_json(const VerifyReport& rep) {
  nlohmann::json j;
  j["verifier"] = rep.verifier;
  j["pass"] = rep.pass;
  j["cases"] = nlohmann::json::array();
  for (const MultReport& row : rep.rows) j["cases"].push_back(row_json(row));
  j["wall_ms"] = rep.wall_ms;
  return j.dump(2);
}

std::string report_to_csv(const VerifyReport& rep) {
  std::ostringstream os;
  os << "verifier,q,n,theta_orbit_rep,chi1,chi2,predicted,computed,pass,wall_ms\n";
  for (const MultReport& r : rep.rows) {
    os << r.verifier << "," << r.q << "," << r.n << "," << r.theta_orbit << ",";
    if (r.chi1 >= 0) os << r.chi1;
    os << ",";
    if (r.chi2 >= 0) os << r.chi2;
    os << ",";
    if (r.predicted >= 0) os << r.predicted;
    os << ",";
    if (r.computed >= 0) os << r.computed;
    os << "," << (r.pass ? "1" : "0") << "," << r.wall_ms << "\n";
  }
  return os.str();
}

void save_green_stamp(const std::string& cache_dir, const GreenGate& gate) {
  std::filesystem::create_directories(cache_dir);
  nlohmann::json j;
  j["version"] = 1;
  j["validated"] = gate.validated;
  auto hashes = nlohmann::json::object();
  for (const GreenGroupSpec& spec : green_reference_groups()) {
    FieldTower T(spec.q, spec.degrees);
    hashes[spec.tag()] = T.descriptor_hash();
  }
  j["tower_hashes"] = hashes;
  std::ofstream out(std::filesystem::path(cache_dir) / "green_stamp.json");
  out << j.dump(2);
}

GreenGate load_green_stamp(const std::string& cache_dir) {
  GreenGate gate;
  std::ifstream in(std::filesystem::path(cache_dir) / "green_stamp.json");
  if (!in) return gate;
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("version") != 1) return gate;
    for (const GreenGroupSpec& spec : green_reference_groups()) {
      FieldTower T(spec.q, spec.degrees);
      if (j.at("tower_hashes").at(spec.tag()) != T.descriptor_hash()) return gate; // stale
    }
    gate.validated = j.at("validated").get<std::vector<std::string>>();
  } catch (...) {
    return GreenGate{};
  }
  return gate;
}

} // namespace glct
