#ifndef GLCT_REPORT_HPP
#define GLCT_REPORT_HPP

#include <string>

#include "glct/mult.hpp"

namespace glct {

std::string report_to_json(const VerifyReport& rep);
std::string report_to_json(const MultReport& rep);
/// columns: verifier,q,n,theta_orbit_rep,chi1,chi2,predicted,computed,pass,wall_ms
std::string report_to_csv(const VerifyReport& rep);

void save_green_stamp(const std::string& cache_dir, const GreenGate& gate);
/// Loads and validates the stamp against freshly derived tower hashes;
/// returns an empty gate when absent or stale.
GreenGate load_green_stamp(const std::string& cache_dir);

} // namespace glct

#endif
