#include "kppopt/io.hpp"

#include <cstdio>

#include "kppopt/errors.hpp"

namespace kppopt {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

nlohmann::json to_json(const ResourceProfile& m) {
  return nlohmann::json{{"kappa", m.kappa()},
                        {"breakpoints", m.breakpoints()},
                        {"values", m.values()}};
}

ResourceProfile profile_from_json(const nlohmann::json& j) {
  try {
    return ResourceProfile(j.at("breakpoints").get<std::vector<double>>(),
                           j.at("values").get<std::vector<double>>(),
                           j.at("kappa").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed profile JSON: ") + e.what());
  }
}

}  // namespace kppopt
