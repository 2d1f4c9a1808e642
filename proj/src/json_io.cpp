#include "envstat/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "envstat/errors.hpp"

namespace envstat {

namespace {

Eigen::VectorXcd complex_vector(const Json& j, Eigen::Index expected, const char* what) {
  if (!j.contains("re") || !j.contains("im"))
    throw validation_error(std::string(what) + " needs 're' and 'im' arrays");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != expected ||
      static_cast<Eigen::Index>(im.size()) != expected)
    throw validation_error(std::string(what) + ": 're'/'im' must be arrays of length " +
                           std::to_string(expected));
  Eigen::VectorXcd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i)
    v[i] = std::complex<double>(re[i].get<double>(), im[i].get<double>());
  return v;
}

Json complex_payload(const Eigen::VectorXcd& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

int positive_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw validation_error(std::string("missing integer field '") + key + "'");
  const std::int64_t v = j.at(key).get<std::int64_t>();
  if (v < 1) throw validation_error(std::string("field '") + key + "' must be positive");
  return static_cast<int>(v);
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json report_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

Json to_json(const PureState& state) {
  Json j = complex_payload(state.amplitudes());
  j["dimS"] = state.dim_s();
  j["dimE"] = state.dim_e();
  return j;
}

PureState state_from_json(const Json& j) {
  const int dim_s = positive_int(j, "dimS");
  const int dim_e = positive_int(j, "dimE");
  return PureState(dim_s, dim_e,
                   complex_vector(j, static_cast<Eigen::Index>(dim_s) * dim_e, "state"));
}

Json to_json(const UnitaryOp& u) {
  Eigen::VectorXcd flat(u.dim() * static_cast<Eigen::Index>(u.dim()));
  for (int r = 0; r < u.dim(); ++r)
    for (int c = 0; c < u.dim(); ++c) flat[static_cast<Eigen::Index>(r) * u.dim() + c] = u.entries()(r, c);
  Json j = complex_payload(flat);
  j["dim"] = u.dim();
  return j;
}

UnitaryOp unitary_from_json(const Json& j) {
  const int dim = positive_int(j, "dim");
  const Eigen::VectorXcd flat =
      complex_vector(j, static_cast<Eigen::Index>(dim) * dim, "unitary");
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = flat[static_cast<Eigen::Index>(r) * dim + c];
  return UnitaryOp(std::move(m));
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw validation_error("exact energies must be integers or 'p/q' strings");
}

Json to_json(const Hamiltonian& h) {
  Json j{{"dim", h.dim()}};
  if (h.is_diagonal()) {
    Json diag = Json::array();
    for (const Rational& e : h.diagonal_energies()) diag.push_back(format_rational(e));
    j["diagonal"] = std::move(diag);
  } else {
    Eigen::VectorXcd flat(static_cast<Eigen::Index>(h.dim()) * h.dim());
    for (int r = 0; r < h.dim(); ++r)
      for (int c = 0; c < h.dim(); ++c)
        flat[static_cast<Eigen::Index>(r) * h.dim() + c] = h.dense_matrix()(r, c);
    j["dense"] = complex_payload(flat);
  }
  return j;
}

Hamiltonian hamiltonian_from_json(const Json& j) {
  const int dim = positive_int(j, "dim");
  if (j.contains("diagonal")) {
    const auto& diag = j.at("diagonal");
    if (!diag.is_array() || static_cast<int>(diag.size()) != dim)
      throw validation_error("'diagonal' must list one energy per dimension");
    std::vector<Rational> energies;
    for (const auto& e : diag) energies.push_back(rational_from_json(e));
    return Hamiltonian::diagonal(std::move(energies));
  }
  if (j.contains("dense")) {
    const Eigen::VectorXcd flat =
        complex_vector(j.at("dense"), static_cast<Eigen::Index>(dim) * dim, "Hamiltonian");
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = flat[static_cast<Eigen::Index>(r) * dim + c];
    return Hamiltonian::dense(std::move(m));
  }
  throw validation_error("Hamiltonian needs a 'diagonal' or 'dense' field");
}

Json to_json(const Spectrum& spectrum) {
  Json levels = Json::array();
  for (const Level& level : spectrum.levels())
    levels.push_back(Json{{"energy", format_rational(level.energy)},
                          {"degeneracy", level.degeneracy}});
  return Json{{"levels", std::move(levels)}};
}

Spectrum spectrum_from_json(const Json& j) {
  if (!j.contains("levels") || !j.at("levels").is_array() || j.at("levels").empty())
    throw validation_error("spectrum needs a non-empty 'levels' array");
  std::vector<Level> levels;
  for (const auto& entry : j.at("levels")) {
    Level level;
    if (!entry.contains("energy")) throw validation_error("level needs an 'energy'");
    level.energy = rational_from_json(entry.at("energy"));
    level.degeneracy = entry.value("degeneracy", std::int64_t{1});
    levels.push_back(std::move(level));
  }
  return Spectrum(std::move(levels));
}

Json to_json(const BathSpec& bath) {
  Json j = to_json(bath.unit());
  j["N"] = bath.n_units();
  return j;
}

BathSpec bath_from_json(const Json& j, std::optional<std::int64_t> n_override) {
  Spectrum unit = spectrum_from_json(j);
  std::int64_t n = 0;
  if (n_override) {
    n = *n_override;
  } else {
    if (!j.contains("N") || !j.at("N").is_number_integer())
      throw validation_error("bath needs an integer 'N' (or pass --N)");
    n = j.at("N").get<std::int64_t>();
  }
  return BathSpec(std::move(unit), n);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw validation_error(std::string("parse failure in '") + path + "': " + e.what());
  }
}

}  // namespace envstat
