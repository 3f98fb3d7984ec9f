#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "loewner/chains.hpp"
#include "loewner/coefficients.hpp"
#include "loewner/generators.hpp"
#include "loewner/spirallike.hpp"
#include "loewner/transition.hpp"

namespace loewner::io {

using json = nlohmann::ordered_json;

/// Reads a file, or parses the argument itself when it starts with '{' or '['.
/// Parse failures raise SchemaError with line and column.
json load_json(const std::string& path_or_text);
void save_json(const std::string& path, const json& j);
std::string dump(const json& j);

/// {"n": int, "re": [[...]], "im": [[...]]}; "im" may be omitted.
json to_json(const CMatrix& M);
CMatrix matrix_from_json(const json& j, const std::string& where = "A");

/// {"re": [...], "im": [...]}
json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j, const std::string& where);

/// {"n", "k", "terms": [{"m": [...], "s": int, "re", "im"}]}, s is 0-based,
/// zero terms omitted.
json to_json(const HomPolyMap& Q);
HomPolyMap poly_from_json(const json& j, const std::string& where = "poly");

/// {"kind": "constant" | "exp_decay" | "window" | "oscillation" | "table", ...}
json to_json(const TimeFunction& a);
TimeFunction time_function_from_json(const json& j, const std::string& where = "a");

/// {"A": matrix, "form": "polynomial" | "time_dependent" | "pushforward", ...}
json to_json(const GeneratorSpec& h);
GeneratorSpec generator_from_json(const json& j);

/// FNV-1a over the compact serialization.
std::uint64_t generator_hash(const GeneratorSpec& h);
std::string hex(std::uint64_t v);

json to_json(const OperatorA& A);
json to_json(const ResonanceReport& r);
json to_json(const SpectralSplit& s);
json to_json(const TruncatedMap& f);
json to_json(const WitnessCertificate& c);
json to_json(const QuadraticAdmissibility& q);
json to_json(const SpirallikeResidualReport& r);
json to_json(const MembershipReport& r);
json to_json(const GrowthReport& r);

/// 17 significant digits.
std::string format_double(double x);
void write_csv_row(std::ostream& os, const std::vector<double>& row);
void write_csv_header(std::ostream& os, const std::vector<std::string>& names);

/// Points as rows Re z_1, Im z_1, ..., Re z_n, Im z_n; a non-numeric first
/// line is treated as a header.
std::vector<CVector> read_points_csv(const std::string& path, int n);

/// t, Re v_1, Im v_1, ...
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
json trajectory_metadata(const Trajectory& traj, const GeneratorSpec& h);

/// Coefficient configuration: {"F0_le": [poly...], "K", "horizon", "cheb_degree",
/// "max_piece", "tail_tol"}. Missing entries take the defaults.
struct CoefficientConfig {
  std::vector<HomPolyMap> F0_le;
  int K = 0;
  CoefficientOptions options;
};
CoefficientConfig coefficient_config_from_json(const json& j, int n);
json to_json(const CoefficientConfig& c);

/// t followed by Re/Im of every coefficient of F_2, ..., F_K.
void write_coefficient_csv(std::ostream& os, const CoefficientSet& set,
                           const std::vector<double>& t_grid);
json coefficient_metadata(const CoefficientSet& set, const GeneratorSpec& h);

}  // namespace loewner::io
