#pragma once

#include "spomdp/bounds.hpp"
#include "spomdp/model.hpp"
#include "spomdp/moments.hpp"
#include "spomdp/pipeline.hpp"
#include "spomdp/recovery.hpp"
#include "spomdp/views.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace spomdp::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* what);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* what);
Json tensor_to_json(const Tensor3& t);
Tensor3 tensor_from_json(const Json& j, const char* what);

// {"version":1,"X","Y","A","R","T","O","Gamma","reward_values"}
Json model_to_json(const PomdpModel& m);
PomdpModel model_from_json(const Json& j);
// {"version":1,"Y","A","Pi"}
Json policy_to_json(const MemorylessPolicy& p);
MemorylessPolicy policy_from_json(const Json& j);

/// One {"t","y","a","r"[,"x"]} object per line.
void write_trajectory(std::ostream& out, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in);

Json views_to_json(const ViewMatrices& v, const ViewEncoding& enc);
Json covariances_to_json(const CovarianceSet& c);
Json moments_to_json(const MomentPair& m);

Json gaps_to_json(const ActionGaps& g);
ActionGaps gaps_from_json(const Json& j);

Json result_to_json(const EstimationResult& r);
EstimationResult result_from_json(const Json& j);

/// state,action,err_O_l1,err_R_l1,err_T_l2
void write_error_csv(std::ostream& out, const ErrorReport& report);
Json errors_to_json(const ErrorReport& report);

/// Exact quantities of a known model: omega, omega^(l), views, covariances,
/// moments, gaps and lambda per action.
Json oracle_bundle(const PomdpModel& model, const MemorylessPolicy& policy);

// File helpers; failures to open, read or write raise IoError, malformed
// content raises ValidationError.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
PomdpModel load_model(const std::filesystem::path& path);
MemorylessPolicy load_policy(const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace spomdp::io
