#pragma once

#include "psps/cpp_sched.hpp"
#include "psps/scenario1.hpp"
#include "psps/scenario2.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace psps {

/// JSON forms of the model artifacts that are not bulk numeric data.
nlohmann::ordered_json state_space_to_json(const StateSpace& space);
StateSpace state_space_from_json(const nlohmann::json& j);

/// Binary artifact container: an 8-byte magic, a little-endian uint32 header
/// length, a JSON header describing the payload, then the payload as raw
/// little-endian doubles in the order the header lists them. Readers reject
/// unknown magics, versions, and kinds instead of guessing.
void save_transitions(const std::string& path, const TransitionModel& model);
TransitionModel load_transitions(const std::string& path);

void save_table(const std::string& path, const PolicyTableS1& table);
void save_table(const std::string& path, const PolicyTableS2& table);
void save_table(const std::string& path, const PolicyTableCpp& table);

PolicyTableS1 load_table_s1(const std::string& path);
PolicyTableS2 load_table_s2(const std::string& path);
PolicyTableCpp load_table_cpp(const std::string& path);

/// Kind string ("s1", "s2", "cpp", "transitions") read from an artifact's
/// header without loading the payload.
std::string artifact_kind(const std::string& path);

}  // namespace psps
