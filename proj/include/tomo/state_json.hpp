#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tomo/states.hpp"

namespace tomo {

// State-spec JSON:
//   {"type":"gaussian","mean_q":0,"mean_p":0,"squeeze":1}
//   {"type":"fock","coeffs":[[re,im],...]}
//   {"type":"mixed","components":[{"weight":w,"state":{...}},...]}
// Field names are exact; unknown fields are rejected with InputError.

StateSpec state_from_json(const nlohmann::json& j,
                          std::size_t max_cutoff = kDefaultMaxCutoff);
nlohmann::json state_to_json(const StateSpec& state);
nlohmann::json state_to_json(const PureState& state);

StateSpec load_state(const std::filesystem::path& path,
                     std::size_t max_cutoff = kDefaultMaxCutoff);

/// Short human-readable label ("gaussian(q=0,p=0,s=1)", "fock[3]", ...).
std::string state_label(const StateSpec& state);

}  // namespace tomo
