#include "tomo/state_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "tomo/errors.hpp"

namespace tomo {

using nlohmann::json;

namespace {

void require_fields(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view context) {
  if (!j.is_object()) throw InputError(std::string(context) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) {
      throw InputError(std::string(context) + ": unknown field \"" + key + "\"");
    }
  }
  for (std::string_view a : allowed) {
    if (!j.contains(std::string(a))) {
      throw InputError(std::string(context) + ": missing field \"" + std::string(a) + "\"");
    }
  }
}

double number_field(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

PureState pure_from_json(const json& j, std::size_t max_cutoff) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InputError("state: expected an object with a string \"type\"");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian") {
    require_fields(j, {"type", "mean_q", "mean_p", "squeeze"}, "gaussian state");
    return PureState::gaussian(number_field(j, "mean_q"), number_field(j, "mean_p"),
                               number_field(j, "squeeze"));
  }
  if (type == "fock") {
    require_fields(j, {"type", "coeffs"}, "fock state");
    const json& arr = j.at("coeffs");
    if (!arr.is_array()) throw InputError("fock state: \"coeffs\" must be an array");
    std::vector<cplx> coeffs;
    coeffs.reserve(arr.size());
    for (const json& pair : arr) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        throw InputError("fock state: each coefficient must be [re, im]");
      }
      coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return PureState::fock(std::move(coeffs), max_cutoff);
  }
  if (type == "mixed") throw InputError("mixed states cannot be nested inside a mixture");
  throw InputError("unknown state type \"" + type + "\"");
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

StateSpec state_from_json(const json& j, std::size_t max_cutoff) {
  if (j.is_object() && j.contains("type") && j.at("type") == "mixed") {
    require_fields(j, {"type", "components"}, "mixed state");
    const json& arr = j.at("components");
    if (!arr.is_array()) throw InputError("mixed state: \"components\" must be an array");
    std::vector<WeightedState> comps;
    for (const json& c : arr) {
      require_fields(c, {"weight", "state"}, "mixture component");
      comps.push_back({number_field(c, "weight"), pure_from_json(c.at("state"), max_cutoff)});
    }
    return MixedState(std::move(comps));
  }
  return pure_from_json(j, max_cutoff);
}

json state_to_json(const PureState& state) {
  if (const auto* g = state.as_gaussian()) {
    return {{"type", "gaussian"},
            {"mean_q", g->mean_q},
            {"mean_p", g->mean_p},
            {"squeeze", g->squeeze}};
  }
  json coeffs = json::array();
  for (const cplx& c : state.as_fock()->coeffs) coeffs.push_back({c.real(), c.imag()});
  return {{"type", "fock"}, {"coeffs", coeffs}};
}

json state_to_json(const StateSpec& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) return state_to_json(*pure);
  json comps = json::array();
  for (const auto& c : std::get<MixedState>(state).components()) {
    comps.push_back({{"weight", c.weight}, {"state", state_to_json(c.state)}});
  }
  return {{"type", "mixed"}, {"components", comps}};
}

StateSpec load_state(const std::filesystem::path& path, std::size_t max_cutoff) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return state_from_json(j, max_cutoff);
}

namespace {

std::string pure_label(const PureState& s) {
  if (const auto* g = s.as_gaussian()) {
    return "gaussian(q=" + format_number(g->mean_q) + ",p=" + format_number(g->mean_p) +
           ",s=" + format_number(g->squeeze) + ")";
  }
  const auto& c = s.as_fock()->coeffs;
  std::size_t nonzero = 0;
  std::size_t last = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c[n] != cplx{}) {
      ++nonzero;
      last = n;
    }
  }
  if (nonzero == 1) return "fock[" + std::to_string(last) + "]";
  return "fock-superposition(cutoff=" + std::to_string(c.size() - 1) + ")";
}

}  // namespace

std::string state_label(const StateSpec& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) return pure_label(*pure);
  const auto comps = std::get<MixedState>(state).components();
  return "mixed(" + std::to_string(comps.size()) + " components)";
}

}  // namespace tomo
