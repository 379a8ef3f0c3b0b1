#pragma once

#include <string>

#include <json.hpp>

#include "blindid/channel.hpp"
#include "blindid/identifiability.hpp"
#include "blindid/sparse_select.hpp"

namespace blindid {

// Channel document: {"M": int, "L": int, "taps": [[...], ...]} with
// taps[l][m] = entry m of tap l. Doubles round-trip exactly.
nlohmann::json channel_to_json(const ChannelVector& h);
ChannelVector channel_from_json(const nlohmann::json& j);

ChannelVector load_channel(const std::string& path);
void save_channel(const ChannelVector& h, const std::string& path);

std::string to_string(Verdict v);
std::string to_string(Method m);

// {margin, verdict, p, delta, method, dual_certificate}
nlohmann::json report_to_json(const IdentifiabilityReport& report);

// {f_hat, g_star, objective, correlation, iterations}
nlohmann::json recovery_to_json(const RecoveryResult& result);

}  // namespace blindid
