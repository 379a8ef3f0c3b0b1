#include "blindid/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace blindid {

nlohmann::json channel_to_json(const ChannelVector& h) {
  h.validate();
  nlohmann::json taps = nlohmann::json::array();
  for (int l = 0; l <= h.L; ++l) {
    nlohmann::json tap = nlohmann::json::array();
    for (int m = 0; m < h.M; ++m) tap.push_back(h.coeffs[l * h.M + m]);
    taps.push_back(std::move(tap));
  }
  return nlohmann::json{{"M", h.M}, {"L", h.L}, {"taps", std::move(taps)}};
}

ChannelVector channel_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("channel: document must be a JSON object");
  for (const char* key : {"M", "L", "taps"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("channel: missing field \"") + key + "\"");
  if (!j["M"].is_number_integer() || !j["L"].is_number_integer())
    throw std::invalid_argument("channel: \"M\" and \"L\" must be integers");
  const int M = j["M"].get<int>();
  const int L = j["L"].get<int>();
  if (M < 2) throw std::invalid_argument("channel: \"M\" must be >= 2");
  if (L < 1) throw std::invalid_argument("channel: \"L\" must be >= 1");
  const auto& taps = j["taps"];
  if (!taps.is_array() || static_cast<int>(taps.size()) != L + 1)
    throw std::invalid_argument("channel: \"taps\" must be an array of L+1 taps");

  ChannelVector h{M, L, Eigen::VectorXd((L + 1) * M)};
  for (int l = 0; l <= L; ++l) {
    const auto& tap = taps[l];
    if (!tap.is_array() || static_cast<int>(tap.size()) != M)
      throw std::invalid_argument("channel: taps[" + std::to_string(l) +
                                  "] must hold M entries");
    for (int m = 0; m < M; ++m) {
      if (!tap[m].is_number())
        throw std::invalid_argument("channel: taps[" + std::to_string(l) + "][" +
                                    std::to_string(m) + "] must be a number");
      h.coeffs[l * M + m] = tap[m].get<double>();
    }
  }
  h.validate();
  return h;
}

ChannelVector load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("channel file " + path + ": " + e.what());
  }
  return channel_from_json(j);
}

void save_channel(const ChannelVector& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write channel file: " + path);
  out << channel_to_json(h).dump(2) << "\n";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::identifiable: return "identifiable";
    case Verdict::boundary: return "boundary";
    case Verdict::not_identifiable: return "not_identifiable";
  }
  return "unknown";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::lp_dual: return "lp_dual";
    case Method::closed_form: return "closed_form";
    case Method::sampling: return "sampling";
  }
  return "unknown";
}

nlohmann::json report_to_json(const IdentifiabilityReport& report) {
  nlohmann::json cert = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.dual_certificate.size(); ++i)
    cert.push_back(report.dual_certificate[i]);
  return nlohmann::json{{"margin", report.margin},
                        {"verdict", to_string(report.verdict)},
                        {"p", report.p},
                        {"delta", report.delta},
                        {"method", to_string(report.method)},
                        {"dual_certificate", std::move(cert)}};
}

nlohmann::json recovery_to_json(const RecoveryResult& result) {
  nlohmann::json f = nlohmann::json::array();
  for (Eigen::Index i = 0; i < result.f_hat.size(); ++i) f.push_back(result.f_hat[i]);
  nlohmann::json g = nlohmann::json::array();
  for (Eigen::Index i = 0; i < result.g_star.size(); ++i) g.push_back(result.g_star[i]);
  nlohmann::json out{{"f_hat", std::move(f)},
                     {"g_star", std::move(g)},
                     {"objective", result.objective},
                     {"iterations", result.iterations}};
  out["correlation"] = result.correlation ? nlohmann::json(*result.correlation)
                                          : nlohmann::json(nullptr);
  return out;
}

}  // namespace blindid
