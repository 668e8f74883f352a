#include "pulse_tn/noise_grammar.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace pulse_tn {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at == s.npos ? s.npos : at - start));
    if (at == s.npos) return out;
    start = at + 1;
  }
}

double number(std::string_view field, std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw NoiseSpecError(std::string(token), "'" + std::string(field) + "' is not a number");
  }
  return v;
}

}  // namespace

NoiseSpecError::NoiseSpecError(std::string token, const std::string& why)
    : std::invalid_argument("invalid noise term '" + token + "': " + why), token_(std::move(token)) {}

NoiseSpec parse_noise_spec(std::string_view text) {
  NoiseSpec spec;
  if (text.empty()) throw NoiseSpecError("", "empty noise spec");
  for (const std::string_view token : split(text, '+')) {
    std::string_view body = token;
    NoiseProfile* target = &spec.illumination;
    if (body.starts_with("vs/")) {
      body.remove_prefix(3);
      target = &spec.specular;
    }
    const auto parts = split(body, ':');
    const std::string_view kind = parts.front();
    auto expect_args = [&](std::size_t n) {
      if (parts.size() != n + 1) {
        throw NoiseSpecError(std::string(token), "'" + std::string(kind) + "' takes " + std::to_string(n) +
                                                     " argument(s)");
      }
    };
    if (kind == "none") {
      expect_args(0);
    } else if (kind == "step") {
      expect_args(2);
      const double t0 = number(parts[1], token);
      if (t0 < 0.0) throw NoiseSpecError(std::string(token), "step time must be >= 0");
      target->components.emplace_back(StepNoise{t0, number(parts[2], token)});
    } else if (kind == "linear") {
      expect_args(1);
      target->components.emplace_back(LinearNoise{number(parts[1], token)});
    } else if (kind == "sin") {
      expect_args(2);
      const double hz = number(parts[1], token);
      if (hz < 0.0) throw NoiseSpecError(std::string(token), "frequency must be >= 0");
      target->components.emplace_back(SinusoidNoise{hz, number(parts[2], token)});
    } else {
      throw NoiseSpecError(std::string(token), "unknown noise kind '" + std::string(kind) + "'");
    }
  }
  return spec;
}

}  // namespace pulse_tn
