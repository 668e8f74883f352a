#pragma once

// Noise spec strings for the CLI:
//
//   spec  := "none" | term ("+" term)*
//   term  := ["vs/"] ( "step:" t0_s ":" gain | "linear:" total | "sin:" hz ":" amp | "none" )
//
// Terms without a prefix perturb the illumination, "vs/" terms the specular
// reflectance. Terms on the same target add up.

#include <stdexcept>
#include <string>
#include <string_view>

#include "pulse_tn/srm.hpp"

namespace pulse_tn {

class NoiseSpecError : public std::invalid_argument {
 public:
  NoiseSpecError(std::string token, const std::string& why);
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

NoiseSpec parse_noise_spec(std::string_view text);

}  // namespace pulse_tn
