// Copyright 2026 The qexcite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "qexcite/error.hpp"

namespace qexcite {

enum class CouplingScheme { hamiltonian, hamiltonian_no_source_decay, cascaded };
enum class Drive { incoherent, coherent_single_channel, coherent_two_channel };

inline std::string_view to_string(CouplingScheme s) {
  switch (s) {
    case CouplingScheme::hamiltonian: return "hamiltonian";
    case CouplingScheme::hamiltonian_no_source_decay: return "hamiltonian_no_source_decay";
    case CouplingScheme::cascaded: return "cascaded";
  }
  return "?";
}

inline std::string_view to_string(Drive d) {
  switch (d) {
    case Drive::incoherent: return "incoherent";
    case Drive::coherent_single_channel: return "coherent_single_channel";
    case Drive::coherent_two_channel: return "coherent_two_channel";
  }
  return "?";
}

inline std::optional<CouplingScheme> parse_scheme(std::string_view s) {
  if (s == "hamiltonian") return CouplingScheme::hamiltonian;
  if (s == "hamiltonian_no_source_decay") return CouplingScheme::hamiltonian_no_source_decay;
  if (s == "cascaded") return CouplingScheme::cascaded;
  return std::nullopt;
}

inline std::optional<Drive> parse_drive(std::string_view s) {
  if (s == "incoherent") return Drive::incoherent;
  if (s == "coherent_single_channel") return Drive::coherent_single_channel;
  if (s == "coherent_two_channel") return Drive::coherent_two_channel;
  return std::nullopt;
}

/// Full parameter set of one simulation. Rates are in units of gamma_sigma by
/// convention (gamma_sigma = 1). Frequencies are detunings from the laser
/// (or from an arbitrary reference for incoherent pumping).
struct SystemConfig {
  CouplingScheme scheme = CouplingScheme::cascaded;
  Drive drive = Drive::coherent_two_channel;
  double gamma_sigma = 1.0;
  double gamma_a = 1.0;
  double P_sigma = 0.0;
  double Omega_sigma = 0.0;
  double epsilon_1 = 0.5;
  double delta_sigma = 0.0;
  double delta_a = 0.0;
  double gamma_sigma_star = 0.0;
  double gamma_phi = 0.0;
  double N_boost = 1.0;
  /// Initial oscillator truncation; 0 selects it automatically.
  int n_max = 0;
  double tail_tol = 1e-8;
  /// Only the frame rotating with the laser is supported.
  bool rotating_frame = true;
  /// Multiplies the cascaded cross term. Mutation-testing hook, 1 otherwise.
  double cascade_scale = 1.0;

  double epsilon_2() const { return 1.0 - epsilon_1; }
  double ratio() const { return gamma_a / gamma_sigma; }
  /// Laser amplitude seen by the source, sqrt(epsilon_1) * Omega.
  double effective_drive() const {
    return drive == Drive::coherent_single_channel ? Omega_sigma
                                                   : std::sqrt(epsilon_1) * Omega_sigma;
  }
  /// Hamiltonian coupling strength N sqrt(gamma_a gamma_sigma) / 2.
  double hamiltonian_coupling() const { return N_boost * std::sqrt(gamma_a * gamma_sigma) / 2.0; }
  /// Prefactor of the cascaded cross term, never above sqrt(gamma_a gamma_sigma).
  double cascaded_coupling() const {
    const double fraction = drive == Drive::coherent_two_channel ? epsilon_2() : 1.0;
    return cascade_scale * std::sqrt(fraction * gamma_a * gamma_sigma);
  }
  bool is_driven() const {
    return drive == Drive::incoherent ? P_sigma > 0.0 : Omega_sigma > 0.0;
  }
};

inline void validate(const SystemConfig& c) {
  auto rate = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidConfig(std::string(name) + " must be finite and >= 0");
  };
  rate(c.gamma_sigma, "gamma_sigma");
  rate(c.gamma_a, "gamma_a");
  rate(c.P_sigma, "P_sigma");
  rate(c.Omega_sigma, "Omega_sigma");
  rate(c.gamma_sigma_star, "gamma_sigma_star");
  rate(c.gamma_phi, "gamma_phi");
  if (!std::isfinite(c.delta_sigma) || !std::isfinite(c.delta_a))
    throw InvalidConfig("detunings must be finite");
  if (!(c.epsilon_1 >= 0.0 && c.epsilon_1 <= 1.0))
    throw InvalidConfig("epsilon_1 must lie in [0, 1]");
  if (!(c.N_boost >= 1.0) || !std::isfinite(c.N_boost))
    throw InvalidConfig("N_boost must be finite and >= 1");
  if (c.n_max < 0) throw InvalidConfig("n_max must be >= 0 (0 = automatic)");
  if (!(c.tail_tol > 0.0 && c.tail_tol < 1e-2)) throw InvalidConfig("tail_tol must lie in (0, 1e-2)");
  if (!(c.cascade_scale > 0.0 && c.cascade_scale <= 1.0))
    throw InvalidConfig("cascaded coupling cannot exceed sqrt(gamma_a gamma_sigma)");
  if (c.drive == Drive::incoherent && c.Omega_sigma != 0.0)
    throw InvalidConfig("Omega_sigma requires a coherent drive");
  if (c.drive != Drive::incoherent && c.P_sigma != 0.0)
    throw InvalidConfig("P_sigma requires the incoherent drive");
  if (c.drive == Drive::coherent_single_channel && c.scheme != CouplingScheme::cascaded)
    throw InvalidConfig("coherent_single_channel drive only exists for the cascaded scheme");
  if (c.drive == Drive::coherent_single_channel && c.Omega_sigma > 0.0 && c.gamma_sigma == 0.0)
    throw InvalidConfig("single-channel drive needs gamma_sigma > 0");
}

}  // namespace qexcite
