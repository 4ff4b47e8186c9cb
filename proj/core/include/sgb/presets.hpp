#pragma once

#include <string_view>
#include <vector>

#include "sgb/config.hpp"
#include "sgb/model.hpp"

namespace sgb {

// Named species:
//   rb87-f2         ground-state Rb with moments (mu_B/2, mu_B), alpha = 3
//   rydberg-55c-56c circular Rydberg pair with (54 mu_B, 55 mu_B), alpha = 109
AtomSpecies species_preset(std::string_view name);

// Named scenario configs (see README for the exact parameter values):
//   fig3-default  SG butterfly pulse regime, gradient-phase sweep over T
//   fig4-default  same with finite ramp duration t1 = 1 ms
//   fig5-default  butterfly visibility sweep over T
//   fig5-mz       Mach-Zehnder visibility sweep over T
RunConfig config_preset(std::string_view name);

std::vector<std::string_view> species_preset_names();
std::vector<std::string_view> config_preset_names();

} // namespace sgb
