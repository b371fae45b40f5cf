#pragma once

#include <string>
#include <vector>

#include "jamlab/config.hpp"

namespace jamlab {

// Named experiment recipes at full scale; apply_scale() shrinks them for
// desk runs. Unknown names throw std::out_of_range.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace jamlab
