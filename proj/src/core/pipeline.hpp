#pragma once

#include <string>

namespace crowdlod {

// Runs every asset generator named in a JSON pipeline configuration and
// writes <output_dir>/manifest.json listing each emitted asset with its
// on-disk byte size and bake parameters. Relative paths in the config
// resolve against the working directory. A config with demo.generate=true
// synthesizes the procedural demo inputs under <output_dir>/inputs first.
// Returns the manifest path.
std::string run_pipeline(const std::string& config_path);

} // namespace crowdlod
