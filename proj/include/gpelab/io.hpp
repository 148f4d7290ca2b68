#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpelab/control.hpp"
#include "gpelab/evolution.hpp"
#include "gpelab/spectral.hpp"
#include "gpelab/stationary.hpp"

namespace gpelab {

// FNV-1a over the raw bytes; used to stamp outputs with the config they
// came from.
std::uint64_t fnv1a_hash(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

// "# gpelab <version> config=<hex>": prepended to generated files so a
// result can be traced back to its inputs. Contains no timestamps; outputs
// are byte-identical across reruns.
std::string manifest_line(const std::string& config_text);

std::string format_double(double v);  // %.17g, round-trips exactly

// Self-describing text serialization of a stationary state. Lines starting
// with '#' are ignored on load; tabulated potentials embed their samples.
std::string state_to_text(const StationaryState& state, const std::string& header = "");
void save_state(const StationaryState& state, const std::string& path,
                const std::string& header = "");
StationaryState state_from_text(const std::string& text, const std::string& name = "<text>");
StationaryState load_state(const std::string& path);

// Verdict serializations; the CSV column order is fixed:
// mu,g1,classification,alpha_g,beta_g,min_product_re,has_complex,
// lambda_growth,mu_s,band_lo,band_hi
std::string verdict_csv_header();
std::string verdict_csv_row(const StationaryState& state, const StabilityVerdict& v);
std::string verdict_text(const StationaryState& state, const StabilityVerdict& v);

// time,norm_phi1,norm_phi2 rows.
std::string trajectory_csv(const PerturbationTrajectory& traj);
// time,norm,energy rows.
std::string gpe_trajectory_csv(const GpeTrajectory& traj);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gpelab
