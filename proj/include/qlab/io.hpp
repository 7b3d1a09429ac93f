#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qlab/ansatz.hpp"
#include "qlab/lattice.hpp"
#include "qlab/open_system.hpp"
#include "qlab/optimizer.hpp"
#include "qlab/pauli.hpp"
#include "qlab/rydberg.hpp"

namespace qlab {

using json = nlohmann::json;

json to_json(const LatticeGeometry& g);
json to_json(const WeightedPauliSum& h);
json to_json(const ParameterVector& p);
json to_json(const OptResult& r);
json to_json(const std::vector<Gate>& gates);
json to_json(const DressedAtomArray& a);
json to_json(const PowerLawFit& f);

/// Writes `content` to `path` via a sibling temporary and a rename, so
/// readers never see a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qlab
