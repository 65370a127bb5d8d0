#pragma once

#include <filesystem>
#include <iosfwd>

#include "fkent/classical.hpp"

namespace fkent {

/// Text record: a versioned header (N, g, boundary, anchors, sector, energy,
/// centers, params) followed by one phi value per line. Values use the
/// shortest round-trip representation, so reading back is bit-exact.
inline constexpr int solution_record_version = 1;

void write_solution(std::ostream& out, const classical_solution& solution);
classical_solution read_solution(std::istream& in);

void save_solution(const std::filesystem::path& path, const classical_solution& solution);
classical_solution load_solution(const std::filesystem::path& path);

}  // namespace fkent
