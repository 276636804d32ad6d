#pragma once

#include <string>

#include "varstab/io.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) { return std::string(VARSTAB_FIXTURE_DIR) + "/" + name; }

inline varstab::VarSystem load_fixture(const std::string& name) { return varstab::load_system(fixture_path(name)); }

/// Builds a system from inline JSON text.
inline varstab::VarSystem sys_from(const std::string& text) { return varstab::parse_system(text); }

}  // namespace testsupport
