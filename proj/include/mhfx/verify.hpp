#pragma once

// Fixture runner. A fixture names a problem, an expansion order and a list of
// numeric checks against reference values; see docs/schema.md.

#include <string>
#include <vector>

#include "mhfx/serialize.hpp"

namespace mhfx {

struct VerifyOutcome {
  Json report;
  bool passed = true;
};

// Fixture names (file stems) found in `dir`, sorted.
std::vector<std::string> list_fixtures(const std::string& dir);

// Runs one fixture document. Input errors inside the fixture throw.
VerifyOutcome verify_fixture(const Json& fixture);

// `name` is a fixture stem or "all". Unknown names throw UnknownCase.
VerifyOutcome run_verify(const std::string& name, const std::string& dir);

// Directory baked in at build time.
std::string default_fixture_dir();

}  // namespace mhfx
