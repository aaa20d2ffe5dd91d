#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "haarwalk/io.hpp"

using namespace haarwalk;
namespace fs = std::filesystem;

namespace {

fs::path specs_dir() { return fs::path(HAARWALK_SPECS_DIR); }

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  write_text_file(p, content);
  return p;
}

}  // namespace

TEST_CASE("measure files load with the right flags") {
  auto ms = load_measure_file(specs_dir() / "z2_quarter.measure");
  REQUIRE(ms.finite.has_value());
  CHECK(ms.finite->weight(1) == doctest::Approx(0.75));
  CHECK(ms.group.group->order() == 2);
  REQUIRE(ms.group.dual.has_value());

  auto circ = load_measure_file(specs_dir() / "circle_mixture.measure");
  REQUIRE(circ.circle.has_value());
  CHECK(circ.circle->atom_mass() == doctest::Approx(0.5));
  CHECK(circ.circle->density_mass() == doctest::Approx(0.5));

  auto atomic = load_measure_file(specs_dir() / "circle_atomic.measure");
  REQUIRE(atomic.circle.has_value());
  CHECK(!has_abs_component(*atomic.circle));
  CHECK(!is_adapted(*atomic.circle));
}

TEST_CASE("group files load and validate") {
  auto g = load_group_file(specs_dir() / "klein4.group");
  CHECK(g->order() == 4);
  CHECK(g->is_abelian());
  CHECK(g->element_name(3) == "ab");
}

TEST_CASE("walk config wires the instance together") {
  auto ws = load_walk_file(specs_dir() / "z2.walk");
  CHECK(ws.config.steps == 10000);
  CHECK(ws.config.replicas == 2000);
  CHECK(ws.config.seed == 42);
  CHECK(ws.config.checkpoints == std::vector<long long>{100, 1000, 10000});
  REQUIRE(std::holds_alternative<FiniteWalkInstance>(ws.config.instance));

  auto cws = load_walk_file(specs_dir() / "circle_mixture.walk");
  REQUIRE(std::holds_alternative<CircleWalkInstance>(cws.config.instance));
  CHECK(cws.config.circle_cells == 64);
}

TEST_CASE("unknown keys and malformed headers are hard errors") {
  auto bad1 = temp_file("hw_bad1.measure",
                        "haarwalk measure v1\ngroup = builtin:cyclic(2)\nweights = 1 0\nwat = 3\n");
  CHECK_THROWS_AS(load_measure_file(bad1), SpecError);
  auto bad2 = temp_file("hw_bad2.measure", "haarwalk potato v1\n");
  CHECK_THROWS_AS(load_measure_file(bad2), SpecError);
  auto bad3 = temp_file("hw_bad3.measure",
                        "haarwalk measure v1\ngroup = builtin:cyclic(2)\nweights = 0.4 0.7\n");
  CHECK_THROWS_AS(load_measure_file(bad3), SpecError);  // not a probability
  CHECK_THROWS_AS(load_measure_file(fs::temp_directory_path() / "definitely_absent.measure"),
                  MissingInput);
}

TEST_CASE("dual files round-trip and validate") {
  auto b = make_builtin("dihedral(4)");
  const fs::path p = fs::temp_directory_path() / "hw_d4.dual";
  write_dual_file(p, *b.dual);
  auto loaded = load_dual_file(p, b.group);
  auto rep = validate_dual(loaded);
  CHECK(rep.pass);
  CHECK(loaded.irreps.size() == b.dual->irreps.size());
}

TEST_CASE("emission is byte-deterministic") {
  auto ms = load_measure_file(specs_dir() / "z2_quarter.measure");
  auto fss = load_function_file(specs_dir() / "z2_pm1.function");
  auto r1 = analyze(ms.group.group, *ms.group.dual, *ms.finite, *fss.finite, 1.0, 1e-12);
  auto r2 = analyze(ms.group.group, *ms.group.dual, *ms.finite, *fss.finite, 1.0, 1e-12);
  CHECK(analysis_to_json(r1) == analysis_to_json(r2));
  CHECK(rate_table_csv(r1.delta) == rate_table_csv(r2.delta));

  auto ws = load_walk_file(specs_dir() / "z2.walk");
  ws.config.replicas = 10;
  auto b1 = run_batch(ws.config);
  auto b2 = run_batch(ws.config);
  CHECK(sums_to_csv(b1) == sums_to_csv(b2));
  CHECK(counts_to_csv(b1) == counts_to_csv(b2));
}

TEST_CASE("digests are stable") {
  auto p = temp_file("hw_digest.txt", "abc\n");
  CHECK(fnv1a_file(p) == fnv1a_file(p));
  auto q = temp_file("hw_digest2.txt", "abd\n");
  CHECK(fnv1a_file(p) != fnv1a_file(q));
}
