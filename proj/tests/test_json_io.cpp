#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "condensate/catalog.hpp"
#include "condensate/json_io.hpp"

using namespace condensate;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CONDENSATE_FIXTURES;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

TEST(JsonIo, EveryFixtureRoundTripsByteForByte) {
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    const std::string name = entry.path().filename().string();
    if (name == "malformed.algebra.json") continue;
    const std::string bytes = slurp(entry.path());
    const Json j = Json::parse(bytes);
    std::string again;
    if (ends_with(name, ".algebra.json")) {
      again = canonical_dump(algebra_to_json(algebra_from_json(j)));
    } else if (ends_with(name, ".bimodule.json")) {
      again = canonical_dump(bimodule_to_json(bimodule_from_json(j, kFixtures)));
    } else {
      again = canonical_dump(matrix_to_json(matrix_from_json(j)));
    }
    EXPECT_EQ(again, bytes) << name;
    ++seen;
  }
  EXPECT_GE(seen, 14u);
}

TEST(JsonIo, FixturesMatchTheCatalogConstructors) {
  for (const auto& a : catalog::all_algebras()) {
    const CondensationAlgebra loaded = load_algebra(kFixtures / (a.name + ".algebra.json"));
    EXPECT_EQ(loaded, a.algebra) << a.name;
    EXPECT_EQ(loaded.label(), a.algebra.label()) << a.name;
    EXPECT_EQ(canonical_dump(algebra_to_json(a.algebra)), slurp(kFixtures / (a.name + ".algebra.json"))) << a.name;
  }
  EXPECT_EQ(load_algebra(kFixtures / "m2_unscaled.algebra.json"), catalog::unscaled_m2());
}

TEST(JsonIo, BimoduleReferencesArePreserved) {
  const LoadedBimodule row = load_bimodule(kFixtures / "m2_row.bimodule.json");
  EXPECT_EQ(row.left_ref, "q.algebra.json");
  EXPECT_EQ(row.right_ref, "m2.algebra.json");
  EXPECT_EQ(row.bimodule.right(), matrix_algebra(2));
  // Inline serialization embeds the algebras instead.
  const Json inline_json = bimodule_to_json(row.bimodule);
  EXPECT_TRUE(inline_json["left"].is_object());
  const LoadedBimodule back = bimodule_from_json(inline_json);
  EXPECT_EQ(back.bimodule.lact(), row.bimodule.lact());
  EXPECT_EQ(back.bimodule.rcoact(), row.bimodule.rcoact());
}

TEST(JsonIo, IndexConventions) {
  // mult[i][j][k]: Z/2 has b1·b1 = b0.
  const Json z2 = algebra_to_json(group_algebra(cyclic_group(2)));
  EXPECT_EQ(z2["mult"][1][1][0], "1");
  EXPECT_EQ(z2["mult"][1][1][1], "0");
  // comult[k][i][j]: Δ(b0) ∋ (1/2) b1⊗b1.
  EXPECT_EQ(z2["comult"][0][1][1], "1/2");
  // Matrices are row-major.
  const Json m = matrix_to_json(SparseMatrix::from_triplets(2, 3, {{{0, 2}, Scalar(5)}, {{1, 0}, Scalar(-1, 3)}}));
  EXPECT_EQ(m["entries"][2], "5");
  EXPECT_EQ(m["entries"][3], "-1/3");
  EXPECT_EQ(matrix_from_json(m).at(1, 0), Scalar(-1, 3));
}

TEST(JsonIo, NonCanonicalRationalsAreNormalised) {
  Json m{{"rows", 1}, {"cols", 2}, {"entries", {"2/4", "-0"}}};
  EXPECT_EQ(canonical_dump(matrix_to_json(matrix_from_json(m))),
            canonical_dump(Json{{"rows", 1}, {"cols", 2}, {"entries", {"1/2", "0"}}}));
}

TEST(JsonIo, MalformedInputsAreInputErrors) {
  const Json good = algebra_to_json(unit_algebra());
  auto bad = [&](auto edit) {
    Json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["mult"][0][0][0] = 1; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["mult"][0][0][0] = 0.5; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["mult"][0][0][0] = "1/0"; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["mult"][0][0][0] = "one"; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["dim"] = 2; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["dim"] = -1; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j.erase("comult"); })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["extra"] = true; })), InputError);
  EXPECT_THROW(algebra_from_json(bad([](Json& j) { j["label"] = 3; })), InputError);
  EXPECT_THROW(algebra_from_json(Json::array()), InputError);
  EXPECT_THROW(matrix_from_json(Json{{"rows", 2}, {"cols", 2}, {"entries", {"1"}}}), InputError);
  EXPECT_THROW(load_algebra(kFixtures / "malformed.algebra.json"), InputError);
  EXPECT_THROW(load_algebra(kFixtures / "no-such-file.json"), InputError);
}

TEST(JsonIo, BimoduleErrors) {
  Json j = bimodule_to_json(catalog::row_module(share(matrix_algebra(2))));
  Json missing_ref = j;
  missing_ref["left"] = "absent.algebra.json";
  EXPECT_THROW(bimodule_from_json(missing_ref, kFixtures), InputError);
  Json wrong_kind = j;
  wrong_kind["right"] = 7;
  EXPECT_THROW(bimodule_from_json(wrong_kind), InputError);
  Json short_lact = j;
  short_lact["lact"] = Json::array();
  EXPECT_THROW(bimodule_from_json(short_lact), InputError);
}

TEST(JsonIo, ReportShape) {
  const Json r = make_report("check_condensation_algebra", true, nullptr, "condensation algebra axioms");
  for (const char* k : {"op", "verdict", "witness", "paper_ref", "details"}) EXPECT_TRUE(r.contains(k)) << k;
  const AxiomReport bad = check_condensation_algebra(catalog::unscaled_m2());
  const Json w = first_witness(bad.checks());
  EXPECT_EQ(w["check"], "specialness");
  EXPECT_EQ(w["note"], "m∘Δ = 2·id");
  EXPECT_EQ(w["lhs"], "2");
  EXPECT_TRUE(first_witness(check_condensation_algebra(unit_algebra()).checks()).is_null());
}
