#include <doctest.h>

#include <fdim/errors.hpp>
#include <fdim/experiment.hpp>

using namespace freedim;

namespace {

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c = default_config(kind);
  c.k_grid = {8, 16};
  c.trials = 6;
  c.seed = 99;
  return c;
}

std::string schema_pointer(const Json& j) {
  try {
    config_from_json(j);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "<none>";
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("word patterns") {
  const WordPattern w = parse_word_pattern("u1 B1 u2 u1* B2");
  CHECK(w.generators == 2);
  CHECK(w.constants == 2);
  REQUIRE(w.segments.size() == 4);
  CHECK(std::get<GroupWord>(w.segments[2]).letters() == std::vector<int>{2, -1});
  CHECK_THROWS_AS(parse_word_pattern("u1 u1* B1"), InvalidArgument);
  CHECK_THROWS_AS(parse_word_pattern("B1 B2"), InvalidArgument);
  CHECK_THROWS_AS(parse_word_pattern("u0"), InvalidArgument);
  CHECK_THROWS_AS(parse_word_pattern("x"), InvalidArgument);
  CHECK_THROWS_AS(parse_experiment_kind("nope"), InvalidArgument);
}

TEST_CASE("config round trip and schema pointers") {
  for (auto kind : {ExperimentKind::Decay, ExperimentKind::Concentration, ExperimentKind::AsFree,
                    ExperimentKind::PolarCompare}) {
    const Json j = config_to_json(default_config(kind));
    CHECK(config_to_json(config_from_json(j, kind)) == j);
  }
  Json j = config_to_json(default_config(ExperimentKind::Decay));
  Json bad = j;
  bad["trials"] = 0;
  CHECK(schema_pointer(bad) == "/trials");
  bad = j;
  bad["kGrid"] = Json::array({64, 32});
  CHECK(schema_pointer(bad) == "/kGrid/1");
  bad = j;
  bad["colour"] = "red";
  CHECK(schema_pointer(bad) == "/colour");
  bad = j;
  bad["algebra"]["blocks"][0]["weight"] = "2/3";
  CHECK(schema_pointer(bad) == "/algebra");
  bad = j;
  bad["families"] = Json::array({Json::array({"B1"}), Json::array({"B1"})});
  CHECK(schema_pointer(bad) == "/families/1/0");
  bad = j;
  bad["sampler"] = "gauss";
  CHECK(schema_pointer(bad) == "/sampler");
  CHECK_THROWS_AS(config_from_json(j, ExperimentKind::AsFree), SchemaError);
}

TEST_CASE("constants are centered and normalised") {
  const ExperimentConfig c = default_config(ExperimentKind::Decay);
  const Representation r = make_representation(c.algebra, 32);
  bool centered = false;
  const auto bs = build_constants(c, r, 3, centered);
  REQUIRE(bs.size() == 3);
  for (const auto& b : bs) {
    CHECK(cond_expect(r, b).operator_norm() < 1e-12);
    CHECK((b - b.adjoint()).norm() < 1e-12);
    CHECK(std::abs(operator_norm(b) - 1.0) < 1e-12);
  }
}

TEST_CASE("results do not depend on the thread count") {
  for (auto kind : {ExperimentKind::Decay, ExperimentKind::Concentration, ExperimentKind::AsFree,
                    ExperimentKind::PolarCompare}) {
    ExperimentConfig c = small(kind);
    if (kind == ExperimentKind::AsFree) c.m = 2;
    const std::string one = result_to_csv(run_experiment(c, {1}));
    const std::string three = result_to_csv(run_experiment(c, {3}));
    CHECK(one == three);
    CHECK(one.rfind("k,n,trial,series,statistic\n", 0) == 0);
    c.seed = 100;
    CHECK(result_to_csv(run_experiment(c, {1})) != one);
  }
}

TEST_CASE("series statistics") {
  Series s;
  s.values = {1.0, 2.0, 3.0, 4.0};
  s.success = {1, 1, 0, 1};
  const SeriesStats st = s.stats();
  CHECK(st.mean == doctest::Approx(2.5));
  CHECK(st.max == 4.0);
  CHECK(st.success_fraction == doctest::Approx(0.75));
  CHECK(st.stderr_of_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("decay result shape") {
  const ExperimentResult r = run_experiment(small(ExperimentKind::Decay));
  REQUIRE(r.per_k.size() == 2);
  CHECK(r.per_k[0].series.at("norm").values.size() == 6);
  CHECK(r.trend_ok.has_value());
  const Json j = result_to_json(r);
  CHECK(j["kind"] == "decay");
  CHECK(j["perK"][1]["k"] == 16);
}

}  // TEST_SUITE
