#include "doctest.h"

#include <string>

#include "isgqd/error.hpp"
#include "isgqd/report.hpp"
#include "isgqd/spec_io.hpp"
#include "oracles.hpp"

using namespace isgqd;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSpecInvalid);
    return e.what();
  }
  FAIL("expected kSpecInvalid");
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("malformed JSON reports the line") {
    const std::string msg = message_of("{\n  \"type\": \"brandt\",\n  \"k\": 2,,\n}\n");
    CHECK(msg.find("line 3") != std::string::npos);
  }

  TEST_CASE("schema errors name the field") {
    CHECK(message_of(R"({"type": "brandt", "k": 2})").find("group") != std::string::npos);
    CHECK(message_of(R"({"type": "nope"})").find("unknown type") != std::string::npos);
    CHECK(message_of(R"({"type": "brandt", "group": {"kind": "cyclic", "order": 2}, "k": -1})").find("k") !=
          std::string::npos);
    CHECK(message_of(R"({"type": "table", "elements": ["0"], "mul": [[1]], "zero": 0})").find("table.mul") !=
          std::string::npos);
    CHECK(message_of(R"({"type": "symmetric_inverse", "n": 2, "format_version": 2})").find("format_version") !=
          std::string::npos);
  }

  TEST_CASE("every catalog spec loads") {
    for (const auto& name : oracle::catalog_files()) {
      CAPTURE(name);
      const auto spec = load_spec(oracle::catalog_path(name));
      CHECK(spec.name == name);
      CHECK(spec.semigroup.has_value());
    }
  }

  TEST_CASE("analyze brandt(Z/3, 4)") {
    const auto res = run_analyze(load_spec(oracle::catalog_path("brandt_z3_4")), CommandOptions{});
    const auto& st = res.report.at("structure");
    CHECK(st.at("minimal") == true);
    CHECK(st.at("brandt") == true);
    CHECK(res.report.at("spectrum").at("filters") == 4);
    CHECK(res.report.at("groupoid").at("germs") == 48);
    CHECK(res.report.at("consistency").at("violation") == false);
    CHECK(res.exit_code == 0);
  }

  TEST_CASE("analyze symmetric_inverse(3)") {
    const auto res = run_analyze(load_spec(oracle::catalog_path("symmetric_inverse_3")), CommandOptions{});
    CHECK(res.report.at("semigroup").at("size") == 34);
    CHECK(res.report.at("green").at("d_classes") == 4);
    CHECK(res.report.at("structure").at("brandt") == false);
    CHECK(res.report.at("qd").at("verified") == true);
  }

  TEST_CASE("qd command emits a CSV table and a verdict") {
    CommandOptions o;
    o.n_max = 3;
    const auto res = run_qd(load_spec(oracle::catalog_path("brandt_z_window_12")), o);
    REQUIRE(res.csv.has_value());
    CHECK(res.csv->rfind("n,witness_index,rank", 0) == 0);
    CHECK(res.report.at("qd").at("strategy") == "berg");
    CHECK(res.report.at("minimal_groupoid_projection").at("agrees_with_dclass_construction") == true);
    CHECK(res.exit_code == 0);
    o.n_max = 12;
    const auto soft = run_qd(load_spec(oracle::catalog_path("brandt_z_window_12")), o);
    CHECK(soft.exit_code == 2);
    CHECK(soft.report.at("qd").at("schedule_achievable") == false);
  }

  TEST_CASE("unknown strategy is rejected") {
    CommandOptions o;
    o.strategy = "magic";
    CHECK_THROWS_AS(run_qd(load_spec(oracle::catalog_path("brandt_z2_2")), o), Error);
  }

  TEST_CASE("trace command margins") {
    CommandOptions o;
    o.margin = true;
    for (int k = 2; k <= 8; ++k) {
      const auto res = run_trace(load_spec(oracle::catalog_path("qdnotr_k" + std::to_string(k))), o);
      CHECK(res.report.at("traces").at("margin").at("value") == "1/" + std::to_string(k));
      CHECK(res.report.at("traces").at("character_trace").at("faithful") == false);
      CHECK(res.exit_code == 0);
    }
  }

  TEST_CASE("nonfl command") {
    const auto res = run_nonfl(load_spec(oracle::catalog_path("tower_free_group")), CommandOptions{});
    CHECK(res.report.at("nonfl").at("passes") == true);
    CHECK(res.exit_code == 0);
    CHECK_THROWS_AS(run_nonfl(load_spec(oracle::catalog_path("brandt_z2_2")), CommandOptions{}), Error);
  }

  TEST_CASE("reports are reproducible in-process") {
    for (const char* name : {"symmetric_inverse_3", "brandt_z3_4", "qdnotr_k3", "tower_free_group"}) {
      CommandOptions o;
      o.seed = 42;
      o.margin = true;
      const auto a = run_analyze(load_spec(oracle::catalog_path(name)), o).report.dump();
      const auto b = run_analyze(load_spec(oracle::catalog_path(name)), o).report.dump();
      CHECK(a == b);
    }
  }
}
