#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "magicmps/common.hpp"

// End-to-end checks of the command-line runner: record schema, exit
// codes, reproducibility, and the documented example invocations.

using nlohmann::json;

namespace {

#ifndef MAGICMPS_CLI_PATH
#error "MAGICMPS_CLI_PATH must point at the built binary"
#endif

struct CliResult {
  int exit_code = 0;
  std::string stdout_text;
};

CliResult run_cli(const std::string& args) {
  std::string out_file = "/tmp/magicmps_cli_out.txt";
  std::string cmd = std::string(MAGICMPS_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream f(out_file);
  std::stringstream ss;
  ss << f.rdbuf();
  r.stdout_text = ss.str();
  std::remove(out_file.c_str());
  return r;
}

json first_record(const CliResult& r) {
  std::istringstream is(r.stdout_text);
  std::string line;
  REQUIRE(std::getline(is, line));
  return json::parse(line);
}

// minimal structural validation against the published schema: required
// keys present, declared property types respected
void validate_against_schema(const json& record) {
  std::ifstream f(std::string(MAGICMPS_SOURCE_DIR) + "/docs/record.schema.json");
  REQUIRE(f.good());
  json schema = json::parse(f);

  for (const auto& req : schema["required"]) {
    INFO("required field: ", req.get<std::string>());
    CHECK(record.contains(req.get<std::string>()));
  }
  auto type_ok = [](const json& value, const std::string& type) {
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "boolean") return value.is_boolean();
    return true;
  };
  for (const auto& [key, prop] : schema["properties"].items()) {
    if (!record.contains(key) || !prop.contains("type")) continue;
    const json& t = prop["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_ok(record[key], t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || type_ok(record[key], alt.get<std::string>());
    }
    INFO("field type: ", key);
    CHECK(ok);
  }
}

json strip_volatile(json j) {
  j.erase("timestamp");
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST_CASE("sre on a t-doped product emits a schema-valid record") {
  CliResult r = run_cli("sre --t-doped N=8,NT=4 --n 2");
  REQUIRE(r.exit_code == 0);
  json rec = first_record(r);
  validate_against_schema(rec);
  CHECK(rec["measure"] == "sre");
  CHECK(rec["value"].get<double>() ==
        doctest::Approx(4.0 * std::log2(4.0 / 3.0)).epsilon(1e-10));
  CHECK(rec["density"].get<double>() ==
        doctest::Approx(std::log2(4.0 / 3.0) / 2.0).epsilon(1e-10));
}

TEST_CASE("nullity through a random clifford circuit") {
  CliResult r = run_cli("nullity --circuit random-clifford --N 16 --NT 8 --depth 4 --seed 7 "
                        "--learn-group");
  REQUIRE(r.exit_code == 0);
  json rec = first_record(r);
  validate_against_schema(rec);
  CHECK(rec["nu_rounded"] == 8);
  CHECK(rec["trace"]["converged"] == true);
  CHECK(rec["trace"]["converged_at"].get<int>() <= 10);
  CHECK(rec["stabilizer_generators"].size() == 8);
}

TEST_CASE("identical config and seed reproduce the output byte for byte") {
  const std::string cmd = "bell --circuit scrambling --N 6 --n-ccz 1 --seed 9";
  CliResult a = run_cli(cmd);
  CliResult b = run_cli(cmd);
  REQUIRE(a.exit_code == 0);
  json ja = first_record(a), jb = first_record(b);
  CHECK(strip_volatile(ja).dump() == strip_volatile(jb).dump());
}

TEST_CASE("sweep emits csv with derivative columns") {
  CliResult r = run_cli(
      "sre --model ising --h-grid 0.8:1.2:0.1 --N 6 --chi 16 --trunc 1e-12 --derivatives 2 "
      "--csv --jobs 2");
  REQUIRE(r.exit_code == 0);
  std::istringstream is(r.stdout_text);
  std::string header;
  REQUIRE(std::getline(is, header));
  CHECK(header == "parameter,m_n,truncation_error,chi_used,energy,dm_n,d2m_n");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("config file provides defaults, flags override") {
  {
    std::ofstream f("/tmp/magicmps_cfg.json");
    f << R"({"t-doped": "N=4,NT=2", "n": 2, "seed": 5})";
  }
  CliResult r = run_cli("sre --config /tmp/magicmps_cfg.json");
  REQUIRE(r.exit_code == 0);
  json rec = first_record(r);
  CHECK(rec["value"].get<double>() ==
        doctest::Approx(2.0 * std::log2(4.0 / 3.0)).epsilon(1e-10));
  CHECK(rec["seed"] == 5);

  // command line wins over the file
  CliResult r2 = run_cli("sre --config /tmp/magicmps_cfg.json --t-doped N=4,NT=0");
  json rec2 = first_record(r2);
  CHECK(rec2["value"].get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  std::remove("/tmp/magicmps_cfg.json");
}

TEST_CASE("exit codes: config errors and bad config keys") {
  CliResult r = run_cli("sre");  // no state source
  CHECK(r.exit_code == 2);
  json rec = first_record(r);
  CHECK(rec["record"] == "error");
  CHECK(rec["error"] == "config");

  CliResult r2 = run_cli("sre --t-doped banana");
  CHECK(r2.exit_code == 2);

  {
    std::ofstream f("/tmp/magicmps_badcfg.json");
    f << R"({"frobnicate": 1})";
  }
  CliResult r3 = run_cli("sre --config /tmp/magicmps_badcfg.json");
  CHECK(r3.exit_code == 2);
  std::remove("/tmp/magicmps_badcfg.json");
}

TEST_CASE("exit code 3 on a numerical abort") {
  CliResult r = run_cli(
      "sre --circuit random-clifford --N 10 --NT 5 --depth 8 --chi-n 2 --abort-error 1e-12");
  CHECK(r.exit_code == 3);
  json rec = first_record(r);
  CHECK(rec["error"] == "numerical");
}

TEST_CASE("exit code 4 when the iteration cannot converge") {
  CliResult r = run_cli("nullity --t-doped N=6,NT=3 --max-iter 1 --eps-converge 1e-15");
  CHECK(r.exit_code == 4);
}

TEST_CASE("oracle-check passes") {
  CliResult r = run_cli("oracle-check --seed 2");
  CHECK(r.exit_code == 0);
  json rec = first_record(r);
  CHECK(rec["value"].get<double>() < 1e-7);
}

TEST_CASE("dmrg writes a loadable state and circuit-run consumes circuit files") {
  CliResult r = run_cli("dmrg --model xxz --N 8 --delta 0.5 --chi 24 --save-mps /tmp/magicmps_gs.mps");
  REQUIRE(r.exit_code == 0);

  {
    std::ofstream f("/tmp/magicmps_c.txt");
    f << "N=4\nH 0\nCNOT 0 1\nCNOT 1 2\nCNOT 2 3\n";
  }
  CliResult r2 = run_cli("circuit-run --circuit /tmp/magicmps_c.txt --init zero "
                         "--save-mps /tmp/magicmps_ghz.mps");
  REQUIRE(r2.exit_code == 0);

  CliResult r3 = run_cli("sre --mps /tmp/magicmps_ghz.mps --n 2");
  REQUIRE(r3.exit_code == 0);
  CHECK(first_record(r3)["value"].get<double>() == doctest::Approx(0.0).epsilon(1e-8));

  for (const char* p : {"/tmp/magicmps_gs.mps", "/tmp/magicmps_gs.mps.json",
                        "/tmp/magicmps_ghz.mps", "/tmp/magicmps_ghz.mps.json",
                        "/tmp/magicmps_c.txt"})
    std::remove(p);
}

TEST_CASE("output goes to a file when requested") {
  CliResult r = run_cli("sre --t-doped N=2,NT=1 --n 3 --output /tmp/magicmps_out.jsonl");
  REQUIRE(r.exit_code == 0);
  CHECK(r.stdout_text.empty());
  std::ifstream f("/tmp/magicmps_out.jsonl");
  REQUIRE(f.good());
  json rec;
  f >> rec;
  CHECK(rec["measure"] == "sre");
  CHECK(rec["n"] == 3);
  std::remove("/tmp/magicmps_out.jsonl");
}
