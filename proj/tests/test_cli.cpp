#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcq/cli.hpp"
#include "bcq/serialize.hpp"

using namespace bcq;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / "bcq_cli_tests";
  fs::create_directories(p);
  return p;
}

fs::path write_config(const std::string& name, const Json& config) {
  fs::path p = scratch_dir() / name;
  std::ofstream out(p);
  out << config.dump(2);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed binary; returns its exit code.
int run_bcq(const std::string& args, const std::string& extra_env = "") {
  const char* bin = std::getenv("BCQ_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "BCQ_BIN must point at the bcq binary");
  const std::string cmd = extra_env + (extra_env.empty() ? "" : " ") + "\"" + bin + "\" " +
                          args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

Json fair_die_config() {
  return Json{
      {"model", {{"kind", "independent"}, {"sequence", {{"kind", "constant"}, {"value", "1/6"}}}}},
      {"rates", {{"omega", {{"kind", "linear"}, {"k", 6}}}}},
      {"params", {{"n", Json::array({1, 4})}, {"N", Json::array({1, 4})}}}};
}

}  // namespace

TEST_CASE("cmd_check passes on the fair-die fixture and is byte-stable") {
  const fs::path cfg = write_config("die.json", fair_die_config());
  const fs::path out1 = scratch_dir() / "die_out1.json";
  const fs::path out2 = scratch_dir() / "die_out2.json";

  CHECK(run_bcq("check second-bc --config " + cfg.string() + " --out " + out1.string()) ==
        cli::kExitPass);
  CHECK(run_bcq("check second-bc --config " + cfg.string() + " --out " + out2.string()) ==
        cli::kExitPass);
  CHECK(read_file(out1) == read_file(out2));  // byte-identical reruns

  const Json doc = Json::parse(read_file(out1));
  CHECK(doc.at("certificates").size() == 16);
  for (const auto& cj : doc.at("certificates")) {
    CHECK(cj.at("verdict") == "pass");
    // schema round trip: parse -> re-serialize -> identical
    CHECK(to_json(certificate_from_json(cj)) == cj);
  }
}

TEST_CASE("cmd_check exit codes cover the contract") {
  SUBCASE("exit 1: an honest Fail (tolerance check that cannot hold)") {
    Json cfg{{"model",
              {{"kind", "nested"},
               {"sequence",
                {{"kind", "affine_reciprocal"}, {"q", "1/2"}, {"c", "1/2"}, {"d", 1}}}}},
             {"params", {{"n", 2}, {"q", "1/2"}, {"tol", "1/1000000"}}}};
    const fs::path p = write_config("wn_fail.json", cfg);
    CHECK(run_bcq("check wn-limit --config " + p.string()) == cli::kExitFail);
  }
  SUBCASE("exit 2: enclosure budget too small to decide") {
    const fs::path p = write_config("die2.json", fair_die_config());
    CHECK(run_bcq("check second-bc --config " + p.string(), "BCQ_PRECISION_BUDGET=2") ==
          cli::kExitUndecided);
  }
  SUBCASE("exit 3: deliberately invalid omega is rejected up front") {
    Json cfg = fair_die_config();
    cfg["rates"]["omega"]["k"] = 1;  // sum up to omega(1) = 1 is 1/6 < 1
    const fs::path p = write_config("bad_omega.json", cfg);
    CHECK(run_bcq("check second-bc --config " + p.string()) == cli::kExitConfigError);
  }
  SUBCASE("exit 3: malformed config") {
    const fs::path p = scratch_dir() / "broken.json";
    std::ofstream(p) << "{ not json";
    CHECK(run_bcq("check second-bc --config " + p.string()) == cli::kExitConfigError);
  }
  SUBCASE("exit 3: missing config file") {
    CHECK(run_bcq("check second-bc --config /nonexistent/x.json") == cli::kExitConfigError);
  }
}

TEST_CASE("first-bc passes on an all-zero model (in-process)") {
  Json cfg{{"model",
            {{"kind", "independent"}, {"sequence", {{"kind", "constant"}, {"value", "0/1"}}}}},
           {"rates", {{"phi", {{"kind", "affine"}, {"c", 1}}}}},
           {"params", {{"l", Json::array({0, 3})}, {"m", 10}}}};
  cli::Outcome o = cli::run_check("first-bc", cfg);
  CHECK(o.exit_code == cli::kExitPass);
  CHECK(o.output.at("certificates").size() == 4);
}

TEST_CASE("grid evaluation is deterministic across thread counts") {
  Json cfg = fair_die_config();
  cfg["threads"] = 1;
  cli::Outcome serial = cli::run_check("second-bc", cfg);
  cfg["threads"] = 4;
  cli::Outcome parallel = cli::run_check("second-bc", cfg);
  CHECK(serial.exit_code == cli::kExitPass);
  CHECK(serial.output == parallel.output);
}

TEST_CASE("run_check validates omega before running (in-process)") {
  Json cfg = fair_die_config();
  cfg["rates"]["omega"]["k"] = 1;
  cli::Outcome o = cli::run_check("second-bc", cfg);
  CHECK(o.exit_code == cli::kExitConfigError);
  CHECK(o.error.find("omega(1)") != std::string::npos);  // names the failing N
}

TEST_CASE("kochen-stone with an invalid omega is rejected naming the first failing N") {
  Json cfg{{"model",
            {{"kind", "independent"}, {"sequence", {{"kind", "constant"}, {"value", "1/6"}}}}},
           {"rates",
            {{"omega", {{"kind", "linear"}, {"k", 1}}}, {"g", {{"kind", "affine"}, {"a", 1}, {"c", 1}}}}},
           {"params", {{"m", 1}, {"l", 1}}}};
  cli::Outcome o = cli::run_check("kochen-stone-meta", cfg);
  CHECK(o.exit_code == cli::kExitConfigError);
  CHECK(o.error.find("omega(1)") != std::string::npos);
}

TEST_CASE("kochen-stone check over a small grid (in-process)") {
  Json cfg{{"model",
            {{"kind", "independent"}, {"sequence", {{"kind", "constant"}, {"value", "1/2"}}}}},
           {"rates",
            {{"omega", {{"kind", "linear"}, {"k", 2}}}, {"g", {{"kind", "affine"}, {"a", 1}, {"c", 1}}}}},
           {"params", {{"m", Json::array({1, 2})}, {"l", Json::array({0, 1})}}}};
  cli::Outcome o = cli::run_check("kochen-stone-meta", cfg);
  CHECK(o.exit_code == cli::kExitPass);
  CHECK(o.output.at("certificates").size() == 4);
  for (const auto& cj : o.output.at("certificates")) {
    CHECK(cj.at("trace").contains("witness"));
  }
}

TEST_CASE("sweep die-power approaches e^{-1} from below") {
  Json cfg{{"params", {{"N", 1}}}};
  const fs::path p = write_config("sweep.json", cfg);
  const fs::path out = scratch_dir() / "sweep.csv";
  CHECK(run_bcq("sweep die-power --axis k --range 2..64 --config " + p.string() + " --out " +
                out.string()) == cli::kExitPass);

  const std::string csv = read_file(out);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,N,value,value_dec,vs_e_negN");
  Rat prev(-1);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // columns: k,N,value,...,sign
    std::istringstream fields(line);
    std::string k, N, value, dec, sign;
    std::getline(fields, k, ',');
    std::getline(fields, N, ',');
    std::getline(fields, value, ',');
    std::getline(fields, dec, ',');
    std::getline(fields, sign, ',');
    const Rat v = Rat::from_string(value);
    CHECK(v > prev);  // monotone in k
    CHECK(sign == "-");  // always below e^{-1}
    prev = v;
  }
  CHECK(rows == 63);

  // byte-identical rerun
  const fs::path out2 = scratch_dir() / "sweep2.csv";
  run_bcq("sweep die-power --axis k --range 2..64 --config " + p.string() + " --out " +
          out2.string());
  CHECK(read_file(out) == read_file(out2));

  // a range where a sweep needs a scalar is a config error, stated plainly
  Json range_cfg{{"params", {{"N", Json::array({1, 4})}}}};
  cli::Outcome bad = cli::run_sweep("die-power", "k", 2, 8, range_cfg);
  CHECK(bad.exit_code == cli::kExitConfigError);
  CHECK(bad.error.find("single integer") != std::string::npos);
}

TEST_CASE("sweep first-bc-margin equals 2^{-m} on the exclusive model (in-process)") {
  Json seq{{"kind", "table"},
           {"values", Json::array()},
           {"tail", {{"kind", "constant"}, {"value", "0/1"}}}};
  Rat v(1);
  for (int i = 1; i <= 40; ++i) {
    v *= Rat(1, 2);
    seq["values"].push_back(v.to_string());
  }
  Json cfg{{"model", {{"kind", "exclusive"}, {"sequence", seq}}},
           {"rates", {{"phi", {{"kind", "affine"}, {"c", 1}}}}},
           {"params", {{"m", 12}}}};
  cli::Outcome o = cli::run_sweep("first-bc-margin", "l", 0, 8, cfg);
  CHECK(o.exit_code == cli::kExitPass);
  std::istringstream lines(o.csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string l, m, lhs, lhs_dec, rhs, rhs_dec, margin;
    std::getline(fields, l, ',');
    std::getline(fields, m, ',');
    std::getline(fields, lhs, ',');
    std::getline(fields, lhs_dec, ',');
    std::getline(fields, rhs, ',');
    std::getline(fields, rhs_dec, ',');
    std::getline(fields, margin, ',');
    CHECK(Rat::from_string(margin) == Rat::pow2(-12));  // 2^{-m}, m = 12
  }
}

TEST_CASE("sweep wn shows |w_n - q| decreasing on the affine model (in-process)") {
  Json cfg{{"model",
            {{"kind", "nested"},
             {"sequence",
              {{"kind", "affine_reciprocal"}, {"q", "1/2"}, {"c", "1/2"}, {"d", 1}}}}},
           {"params", {{"q", "1/2"}}}};
  cli::Outcome o = cli::run_sweep("wn", "n", 2, 60, cfg);
  REQUIRE(o.exit_code == cli::kExitPass);
  std::istringstream lines(o.csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,u,v,w,w_dec,abs_err,abs_err_dec");
  Rat prev(-1);
  while (std::getline(lines, line)) {
    const auto pos = line.rfind(',', line.rfind(',') - 1);
    const std::string err_field = line.substr(pos + 1, line.rfind(',') - pos - 1);
    const Rat err = Rat::from_string(err_field);
    if (prev.sgn() >= 0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("specker command demonstrates the reduction") {
  Json cfg{{"model",
            {{"kind", "nested"},
             {"sequence",
              {{"kind", "specker"},
               {"enumeration", Json::array({2, 5, 3})},
               {"reveal_steps", Json::array({1, 2, 3})}}}}},
           {"params", {{"L", 10}}}};
  cli::Outcome o = cli::run_specker(cfg);
  CHECK(o.exit_code == cli::kExitPass);
  CHECK(o.output.at("q") == "13/64");
  const auto& rows = o.output.at("rows");
  CHECK(rows.size() == 10);
  for (const auto& row : rows) {
    CHECK(row.at("within_bound").get<bool>());
    CHECK(row.at("phi_reaches_reveal").get<bool>());
  }
  // once all mass is revealed the bound stabilizes at the last reveal step
  CHECK(rows.back().at("phi_0_l").get<Index>() == 3);

  // late reveal forces the bound to grow
  Json late = cfg;
  late["model"]["sequence"]["enumeration"] = Json::array({1});
  late["model"]["sequence"]["reveal_steps"] = Json::array({100});
  late["params"]["L"] = 4;
  cli::Outcome lo = cli::run_specker(late);
  CHECK(lo.exit_code == cli::kExitPass);
  CHECK(lo.output.at("rows")[1].at("phi_0_l").get<Index>() >= 100);

  // repeated enumeration elements are a config error
  Json bad = cfg;
  bad["model"]["sequence"]["enumeration"] = Json::array({2, 2});
  bad["model"]["sequence"]["reveal_steps"] = Json::array({1, 2});
  CHECK(cli::run_specker(bad).exit_code == cli::kExitConfigError);
}

TEST_CASE("oracle-diff agrees on stock configs") {
  for (const char* kind : {"independent", "nested", "exclusive"}) {
    Json seq;
    if (std::string(kind) == "independent") {
      seq = Json{{"kind", "constant"}, {"value", "1/3"}};
    } else if (std::string(kind) == "nested") {
      seq = Json{{"kind", "ratio"}};
    } else {
      seq = Json{{"kind", "table"},
                 {"values", Json::array({"1/2", "1/4", "1/8", "1/16", "1/32", "1/64"})},
                 {"tail", {{"kind", "constant"}, {"value", "0/1"}}}};
    }
    Json cfg{{"model", {{"kind", kind}, {"sequence", seq}}},
             {"oracle", {{"seed", 99}, {"union_instances", 40}, {"count_instances", 20},
                         {"max_window", 8}, {"max_start", 6}, {"max_n", 10}}}};
    cli::Outcome o = cli::run_oracle_diff(cfg);
    CHECK(o.exit_code == cli::kExitPass);
    CHECK(o.output.at("mismatches").empty());
  }
}

TEST_CASE("ks-algebra checks run without a model (in-process)") {
  Json cfg{{"params",
            {{"a", "1"}, {"b", "4"}, {"alpha", "1/4"}, {"beta", "0"}, {"eps", "1/2"}}}};
  cli::Outcome o = cli::run_check("ks-algebra", cfg);
  CHECK(o.exit_code == cli::kExitPass);
  CHECK(o.output.at("certificates").size() == 1);

  cfg["params"]["alpha"] = "2";  // violates alpha < a
  CHECK(cli::run_check("ks-algebra", cfg).exit_code == cli::kExitConfigError);
}

TEST_CASE("remaining check subcommands drive their parameter grids (in-process)") {
  const Json half_model{{"kind", "independent"},
                        {"sequence", {{"kind", "constant"}, {"value", "1/2"}}}};

  SUBCASE("ratio-lower-bound and chung-erdos") {
    Json cfg{{"model", half_model}, {"params", {{"n", Json::array({1, 16})}}}};
    CHECK(cli::run_check("ratio-lower-bound", cfg).exit_code == cli::kExitPass);
    CHECK(cli::run_check("chung-erdos", cfg).exit_code == cli::kExitPass);
  }
  SUBCASE("bk-tail over k and nk") {
    Json cfg{{"model", half_model},
             {"params", {{"k", Json::array({1, 4})}, {"nk", Json::array({1, 8})}}}};
    cli::Outcome o = cli::run_check("bk-tail", cfg);
    CHECK(o.exit_code == cli::kExitPass);
    CHECK(o.output.at("certificates").size() == 32);
  }
  SUBCASE("ks-tail-estimate picks the minimal admissible j when omitted") {
    Json cfg{{"model", half_model},
             {"rates", {{"omega", {{"kind", "linear"}, {"k", 2}}}}},
             {"params", {{"m", Json::array({1, 2})}, {"l", Json::array({0, 1})}}}};
    cli::Outcome o = cli::run_check("ks-tail-estimate", cfg);
    CHECK(o.exit_code == cli::kExitPass);
    for (const auto& cj : o.output.at("certificates")) {
      CHECK(cj.at("params").at("j").get<Index>() ==
            cj.at("trace").at("threshold").get<Index>() + 1);
    }
  }
  SUBCASE("yan-ratios with tolerance") {
    // |a_n/b_n - 1| = 1/(n+1) under independence at p = 1/2
    Json cfg{{"model", half_model},
             {"params", {{"n", Json::array({4, 12})}, {"tol", "1/5"}}}};
    CHECK(cli::run_check("yan-ratios", cfg).exit_code == cli::kExitPass);
    cfg["params"]["tol"] = "1/14";
    CHECK(cli::run_check("yan-ratios", cfg).exit_code == cli::kExitFail);
  }
  SUBCASE("specker-reduction over l") {
    Json cfg{{"model",
              {{"kind", "nested"},
               {"sequence",
                {{"kind", "specker"},
                 {"enumeration", Json::array({3, 1})},
                 {"reveal_steps", Json::array({2, 50})}}}}},
             {"params", {{"l", Json::array({1, 8})}}}};
    CHECK(cli::run_check("specker-reduction", cfg).exit_code == cli::kExitPass);
  }
  SUBCASE("ks-algebra rejects an unknown theorem cleanly") {
    CHECK(cli::run_check("no-such-theorem", Json::object()).exit_code ==
          cli::kExitConfigError);
  }
}

TEST_CASE("sequence, model, and rate grammars round-trip through JSON") {
  std::vector<Sequence> seqs;
  seqs.push_back(Sequence::constant(Rat(2, 7)));
  seqs.push_back(Sequence::ratio());
  seqs.push_back(Sequence::affine_reciprocal(Rat(1, 2), Rat(1, 3), 4));
  seqs.push_back(Sequence::table({Rat(1, 3), Rat(1, 2)},
                                 std::make_shared<const Sequence>(Sequence::ratio())));
  seqs.push_back(Sequence::specker({4, 0, 7}, {1, 3, 3}));
  for (const auto& s : seqs) {
    Sequence back = sequence_from_json(to_json(s));
    CHECK(to_json(back) == to_json(s));
    for (Index i : {1, 2, 5, 9}) CHECK(back.at(i) == s.at(i));
  }

  for (const Json& mj : {Json{{"kind", "nested"}, {"sequence", {{"kind", "ratio"}}}},
                         Json{{"kind", "exclusive"},
                              {"sequence", {{"kind", "constant"}, {"value", "1/8"}}}}}) {
    CHECK(to_json(*model_from_json(mj)) == mj);
  }

  for (const Json& rj :
       {Json{{"kind", "linear"}, {"k", 6}}, Json{{"kind", "ceildiv"}, {"q1", "2/3"}},
        Json{{"kind", "table"}, {"values", Json::array({2, 4, 9})}}}) {
    CHECK(to_json(divergence_rate_from_json(rj)) == rj);
  }
  for (const Json& gj : {Json{{"kind", "affine"}, {"a", 2}, {"c", 0}},
                         Json{{"kind", "power"}, {"e", 3}}}) {
    CHECK(to_json(g_function_from_json(gj)) == gj);
  }
  CHECK_THROWS_AS(g_function_from_json(Json{{"kind", "affine"}, {"a", 1}, {"c", 0}}),
                  ValidationError);
  CHECK_THROWS_AS(g_function_from_json(Json{{"kind", "power"}, {"e", 1}}), ValidationError);
  CHECK_THROWS_AS(sequence_from_json(Json{{"kind", "mystery"}}), ValidationError);
}

TEST_CASE("certificates embed rates verbatim and survive round trips") {
  Json cfg{{"model",
            {{"kind", "independent"}, {"sequence", {{"kind", "constant"}, {"value", "1/2"}}}}},
           {"rates", {{"omega", {{"kind", "linear"}, {"k", 2}}}}},
           {"params", {{"n", 1}, {"N", Json::array({1, 2})}}}};
  cli::Outcome o = cli::run_check("second-bc", cfg);
  REQUIRE(o.exit_code == cli::kExitPass);
  for (const auto& cj : o.output.at("certificates")) {
    CHECK(cj.at("params").at("omega") == Json({{"kind", "linear"}, {"k", 2}}));
    CHECK(to_json(certificate_from_json(cj)) == cj);
  }
}
