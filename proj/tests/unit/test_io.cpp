#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "eclone/error.hpp"
#include "eclone/io.hpp"
#include "eclone/metrics.hpp"
#include "eclone/states.hpp"
#include "support/oracles.hpp"

using namespace eclone;

TEST_CASE("counts CSV round-trips bit for bit") {
  auto records = tomography::sample_counts(states::ideal_clone(), 4000, 1);
  records[5].exposure = 0.1;
  records[7].exposure = 1.0 / 3.0;
  const std::string csv = io::counts_to_csv(records);
  CHECK(csv.rfind("setting_a,setting_b,count,exposure\n", 0) == 0);
  const auto back = io::counts_from_csv(csv);
  CHECK(back == records);
  CHECK(io::counts_to_csv(back) == csv);
}

TEST_CASE("counts CSV tolerates whitespace and reports bad lines") {
  const auto ok = io::counts_from_csv("setting_a,setting_b,count,exposure\r\n H , V , 12 , 1 \n\n");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].setting.b == tomography::Projector::V);
  CHECK(ok[0].count == 12);

  CHECK_THROWS_AS(io::counts_from_csv(""), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("a,b,c,d\nH,H,1,1\n"), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("setting_a,setting_b,count,exposure\nH,Q,1,1\n"), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("setting_a,setting_b,count,exposure\nH,H,-1,1\n"), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("setting_a,setting_b,count,exposure\nH,H,1.5,1\n"), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("setting_a,setting_b,count,exposure\nH,H,1,0\n"), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv("setting_a,setting_b,count,exposure\nH,H,1\n"), ParseError);
  try {
    io::counts_from_csv("setting_a,setting_b,count,exposure\nH,H,1,1\nH,V,x,1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("matrix JSON round-trips bit for bit and preserves metrics") {
  oracle::Random rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = oracle::to_density(rng.density(4), {"1'", "2'"});
    const auto back = io::matrix_from_json(io::matrix_to_json(rho));
    CHECK(back.labels() == rho.labels());
    CHECK(max_abs_diff(back.matrix(), rho.matrix()) == 0.0);
    CHECK(std::abs(metrics::concurrence(back) - metrics::concurrence(rho)) <= 1e-12);
    CHECK(std::abs(metrics::von_neumann_entropy(back) - metrics::von_neumann_entropy(rho)) <= 1e-12);
    CHECK(io::matrix_to_json(back) == io::matrix_to_json(rho));
  }
}

TEST_CASE("matrix JSON rejects malformed documents") {
  CHECK_THROWS_AS(io::matrix_from_json("{"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"labels":["1"]})"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"labels":["1"],"matrix":[[[1,0],[0,0]],[[0,0]]]})"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"labels":["1"],"matrix":[[[1,0],[0,0]],[[0,0],[0]]]})"), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(R"({"labels":["1"],"matrix":[[[1,0],[0,0]],[[0,0],["a",0]]]})"), ParseError);
  // Well-formed JSON that is not a density matrix.
  CHECK_THROWS_AS(io::matrix_from_json(R"({"labels":["1"],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]})"),
                  PreconditionError);
}

TEST_CASE("sweep CSV uses 12 significant digits") {
  const cloner::SweepPoint points[] = {{1.0 / 3.0, 7.0 / 12.0, 7.0 / 12.0, 1.0 / 9.0}, {0.0, 1.0, 0.25, 1.0}};
  CHECK(io::sweep_to_csv(points) ==
        "R,F_local,F_distant,success_weight\n"
        "0.333333333333,0.583333333333,0.583333333333,0.111111111111\n"
        "0,1,0.25,1\n");
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  for (double x : {1.0 / 3.0, 2.5e-17, 123456789.125, -0.0625}) CHECK(std::stod(io::format_double(x)) == x);
  CHECK(io::format_significant(2.0 / 3.0) == "0.666666666667");
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "eclone_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.txt";
  io::write_file(path, "hello\n");
  CHECK(io::read_file(path) == "hello\n");
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), IoError);
  CHECK_THROWS_AS(io::write_file(dir / "no" / "such" / "dir.txt", "x"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("named states") {
  CHECK(max_abs_diff(states::named("sigma").matrix(), oracle::from_eigen(oracle::werner_clone())) < 1e-15);
  CHECK(max_abs_diff(states::named("mixed").matrix(), ComplexMatrix::identity(4) * 0.25) < 1e-15);
  CHECK(std::abs(states::named("psi-").matrix()(1, 2) + 0.5) < 1e-15);
  CHECK(std::abs(states::named("schmidt:0").matrix()(0, 0) - 1.0) < 1e-15);
  CHECK(states::named("phi+", {"a", "b"}).labels() == Labels{"a", "b"});
  CHECK_THROWS_AS(states::named("bogus"), PreconditionError);
}
