#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <loewner/errors.hpp>
#include <loewner/io.hpp>

#include "../support/oracles.hpp"

using namespace loewner;
using io::json;

TEST_CASE("matrix JSON round trip", "[io]") {
  prop::Gen g(81);
  const CMatrix M = g.matrix(3);
  const CMatrix back = io::matrix_from_json(io::to_json(M));
  CHECK(back == M);
  const CMatrix real = io::matrix_from_json(json::parse(R"({"n": 2, "re": [[2.5, 0], [0, 1]]})"));
  CHECK(real(0, 0) == cplx(2.5));
  CHECK(real(1, 1).imag() == 0.0);
}

TEST_CASE("schema errors name the field", "[io]") {
  const auto message = [](const std::string& text, auto&& parse) {
    try {
      parse(json::parse(text));
    } catch (const SchemaError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const auto mat = [](const json& j) { return io::matrix_from_json(j); };
  CHECK(message(R"({"n": 2, "re": [[1, 0]]})", mat).find("re") != std::string::npos);
  CHECK(message(R"({"re": [[1]]})", mat).find("n") != std::string::npos);
  const auto gen = [](const json& j) { return io::generator_from_json(j); };
  CHECK(message(R"({"A": {"n": 1, "re": [[1]]}, "form": "magic"})", gen).find("form") != std::string::npos);
  CHECK_THROWS_AS(io::load_json("{not json"), SchemaError);
  CHECK_THROWS_AS(io::load_json("/nonexistent/file.json"), SchemaError);
}

TEST_CASE("generator JSON round trip preserves the field", "[io][property]") {
  prop::for_all(82, 10, [](prop::Gen& g, int c) {
    Rng rng(2000 + c);
    const OperatorA A = random_operator(rng, g.integer(2, 3), 0.5, 2.0, false);
    RandomGeneratorOptions opt;
    opt.time_dependent = g.uniform() < 0.5;
    const auto h = random_generator(rng, A, opt);
    const json j = io::to_json(h);
    const auto back = io::generator_from_json(json::parse(io::dump(j)));
    INFO("case " << c);
    CHECK(io::generator_hash(back) == io::generator_hash(h));
    for (int p = 0; p < 3; ++p) {
      const CVector z = g.ball(A.n(), 0.9);
      const double t = g.uniform(0, 5);
      CHECK((back.evaluate(z, t) - h.evaluate(z, t)).norm() < 1e-15);
    }
  });
}

TEST_CASE("time-dependent example from hand-written JSON", "[io]") {
  const json j = json::parse(R"({
    "A": {"n": 2, "re": [[2.5, 0], [0, 1]]},
    "form": "time_dependent",
    "terms": [{"H": {"n": 2, "k": 2, "terms": [{"m": [0, 2], "s": 0, "re": 1.0}]},
               "a": {"kind": "exp_decay", "rate": 1.0}}]
  })");
  const auto h = io::generator_from_json(j);
  const auto ref = example_generator(2.5, TimeFunction::exp_decay(1.0));
  CVector z(2);
  z << cplx(0.3, 0.1), 0.2;
  CHECK((h.evaluate(z, 0.7) - ref.evaluate(z, 0.7)).norm() < 1e-15);
}

TEST_CASE("pushforward recipe round trip", "[io]") {
  const json j = json::parse(R"({
    "A": {"n": 2, "re": [[1, 0], [0, 2]]},
    "form": "pushforward",
    "recipe": {"roper_suffridge": {"f": "koebe", "alpha": 0.0, "beta": 0.5, "lambda": [2.0, 0.0]}}
  })");
  const auto h = io::generator_from_json(j);
  CHECK(h.form() == GeneratorSpec::Form::Pushforward);
  const auto back = io::generator_from_json(io::to_json(h));
  CVector z(2);
  z << 0.3, 0.4;
  CHECK((back.evaluate(z, 0.0) - h.evaluate(z, 0.0)).norm() < 1e-15);
  CHECK((h.evaluate(z, 0.0) - roper_suffridge_field(OneVarMap::koebe(), 0.0, 0.5, 2.0, z)).norm() < 1e-12);
}

TEST_CASE("time function JSON covers every serializable kind", "[io]") {
  const TimeFunction fns[] = {TimeFunction::constant(cplx(1, 2)), TimeFunction::exp_decay(0.5, 3.0),
                              TimeFunction::window(2.0), TimeFunction::oscillation(1.5, cplx(0, 1)),
                              TimeFunction::table({0, 1, 2}, {1.0, cplx(0, 2), 0.5})};
  for (const auto& a : fns) {
    const auto back = io::time_function_from_json(io::to_json(a));
    CHECK(back.kind() == a.kind());
    for (double t : {0.0, 0.4, 1.7, 3.0}) CHECK(back(t) == a(t));
  }
}

TEST_CASE("points CSV with and without header", "[io]") {
  const auto dir = std::filesystem::temp_directory_path() / "loewner_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "pts.csv").string();
  {
    std::ofstream os(path);
    os << "re1,im1,re2,im2\n0.1,0.2,0.3,0.4\n-0.5,0,0,0.25\n";
  }
  const auto pts = io::read_points_csv(path, 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0](1) == cplx(0.3, 0.4));
  CHECK(pts[1](0) == cplx(-0.5, 0.0));
  {
    std::ofstream os(path);
    os << "0.1,0.2,0.3\n";
  }
  CHECK_THROWS_AS(io::read_points_csv(path, 2), SchemaError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("doubles are written with full precision", "[io]") {
  const double x = 0.1 + 0.2;
  CHECK(std::stod(io::format_double(x)) == x);
  std::ostringstream os;
  io::write_csv_row(os, {1.0, x});
  CHECK(os.str() == "1," + io::format_double(x) + "\n");
}

TEST_CASE("coefficient configuration", "[io]") {
  const json j = json::parse(R"({
    "F0_le": [{"n": 2, "k": 2, "terms": [{"m": [0, 2], "s": 0, "re": -2.0}]}],
    "horizon": 30, "cheb_degree": 12
  })");
  const auto cfg = io::coefficient_config_from_json(j, 2);
  REQUIRE(cfg.F0_le.size() == 1);
  CHECK(cfg.F0_le[0].coefficient({0, 2}, 0) == cplx(-2.0));
  CHECK(cfg.options.horizon == 30.0);
  CHECK(cfg.options.cheb_degree == 12);
  const auto again = io::coefficient_config_from_json(io::to_json(cfg), 2);
  CHECK(again.F0_le[0].coeffs() == cfg.F0_le[0].coeffs());
  const json wrong = json::parse(R"({"F0_le": [{"n": 2, "k": 3, "terms": []}]})");
  CHECK_THROWS_AS(io::coefficient_config_from_json(wrong, 2), SchemaError);
}
