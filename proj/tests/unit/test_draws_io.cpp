#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bridgeirt/chain.hpp"
#include "bridgeirt/data.hpp"
#include "bridgeirt/draws_io.hpp"
#include "doctest.h"

using namespace bridgeirt;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("bridgeirt_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ChainDraws make_draws() {
  ChainDraws d;
  d.chain_index = 2;
  d.n_kept = 3;
  d.I = 2;
  d.J = 2;
  d.p = 1;
  d.log_joint = {-10.0, -9.5, -9.25};
  d.zeta_total = {2, 2, 1};
  d.model_size = {0, 1, 1};
  d.eta0 = {0.1, 0.2, 0.3};
  d.rho_mu = {0, 0, 0};
  d.kappa2_mu = {1, 1.1, 0.9};
  d.omega_alpha = {0.5, 0.4, 0.6};
  d.kappa2_alpha = {1, 2, 3};
  d.rho_beta = {0, 0.1, -0.1};
  d.sigma2_beta = {1, 1, 1};
  d.beta0 = {1, 2, 3, 4, 5, 6};
  d.beta1 = {1, 2, 3, 4.5, 5, 6.5};
  d.zeta = {1, 1, 1, 0, 1, 0};
  d.linpred = {0.5, -0.5, 0.6, -0.6, 0.7, -0.7};
  d.mu = {9, 8, 7, 6, 5, 4};
  d.alpha = {0, 1, 0, -1, 0.5, 0};
  d.xi = {0, 1, 1};
  d.eta = {0.0, 0.25, -0.25};
  return d;
}

}  // namespace

TEST_CASE("chain draws convert to a complete self-describing map") {
  DrawMap m = to_draw_map(make_draws());
  const std::vector<std::string> expected = {
      "alpha", "beta0", "beta1", "eta", "eta0", "kappa2_alpha", "kappa2_mu", "linpred",
      "log_joint", "model_size", "mu", "omega_alpha", "rho_beta", "rho_mu", "sigma2_beta",
      "xi", "zeta", "zeta_total"};
  REQUIRE(m.size() == expected.size());
  std::size_t at = 0;
  for (const auto& [name, arr] : m) {
    CHECK(name == expected[at++]);  // std::map: sorted, so files are byte-stable
    CHECK(arr.rows() == 3);
  }
  CHECK(m["beta0"].width() == 2);
  CHECK(m["mu"].width() == 2);
  CHECK(m["eta"].width() == 1);
  CHECK(m["zeta"].dtype == DrawArray::u8);
  CHECK(m["xi"].dtype == DrawArray::u8);
  CHECK(m["log_joint"].dtype == DrawArray::f64);
  CHECK(m["beta0"].at(2, 1) == 6.0);
  CHECK(m["zeta"].at(1, 1) == 0.0);

  SUBCASE("toggled-off quantities are absent") {
    ChainDraws d = make_draws();
    d.mu.clear();
    d.alpha.clear();
    d.beta0.clear();
    d.beta1.clear();
    DrawMap slim = to_draw_map(d);
    CHECK(slim.count("mu") == 0);
    CHECK(slim.count("beta0") == 0);
    CHECK(slim.count("linpred") == 1);
    CHECK(slim.count("zeta") == 1);
  }
}

TEST_CASE("draw files round-trip exactly and are byte-stable") {
  TempDir tmp;
  ChainDraws d = make_draws();
  write_draws(tmp.file("a.draws"), d);
  DrawMap back = read_draws(tmp.file("a.draws"));
  DrawMap orig = to_draw_map(d);
  REQUIRE(back.size() == orig.size());
  for (const auto& [name, arr] : orig) {
    REQUIRE(back.count(name) == 1);
    const DrawArray& b = back[name];
    CHECK(b.dtype == arr.dtype);
    CHECK(b.dims == arr.dims);
    CHECK(b.real == arr.real);
    CHECK(b.bytes == arr.bytes);
  }

  write_draws(tmp.file("b.draws"), d);
  CHECK(slurp(tmp.file("a.draws")) == slurp(tmp.file("b.draws")));
}

TEST_CASE("malformed draw files are rejected") {
  TempDir tmp;
  SUBCASE("missing file") { CHECK_THROWS_AS(read_draws(tmp.file("nope.draws")), DataError); }
  SUBCASE("wrong magic") {
    std::ofstream(tmp.file("bad.draws"), std::ios::binary) << "NOTDRAWS-extra-bytes";
    CHECK_THROWS_AS(read_draws(tmp.file("bad.draws")), DataError);
  }
  SUBCASE("truncated payload") {
    write_draws(tmp.file("good.draws"), make_draws());
    std::string bytes = slurp(tmp.file("good.draws"));
    std::ofstream out(tmp.file("cut.draws"), std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    out.close();
    CHECK_THROWS_AS(read_draws(tmp.file("cut.draws")), DataError);
  }
}

TEST_CASE("long-format CSV export") {
  TempDir tmp;
  ChainDraws d = make_draws();
  DrawMap m = to_draw_map(d);
  std::vector<DrawMap> per_chain = {m, m};

  export_draws_csv(tmp.file("beta0.csv"), "beta0", per_chain);
  std::ifstream in(tmp.file("beta0.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "chain,draw,index,value");
  int rows = 0;
  std::string line, first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == 2 * 3 * 2);  // chains x draws x width
  CHECK(first == "0,0,0,1");

  CHECK_THROWS_AS(export_draws_csv(tmp.file("x.csv"), "not_a_quantity", per_chain), DataError);
}
