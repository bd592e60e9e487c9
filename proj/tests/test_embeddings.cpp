#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dattr/embeddings.hpp"
#include "dattr/errors.hpp"
#include "dattr/rng.hpp"
#include "test_util.hpp"

using namespace dattr;
using dattr::testing::TempDir;
using dattr::testing::make_store;
using dattr::testing::write_file;

TEST_CASE("load_embeddings reads plain rows") {
  TempDir tmp("emb-plain");
  const auto path = write_file(tmp.path() / "emb.txt", "a 1 0\nb 0 1\n");
  const auto store = load_embeddings(path);
  CHECK(store.vocab.size() == 2);
  CHECK(store.dim == 2);
  CHECK(store.matrix(store.vocab.at("a"), 0) == 1.0);
  CHECK(store.matrix(store.vocab.at("b"), 1) == 1.0);
}

TEST_CASE("load_embeddings skips a count-dim header") {
  TempDir tmp("emb-header");
  const auto path = write_file(tmp.path() / "emb.txt", "2 3\na 1 2 3\nb 4 5 6\n");
  const auto store = load_embeddings(path);
  CHECK(store.vocab.size() == 2);
  CHECK(store.dim == 3);
}

TEST_CASE("load_embeddings keeps the first duplicate row") {
  TempDir tmp("emb-dup");
  const auto path = write_file(tmp.path() / "emb.txt", "a 1 0\na 9 9\n");
  const auto store = load_embeddings(path);
  const auto v = lookup(store, "a");
  CHECK(v.found);
  CHECK(v.values[0] == 1.0);
  CHECK(v.values[1] == 0.0);
}

TEST_CASE("load_embeddings error paths") {
  TempDir tmp("emb-errors");
  SUBCASE("dimension mismatch names the line") {
    const auto path = write_file(tmp.path() / "emb.txt", "a 1 0\nb 1 2 3\n");
    CHECK_THROWS_WITH_AS(load_embeddings(path),
                         doctest::Contains("line 2"), DataError);
  }
  SUBCASE("empty file") {
    const auto path = write_file(tmp.path() / "emb.txt", "");
    CHECK_THROWS_AS(load_embeddings(path), DataError);
  }
  SUBCASE("header-only file") {
    const auto path = write_file(tmp.path() / "emb.txt", "5 300\n");
    CHECK_THROWS_AS(load_embeddings(path), DataError);
  }
  SUBCASE("non-numeric component") {
    const auto path = write_file(tmp.path() / "emb.txt", "a 1 x\n");
    CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("non-numeric"),
                         DataError);
  }
}

TEST_CASE("lookup walks the normalization chain") {
  Eigen::VectorXd frog(2), tree_frog(2);
  frog << 1, 0;
  tree_frog << 0, 1;
  const auto store = make_store({{"frog", frog}, {"tree_frog", tree_frog}});

  SUBCASE("exact hit") {
    CHECK(lookup(store, "frog").found);
  }
  SUBCASE("plural falls back to the singular") {
    const auto v = lookup(store, "Frogs");
    CHECK(v.found);
    CHECK(v.values[0] == 1.0);
  }
  SUBCASE("spaces map to underscores") {
    CHECK(lookup(store, "Tree Frog").found);
    CHECK(lookup(store, "tree frogs").found);
  }
  SUBCASE("miss yields the zero vector") {
    const auto v = lookup(store, "zzxqv");
    CHECK_FALSE(v.found);
    CHECK(v.values.norm() == 0.0);
  }
  SUBCASE("deterministic and idempotent") {
    const auto a = lookup(store, "Frogs");
    const auto b = lookup(store, "Frogs");
    CHECK(a.found == b.found);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("lookup_candidates order and de-pluralization variants") {
  const auto c = lookup_candidates("Bodies");
  // bodies -> body via "ies"->"y"; plain "s"-strip also offered later.
  REQUIRE(c.size() >= 3);
  CHECK(c[0] == "Bodies");
  CHECK(c[1] == "bodies");
  CHECK(std::find(c.begin(), c.end(), "body") != c.end());

  const auto h = lookup_candidates("horses");
  CHECK(std::find(h.begin(), h.end(), "hors") != h.end());   // "es" strip
  CHECK(std::find(h.begin(), h.end(), "horse") != h.end());  // "s" strip
}

TEST_CASE("sqrt_cosine handbook cases") {
  Eigen::VectorXd x(2), y(2), diag(2), anti(2);
  x << 1, 0;
  y << 0, 1;
  diag << 3, 3;  // same direction as (1,1)
  anti << -1, -2;
  const auto store = make_store({{"x", x}, {"y", y}, {"same", 2 * x}, {"zero", 0 * x}});

  CHECK(sqrt_cosine(store, "x", "same") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sqrt_cosine(store, "x", "y") == 0.0);
  CHECK(sqrt_cosine(store, "x", "zero") == 0.0);
  CHECK(sqrt_cosine(store, "x", "missing") == 0.0);

  // cosine -0.5 floors at 0; cosine 0.25 gives 0.5
  Eigen::VectorXd a(2), b_neg(2), b_quarter(2);
  a << 1, 0;
  b_neg << -0.5, std::sqrt(1 - 0.25);
  b_quarter << 0.25, std::sqrt(1 - 0.0625);
  const auto store2 = make_store({{"a", a}, {"neg", b_neg}, {"quarter", b_quarter}});
  CHECK(sqrt_cosine(store2, "a", "neg") == 0.0);
  CHECK(sqrt_cosine(store2, "a", "quarter") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sqrt_cosine properties over random stores") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform_index(6));
    Eigen::VectorXd u(dim), v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      u[i] = rng.uniform(-1.0, 1.0);
      v[i] = rng.uniform(-1.0, 1.0);
    }
    const double scale = rng.uniform(0.1, 50.0);
    const auto store =
        make_store({{"u", u}, {"v", v}, {"u_scaled", scale * u}});

    const double suv = sqrt_cosine(store, "u", "v");
    CHECK(suv >= 0.0);
    CHECK(suv <= 1.0);
    CHECK(suv == sqrt_cosine(store, "v", "u"));
    CHECK(sqrt_cosine(store, "u_scaled", "v") == doctest::Approx(suv).epsilon(1e-12));

    const double cos = u.norm() * v.norm() == 0.0
                           ? 0.0
                           : u.dot(v) / (u.norm() * v.norm());
    if (cos <= 0.0) {
      CHECK(suv == 0.0);
    } else {
      CHECK(suv == doctest::Approx(std::sqrt(cos)).epsilon(1e-12));
    }
  }
}
