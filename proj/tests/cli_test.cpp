// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"

#ifndef DIVANN_CLI_PATH
#error "DIVANN_CLI_PATH must name the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run cli(const std::string& args) {
  const std::string cmd = std::string(DIVANN_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("divann_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string operator()(const std::string& file) const { return (dir / file).string(); }
};

TEST_CASE("end to end pipeline") {
  Scratch f("pipeline");
  REQUIRE(cli("gen-vectors --n 1500 --dim 8 --centers 8 --seed 1 --out " + f("base.fvecs")).code == 0);
  REQUIRE(cli("gen-vectors --n 20 --dim 8 --centers 8 --seed 2 --out " + f("q.fvecs")).code == 0);
  const auto colors = cli("gen-colors --scheme sift-skewed --n 1500 --seed 3 --out " + f("c.bin"));
  REQUIRE(colors.code == 0);
  CHECK(colors.out.find("# config") != std::string::npos);
  CHECK(fs::file_size(f("c.bin")) == 1500 * 4);

  const std::string base = " --vectors " + f("base.fvecs") + " --colors " + f("c.bin");
  const auto build = cli("build" + base + " --R 16 --L 32 --m 4 --out " + f("div.dvrs"));
  REQUIRE(build.code == 0);
  CHECK(build.out.find("edges") != std::string::npos);
  REQUIRE(cli("build" + base + " --R 16 --L 32 --m 4 --out " + f("div2.dvrs")).code == 0);
  CHECK(slurp(f("div.dvrs")) == slurp(f("div2.dvrs")));
  REQUIRE(cli("build" + base + " --R 16 --L 32 --out " + f("std.dvrs")).code == 0);

  REQUIRE(cli("gt" + base + " --queries " + f("q.fvecs") + " --k 10 --kprime 1 --out " +
              f("g.gt")).code == 0);
  const auto search = cli("search --index " + f("div.dvrs") + " --vectors " +
                          f("base.fvecs") + " --queries " + f("q.fvecs") + " --gt " +
                          f("g.gt") + " --k 10 --kprime 1 --L 200");
  REQUIRE(search.code == 0);
  CHECK(search.out.find("# summary") != std::string::npos);
  CHECK(search.out.find("colorful_violations=0") != std::string::npos);
  CHECK(search.out.find("recall=") != std::string::npos);

  const auto bench = cli("bench --vectors " + f("base.fvecs") + " --queries " +
                         f("q.fvecs") + " --gt " + f("g.gt") + " --index " +
                         f("div.dvrs") + " --std-index " + f("std.dvrs") +
                         " --L 20,40 --out " + f("sweep.csv"));
  REQUIRE(bench.code == 0);
  CHECK(slurp(f("sweep.csv")).rfind("config,L,k,kprime,m,recall", 0) == 0);

  // Slow builder on a prefix, and a theory search against it.
  REQUIRE(cli("build" + base + " --builder slow-colorful --n 500 --k 5 --alpha 2 --out " +
              f("slow.dvrs")).code == 0);
  const auto theory = cli("search --index " + f("slow.dvrs") + " --vectors " +
                          f("base.fvecs") + " --queries " + f("q.fvecs") +
                          " --mode theory-colorful --k 5 --T 50");
  CHECK(theory.code == 0);
  CHECK(theory.out.find("colorful_violations=0") != std::string::npos);
  CHECK(cli("search --index " + f("slow.dvrs") + " --vectors " + f("base.fvecs") +
            " --queries " + f("q.fvecs") + " --mode theory-primal --k 5 --kprime 1 --C 1")
            .code == 2);
}

TEST_CASE("seeded generators are reproducible") {
  Scratch f("seeds");
  REQUIRE(cli("gen-colors --scheme arxiv --n 5000 --seed 9 --out " + f("a.bin")).code == 0);
  REQUIRE(cli("gen-colors --scheme arxiv --n 5000 --seed 9 --out " + f("b.bin")).code == 0);
  REQUIRE(cli("gen-colors --scheme arxiv --n 5000 --seed 10 --out " + f("c.bin")).code == 0);
  CHECK(slurp(f("a.bin")) == slurp(f("b.bin")));
  CHECK(slurp(f("a.bin")) != slurp(f("c.bin")));
  REQUIRE(cli("gen-vectors --n 300 --seed 4 --out " + f("v.fvecs")).code == 0);
  const auto hp = cli("gen-colors --scheme hyperplane --vectors " + f("v.fvecs") +
                      " --buckets 8 --seed 1 --out " + f("h.bin"));
  CHECK(hp.code == 0);
  CHECK(fs::file_size(f("h.bin")) == 300 * 4);
}

TEST_CASE("config files fill unset options only") {
  Scratch f("config");
  {
    std::ofstream cfg(f("cfg.json"));
    cfg << R"({"seed": 5, "gen-colors": {"scheme": "arxiv", "n": 400}})";
  }
  const auto a = cli("gen-colors --config " + f("cfg.json") + " --out " + f("a.bin"));
  REQUIRE(a.code == 0);
  CHECK(a.out.find("\"seed\":\"5\"") != std::string::npos);
  CHECK(fs::file_size(f("a.bin")) == 400 * 4);
  REQUIRE(cli("gen-colors --scheme arxiv --n 400 --seed 5 --out " + f("b.bin")).code == 0);
  CHECK(slurp(f("a.bin")) == slurp(f("b.bin")));
  // The command line wins over the file.
  REQUIRE(cli("gen-colors --config " + f("cfg.json") + " --n 100 --out " + f("c.bin")).code == 0);
  CHECK(fs::file_size(f("c.bin")) == 100 * 4);

  {
    std::ofstream cfg(f("bad.json"));
    cfg << R"({"gen-colors": {"bogus": 1}})";
  }
  CHECK(cli("gen-colors --config " + f("bad.json") + " --n 10 --out " + f("d.bin")).code == 2);
  {
    std::ofstream cfg(f("broken.json"));
    cfg << "{not json";
  }
  CHECK(cli("gen-colors --config " + f("broken.json") + " --n 10 --out " + f("d.bin")).code == 2);
}

TEST_CASE("exit codes") {
  Scratch f("codes");
  CHECK(cli("").code == 2);
  CHECK(cli("no-such-command").code == 2);
  CHECK(cli("gen-colors --scheme rainbow --n 10 --out " + f("x.bin")).code == 2);
  CHECK(cli("gen-colors --scheme arxiv --out " + f("x.bin")).code == 2);
  CHECK(cli("gen-vectors --n 10").code == 2);

  REQUIRE(cli("gen-vectors --n 200 --dim 4 --out " + f("v.fvecs")).code == 0);
  REQUIRE(cli("gen-colors --scheme arxiv --n 200 --out " + f("c.bin")).code == 0);
  const std::string base = " --vectors " + f("v.fvecs") + " --colors " + f("c.bin");
  CHECK(cli("gt" + base + " --queries " + f("v.fvecs") + " --k 2 --kprime 3 --out " +
            f("g.gt")).code == 2);
  CHECK(cli("build" + base + " --R 0 --out " + f("i.dvrs")).code == 2);
  CHECK(cli("bench --vectors " + f("v.fvecs") + " --queries " + f("v.fvecs") +
            " --index " + f("i.dvrs")).code == 2);

  // Format and io failures map to the data error code.
  {
    std::ofstream bad(f("bad.fvecs"), std::ios::binary);
    bad << "xyz";
  }
  CHECK(cli("build --vectors " + f("bad.fvecs") + " --colors " + f("c.bin") + " --out " +
            f("i.dvrs")).code == 3);
  CHECK(cli("build --vectors " + f("missing.fvecs") + " --colors " + f("c.bin") +
            " --out " + f("i.dvrs")).code == 3);
  REQUIRE(cli("gen-colors --scheme arxiv --n 150 --out " + f("short.bin")).code == 0);
  const auto mismatch = cli("build --vectors " + f("v.fvecs") + " --colors " +
                            f("short.bin") + " --out " + f("i.dvrs"));
  CHECK(mismatch.code == 3);
}

TEST_CASE("slow builders refuse large inputs without --force") {
  Scratch f("guard");
  REQUIRE(cli("gen-vectors --n 20001 --dim 2 --out " + f("v.fvecs")).code == 0);
  REQUIRE(cli("gen-colors --scheme arxiv --n 20001 --out " + f("c.bin")).code == 0);
  const auto r = cli("build --vectors " + f("v.fvecs") + " --colors " + f("c.bin") +
                     " --builder slow-colorful --out " + f("i.dvrs"));
  CHECK(r.code == 2);
  CHECK(r.out.find("--force") != std::string::npos);
  CHECK_FALSE(fs::exists(f("i.dvrs")));
}

}  // namespace
