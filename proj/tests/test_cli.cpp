#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LGOSC_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data_lines(const std::string& text) {
  std::string out, line;
  std::istringstream in(text);
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out += line + "\n";
  return out;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("lg --s 0.99 --gamma 7.6 --phi 0.27").code == 0);
  CHECK(run("lg --s 1.5 --gamma 7.6 --phi 0.27").code == 1);
  CHECK(run("correlation --s 0.5 --gamma -2 --phi 0.1").code == 1);
  CHECK(run("no-such-command").code == 1);
  CHECK(run("lg --s 0.9").code == 1);
  CHECK(run("--help").code == 0);
  CHECK(run("correlation --s 0.999999 --gamma 1000 --phi 0.01 --method fock --max-dim 128").code == 2);
  CHECK(run("verify --tol 0").code == 3);
}

TEST_CASE("CSV schema and method tags") {
  const Run r = run("correlation --s 0.9 --gamma 4 --phi 0 --method fock");
  REQUIRE(r.code == 0);
  const std::string body = data_lines(r.out);
  CHECK(body.rfind("s,gamma,phi,method,value,dim_used,converged\n", 0) == 0);
  CHECK(body.find(",fock,0.9153749") != std::string::npos);
  CHECK(body.find(",true\n") != std::string::npos);
  CHECK(r.out.find("# command=correlation") != std::string::npos);
  CHECK(r.out.find("# correlation.method=fock") != std::string::npos);
}

TEST_CASE("scans are reproducible and independent of --parallel") {
  const std::string args = "scan --s 0.9,0.99 --gamma 3:8:3 --phi 0.1,0.3 --method contour --fock-dim 128";
  const Run a = run(args);
  const Run b = run(args);
  const Run c = run("--parallel 3 " + args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(data_lines(a.out) == data_lines(c.out));
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') - 1 >= 12);
}

TEST_CASE("JSON records for the photon experiment") {
  const Run r = run("--format json photon --s 0.9 --gamma 3 --phi-b 0.4 --shots 20000 --seed 5 --fock-dim 128");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& rec = doc["records"][0];
  CHECK(rec.contains("estimate"));
  CHECK(rec.contains("stderr"));
  CHECK(rec.contains("truncated_fraction"));
  CHECK(std::abs(rec["estimate"].get<double>() - rec["exact"].get<double>()) < 5 * rec["stderr"].get<double>());
  CHECK(doc["config"]["photon.seed"] == "5");
}

TEST_CASE("config file with command-line override") {
  const auto dir = std::filesystem::temp_directory_path() / "lgosc_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "run.ini";
  const auto out = dir / "out.csv";
  {
    std::ofstream f(cfg);
    f << "[lg]\ns=0.9\ngamma=5\nphi=0.3\n";
  }
  const Run r = run("--config " + cfg.string() + " --out " + out.string() + " lg --gamma 7.6");
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("\n0.90000000000000002,7.5999999999999996,0.29999999999999999,closed,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("other subcommands run") {
  CHECK(run("optimal-gamma --s 0.99").code == 0);
  CHECK(run("scaling --x 0.24 --one-minus-s 1e-4,1e-6").code == 0);
  CHECK(run("semiclassical --gamma 4 --phi 0.39").code == 0);
  CHECK(run("classical --s 0.99 --gamma 7.6 --phi 0.27 --quadrature").code == 0);
  CHECK(run("classical --s 0.99 --gamma 7.6 --phi 0.27 --samples 1000 --seed 3").code == 0);
  CHECK(run("photon-chsh --s 0.99 --gamma 5 --fock-dim 128").code == 0);
  CHECK(run("region --s-count 4 --gamma-count 4 --phi-grid 100").code == 0);
  CHECK(run("lg --s 0.99 --gamma 7.6 --phi 0.27 --method bipartite --fock-dim 256").code == 0);
}
