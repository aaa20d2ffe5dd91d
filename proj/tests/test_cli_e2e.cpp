// Drives the installed CLI binary end to end over the shipped spec files and
// checks the documented exit-code contract.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;
int checks = 0;

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }
std::string q(const std::string& s) { return "\"" + s + "\""; }

int run(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void expect_exit(const std::string& what, const std::string& cmd, int expected) {
  ++checks;
  const int got = run(cmd);
  if (got != expected) {
    ++failures;
    std::fprintf(stderr, "FAIL %s: exit %d, expected %d\n   %s\n", what.c_str(), got, expected,
                 cmd.c_str());
  } else {
    std::printf("ok   %s (exit %d)\n", what.c_str(), got);
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <haar-walk binary> <specs dir>\n", argv[0]);
    return 2;
  }
  const std::string bin = q(std::string(argv[1]));
  const fs::path specs = argv[2];
  const fs::path out1 = fs::temp_directory_path() / "hw_e2e_out1";
  const fs::path out2 = fs::temp_directory_path() / "hw_e2e_out2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  expect_exit("group info builtin", bin + " group info --spec \"builtin:dihedral(4)\"", 0);
  expect_exit("group info circle", bin + " group info --spec circle", 0);
  expect_exit("group info file", bin + " group info --spec " + q("file:" + (specs / "klein4.group").string()), 0);
  expect_exit("group info bad spec", bin + " group info --spec \"builtin:lie(8)\"", 64);

  expect_exit("dual validate builtin", bin + " dual validate --group \"builtin:symmetric(4)\"", 0);
  expect_exit("dual validate missing", bin + " dual validate --group " +
                                           q("file:" + (specs / "klein4.group").string()),
              64);

  expect_exit("measure check finite", bin + " measure check --spec " + q(specs / "z2_quarter.measure"), 0);
  expect_exit("measure check circle", bin + " measure check --spec " + q(specs / "circle_atomic.measure"), 0);

  expect_exit("analyze z2",
              bin + " --out-dir " + q(out1) + " analyze --measure " + q(specs / "z2_quarter.measure") +
                  " --function " + q(specs / "z2_pm1.function"),
              0);
  expect_exit("analyze circle",
              bin + " --out-dir " + q(out1) + " analyze --window 128 --measure " +
                  q(specs / "circle_mixture.measure") + " --function " + q(specs / "circle_cos.function"),
              0);
  expect_exit("dual validate user file",
              bin + " dual validate --group " + q("file:" + (specs / "klein4.group").string()) +
                  " --dual " + q(specs / "klein4.dual"),
              0);
  expect_exit("analyze custom group with user dual",
              bin + " --out-dir " + q(out1) + " analyze --measure " + q(specs / "klein4.measure") +
                  " --function " + q(specs / "klein4.function") + " --dual " + q(specs / "klein4.dual"),
              0);
  expect_exit("analyze divergent instance still exits 0 with flags",
              bin + " --out-dir " + q(out1) + " analyze --measure " + q(specs / "z2_delta1.measure") +
                  " --function " + q(specs / "z2_pm1.function"),
              0);
  expect_exit("analyze missing dual for custom group",
              bin + " --out-dir " + q(out1) + " analyze --measure " + q(specs / "z2_quarter.measure") +
                  " --function " + q(specs / "s3_subgroup_indicator.function"),
              64);

  expect_exit("simulate",
              bin + " --out-dir " + q(out1) + " simulate --config " + q(specs / "z2.walk") + " --out " +
                  q(out1 / "sums.csv"),
              0);
  expect_exit("simulate again (same seed)",
              bin + " --out-dir " + q(out2) + " simulate --config " + q(specs / "z2.walk") + " --out " +
                  q(out2 / "sums.csv"),
              0);
  ++checks;
  if (slurp(out1 / "sums.csv") != slurp(out2 / "sums.csv") || slurp(out1 / "sums.csv").empty()) {
    ++failures;
    std::fprintf(stderr, "FAIL simulate outputs are not byte-identical\n");
  } else {
    std::printf("ok   simulate outputs byte-identical\n");
  }
  expect_exit("simulate over budget",
              bin + " --budget 1000 --out-dir " + q(out1) + " simulate --config " + q(specs / "z2.walk"),
              65);

  expect_exit("verify all on the solvable instance",
              bin + " --out-dir " + q(out1) + " verify all --config " + q(specs / "z2.walk"), 0);
  expect_exit("verify all on the circle mixture",
              bin + " --out-dir " + q(out1) + " verify all --config " + q(specs / "circle_mixture.walk"),
              0);
  expect_exit("verify clt degenerate",
              bin + " --out-dir " + q(out1) + " verify clt --config " + q(specs / "z2_degenerate.walk"),
              2);
  expect_exit("verify slln non-adapted fails",
              bin + " --out-dir " + q(out1) + " verify slln --config " + q(specs / "s3_nonadapted.walk"),
              1);
  expect_exit("verify slln non-adapted with --expect-fail",
              bin + " --expect-fail --out-dir " + q(out1) + " verify slln --config " +
                  q(specs / "s3_nonadapted.walk"),
              0);
  expect_exit("verify unknown law",
              bin + " --out-dir " + q(out1) + " verify bogus --config " + q(specs / "z2.walk"), 64);

  expect_exit("report over results", bin + " --out-dir " + q(out1) + " report --in " + q(out1), 0);
  fs::path empty_dir = fs::temp_directory_path() / "hw_e2e_empty";
  fs::create_directories(empty_dir);
  expect_exit("report on empty dir", bin + " --out-dir " + q(out1) + " report --in " + q(empty_dir), 66);
  expect_exit("report on absent dir",
              bin + " --out-dir " + q(out1) + " report --in " + q(empty_dir / "nope"), 66);

  std::printf("%d/%d e2e checks passed\n", checks - failures, checks);
  return failures == 0 ? 0 : 1;
}
