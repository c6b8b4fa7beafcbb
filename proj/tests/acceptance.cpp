#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "specanom/acceptance.hpp"
#include "specanom/cli.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Selftest {
  int code;
  std::string out;
  double seconds;
};

Selftest run_selftest(std::vector<std::string> args) {
  args.insert(args.begin(), {"specanom", "--no-timestamp"});
  args.push_back("selftest");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const auto start = Clock::now();
  const int code = specanom::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), seconds_since(start)};
}

void print(int number, const std::string& title, bool pass, const std::string& note) {
  std::printf("criterion %2d: %s  %s (%s)\n", number, pass ? "PASS" : "FAIL", title.c_str(), note.c_str());
}

}  // namespace

int main() {
  bool all = true;
  for (const auto& c : specanom::acceptance::criteria()) {
    const auto start = Clock::now();
    const specanom::cli::TaskResult r = specanom::acceptance::run_criterion(c);
    const double elapsed = seconds_since(start);
    double worst = 0.0;
    for (const auto& e : r.entries) worst = std::max(worst, e.discrepancy);
    char note[160];
    if (r.error.empty()) {
      std::snprintf(note, sizeof note, "%zu checks, max discrepancy %.2e, %.2f s", r.entries.size(), worst, elapsed);
    } else {
      std::snprintf(note, sizeof note, "error: %s", r.error.c_str());
    }
    print(c.number, c.title, r.pass, note);
    all = all && r.pass;
  }

  // Criterion 12: the selftest subcommand end to end.
  const Selftest first = run_selftest({});
  const Selftest second = run_selftest({});
  const Selftest parallel = run_selftest({"--jobs", "4"});
  const bool exit_ok = first.code == 0 && second.code == 0 && parallel.code == 0;
  const bool deterministic = first.out == second.out && first.out == parallel.out && !first.out.empty();
  const bool fast = first.seconds < 120.0;
  char note[160];
  std::snprintf(note, sizeof note, "exit %d, %.2f s, byte-identical reruns: %s", first.code, first.seconds,
                deterministic ? "yes" : "no");
  const bool pass12 = exit_ok && deterministic && fast;
  print(12, "selftest via the command line", pass12, note);
  all = all && pass12;
  return all ? 0 : 1;
}
