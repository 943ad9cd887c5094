// Spawns the CLI (path in argv[1]) and checks reproducibility and exit codes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifdef _WIN32
#error "posix only"
#endif
#include <sys/wait.h>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_determinism <path-to-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];

    // fast configs per subcommand; mc-check exercises the RNG contract
    struct Case {
        const char* name;
        std::string args;
    };
    const Case cases[] = {
        {"profile", "profile --ln-n 10,20 --b-grid -1,0,1"},
        {"shape", "shape --ln-n 100 --delta-grid 0.5,1,2"},
        {"no-cutoff", "no-cutoff --alpha 1 --c 1 --ln-n 4.6,9.2 --time-schedule 1.52,2.22"},
        {"evt-gap", "evt-gap --ln-n 10,100"},
        {"oracle-check", "oracle-check"},
        {"mc-check", "mc-check --samples 20000 --bins 32"},
    };
    for (const auto& c : cases) {
        const std::string a = std::string("det_") + c.name + "_a.csv";
        const std::string b = std::string("det_") + c.name + "_b.csv";
        const std::string d = std::string("det_") + c.name + "_d.csv";
        const int ra = run(cli + " " + c.args + " --out " + a);
        const int rb = run(cli + " " + c.args + " --out " + b);
        const int rd = run(cli + " " + c.args + " --threads 4 --out " + d);
        check(ra == 0, std::string(c.name) + " exits 0");
        check(rb == 0 && slurp(a) == slurp(b), std::string(c.name) + " reruns byte-identical");
        check(rd == 0 && slurp(a) == slurp(d),
              std::string(c.name) + " threads=4 byte-identical");
        check(!slurp(a).empty() && slurp(a)[0] == '#', std::string(c.name) + " config comment");
    }

    // exit code 2: parse and validation failures
    check(run(cli) == 2, "no subcommand exits 2");
    check(run(cli + " profile --no-such-flag") == 2, "unknown flag exits 2");
    check(run(cli + " profile --alpha 3 --out det_bad.csv") == 2, "alpha out of range exits 2");
    check(run(cli + " profile --alpha 1 --out det_bad.csv") == 2,
          "profile demands alpha = 2, exits 2");
    check(run(cli + " no-cutoff --alpha 2 --out det_bad.csv") == 2,
          "no-cutoff demands alpha < 2, exits 2");
    check(run(cli + " shape --ln-n 100 --delta-grid 0 --out det_bad.csv") == 3,
          "bad delta row exits 3");
    check(run(cli + " mc-check --ln-n 10 --out det_bad.csv") == 3,
          "non-integer n rows exit 3");
    check(run(cli + " --help") == 0, "help exits 0");

    if (failures) {
        std::printf("%d check(s) failed\n", failures);
        return 1;
    }
    std::printf("all determinism checks passed\n");
    return 0;
}
