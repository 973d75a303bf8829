#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdz/cli.hpp"
#include "pdz/container.hpp"
#include "pdz/error.hpp"

namespace fs = std::filesystem;
using namespace pdz;

namespace {

struct scratch_dir {
    fs::path path;
    scratch_dir() {
        path = fs::temp_directory_path() / ("pdz_cli_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~scratch_dir() { fs::remove_all(path); }
    [[nodiscard]] std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct result {
    int code;
    std::string out;
    std::string err;
};

result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
    const auto at = text.find(key + ": ");
    if (at == std::string::npos) return {};
    const auto start = at + key.size() + 2;
    return text.substr(start, text.find_first_of(" \n", start) - start);
}

}  // namespace

TEST_CASE("compress reports payload sizes") {
    scratch_dir dir;
    write_text(dir.file("u4.txt"), "1\n1\n1\n1\n");
    auto r = run({"compress", "--method", "tree", dir.file("u4.txt"), dir.file("u4.pdz")});
    CHECK(r.code == cli::exit_ok);
    CHECK(field(r.out, "payload_bits") == "6");

    std::string hundred;
    for (int i = 1; i <= 100; ++i) hundred += std::to_string(i) + "\n";
    write_text(dir.file("h.txt"), hundred);
    r = run({"compress", "--method", "refine", "--k", "5", dir.file("h.txt"), dir.file("h.pdz")});
    CHECK(r.code == cli::exit_ok);
    CHECK(field(r.out, "payload_bits") == "498");
}

TEST_CASE("stats on (0.9, 0.1)") {
    scratch_dir dir;
    write_text(dir.file("p.txt"), "0.9\n0.1\n");
    REQUIRE(run({"compress", "--method", "tree", dir.file("p.txt"), dir.file("p.pdz")}).code == 0);
    const auto r = run({"stats", "--original", dir.file("p.txt"), "--compressed", dir.file("p.pdz")});
    CHECK(r.code == cli::exit_ok);
    CHECK(std::abs(std::stod(field(r.out, "relative_entropy_bits")) - 0.5310) < 1e-4);
    CHECK(field(r.out, "max_ratio") == "9/5");
    CHECK(r.out.find("bound: < 2\n") != std::string::npos);
    CHECK(r.out.find("bound: < 4\n") != std::string::npos);
    CHECK(field(r.out, "within_bounds") == "yes");
}

TEST_CASE("decompress, query and info") {
    scratch_dir dir;
    write_text(dir.file("p.txt"), "# weights\n5\n3\n1\n1\n");
    REQUIRE(run({"compress", "--method", "tree", dir.file("p.txt"), dir.file("p.pdz")}).code == 0);
    REQUIRE(run({"decompress", dir.file("p.pdz"), dir.file("q.txt")}).code == 0);
    const std::string q = read_text(dir.file("q.txt"));
    CHECK(q == "0.5\n0.25\n0.125\n0.125\n");
    auto r = run({"query", "--index", "2", dir.file("p.pdz")});
    CHECK(r.code == 0);
    CHECK(r.out == "0.25\n");
    r = run({"info", dir.file("p.pdz")});
    CHECK(field(r.out, "method") == "tree");
    CHECK(field(r.out, "n") == "4");

    // Recompressing the dyadic output reproduces the container byte for byte.
    REQUIRE(run({"compress", "--method", "tree", dir.file("q.txt"), dir.file("q.pdz")}).code == 0);
    CHECK(cli::read_file(dir.file("q.pdz")) == cli::read_file(dir.file("p.pdz")));

    REQUIRE(run({"compress", "--method", "refine", "--k", "4", dir.file("p.txt"), dir.file("r.pdz")}).code == 0);
    REQUIRE(run({"decompress", dir.file("r.pdz"), dir.file("r.txt")}).code == 0);
    REQUIRE(run({"compress", "--method", "refine", "--k", "4", dir.file("r.txt"), dir.file("r2.pdz")}).code == 0);
    CHECK(cli::read_file(dir.file("r2.pdz")) == cli::read_file(dir.file("r.pdz")));
    for (int i = 1; i <= 4; ++i) {
        r = run({"query", "--index", std::to_string(i), dir.file("r.pdz")});
        CHECK(r.code == 0);
    }
}

TEST_CASE("sparse methods through the CLI") {
    scratch_dir dir;
    std::string text = "0.5\n0.3\n";
    for (int i = 0; i < 14; ++i) text += "1/70\n";
    write_text(dir.file("s.txt"), text);
    auto r = run({"compress", "--method", "sparse-queryable", "--c", "1", dir.file("s.txt"), dir.file("s.pdz")});
    CHECK(r.code == 0);
    CHECK(field(r.out, "payload_bits") == "16");
    r = run({"query", "--index", "2", dir.file("s.pdz")});
    CHECK(std::abs(std::stod(r.out) - 0.0759908877317533) < 1e-12);
    REQUIRE(run({"decompress", "--digits", "6", dir.file("s.pdz"), dir.file("s.out")}).code == 0);
    CHECK(read_text(dir.file("s.out")).substr(0, 9) == "0.303964\n");
    r = run({"stats", "--original", dir.file("s.txt"), "--compressed", dir.file("s.pdz")});
    CHECK(field(r.out, "within_bounds") == "yes");
    CHECK(field(r.out, "max_ratio") != "");
}

TEST_CASE("usage errors exit with 1") {
    scratch_dir dir;
    write_text(dir.file("p.txt"), "1\n2\n");
    CHECK(run({}).code == cli::exit_usage);
    CHECK(run({"frobnicate"}).code == cli::exit_usage);
    CHECK(run({"compress", "--method", "refine", dir.file("p.txt"), dir.file("o")}).code == cli::exit_usage);
    CHECK(run({"compress", "--method", "sparse", dir.file("p.txt"), dir.file("o")}).code == cli::exit_usage);
    CHECK(run({"compress", "--method", "huffman", dir.file("p.txt"), dir.file("o")}).code == cli::exit_usage);
    CHECK(run({"compress", "--method", "sparse", "--c", "1", "--epsilon", "1", dir.file("p.txt"), dir.file("o")})
              .code == cli::exit_usage);
    CHECK(run({"compress", "--method", "tree", "--epsilon", "-1", dir.file("p.txt"), dir.file("o")}).code ==
          cli::exit_usage);
    CHECK(run({"compress", "--method", "refine", "--k", "1", dir.file("p.txt"), dir.file("o")}).code ==
          cli::exit_usage);
    CHECK(run({"compress", "--method", "sparse", "--c", "1/2", dir.file("p.txt"), dir.file("o")}).code ==
          cli::exit_usage);
    CHECK(run({"query", dir.file("p.txt")}).code == cli::exit_usage);
}

TEST_CASE("data errors exit with 2") {
    scratch_dir dir;
    write_text(dir.file("z.txt"), "1\n0\n1\n");
    auto r = run({"compress", "--method", "tree", dir.file("z.txt"), dir.file("z.pdz")});
    CHECK(r.code == cli::exit_data);
    CHECK(r.err.find("epsilon") != std::string::npos);
    CHECK(run({"compress", "--method", "tree", "--epsilon", "1/10", dir.file("z.txt"), dir.file("z.pdz")}).code ==
          cli::exit_ok);
    CHECK(run({"compress", "--method", "sparse", "--c", "2", dir.file("z.txt"), dir.file("s.pdz")}).code ==
          cli::exit_ok);

    write_text(dir.file("junk.pdz"), "not a container");
    CHECK(run({"info", dir.file("junk.pdz")}).code == cli::exit_data);
    CHECK(run({"decompress", dir.file("missing.pdz"), dir.file("o")}).code == cli::exit_data);
    write_text(dir.file("neg.txt"), "1\n-1\n");
    CHECK(run({"compress", "--method", "tree", dir.file("neg.txt"), dir.file("o")}).code == cli::exit_data);

    auto bytes = cli::read_file(dir.file("z.pdz"));
    bytes[bytes.size() / 2] ^= 0x10;
    std::ofstream(dir.file("flip.pdz"), std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    r = run({"decompress", dir.file("flip.pdz"), dir.file("o")});
    CHECK(r.code == cli::exit_data);

    write_text(dir.file("three.txt"), "1\n1\n1\n");
    CHECK(run({"stats", "--original", dir.file("three.txt"), "--compressed", dir.file("s.pdz")}).code ==
          cli::exit_ok);
    write_text(dir.file("two.txt"), "1\n1\n");
    CHECK(run({"stats", "--original", dir.file("two.txt"), "--compressed", dir.file("s.pdz")}).code ==
          cli::exit_data);
}

TEST_CASE("the executable reports the same exit codes") {
    scratch_dir dir;
    write_text(dir.file("p.txt"), "1\n3\n");
    const std::string exe = PDZ_CLI_PATH;
    auto status = [](const std::string& cmd) { return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str())); };
    CHECK(status(exe + " compress --method tree " + dir.file("p.txt") + " " + dir.file("p.pdz")) == 0);
    CHECK(status(exe + " info " + dir.file("p.pdz")) == 0);
    CHECK(status(exe + " compress --method refine " + dir.file("p.txt") + " " + dir.file("x")) == 1);
    CHECK(status(exe + " info " + dir.file("p.txt")) == 2);
}
