// Runs the command-line tool in a child process and collects stdout and the exit code.
#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace epsdist::testing {

struct CliRun {
  int code = -1;
  std::string out;
};

inline CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(EPSDIST_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  CliRun r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

/// A scratch directory holding the loop-pair system files.
struct Workspace {
  std::filesystem::path dir;
  std::string left;
  std::string right;

  Workspace() {
    std::random_device rd;
    dir = std::filesystem::temp_directory_path() / ("epsdist-" + std::to_string(rd()));
    std::filesystem::create_directories(dir);
    left = write("left.json", R"({"type":"markov_chain","states":["x"],"transitions":{"x":{"x":"1"}}})");
    right = write("right.json", R"({"type":"markov_chain","states":["y"],"transitions":{"y":{"y":"0.9"}}})");
  }
  ~Workspace() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(dir / name) << content;
    return path(name);
  }

  /// " --left L --right R --lx x --ry y"
  std::string pair() const { return " --left " + left + " --right " + right + " --lx x --ry y"; }
};

}  // namespace epsdist::testing
