#include "infolaw/compressor.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <vector>

#include "infolaw/error.hpp"

extern char** environ;

namespace infolaw {
namespace {

std::uint64_t ceil_log2(std::uint64_t i) {
  return i <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(i - 1));
}

std::uint64_t lz78b_length(const BitString& x) {
  const std::uint64_t p = lz78_phrase_count(x);
  std::uint64_t bits = gamma_encode(p + 1).size();
  for (std::uint64_t i = 1; i <= p; ++i) bits += ceil_log2(i) + 1;
  return bits;
}

class TempFile {
 public:
  TempFile() {
    const char* dir = std::getenv("TMPDIR");
    std::string pattern = std::string(dir ? dir : "/tmp") + "/infolaw-plugin-XXXXXX";
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    fd_ = ::mkstemp(buf.data());
    if (fd_ < 0) throw Error(Errc::plugin_failure, "cannot create temporary file");
    path_ = buf.data();
  }
  ~TempFile() {
    if (fd_ >= 0) ::close(fd_);
    ::unlink(path_.c_str());
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  void write_all(const std::vector<std::uint8_t>& bytes) {
    std::size_t done = 0;
    while (done < bytes.size()) {
      const auto n = ::write(fd_, bytes.data() + done, bytes.size() - done);
      if (n <= 0) throw Error(Errc::plugin_failure, "cannot write plugin input");
      done += static_cast<std::size_t>(n);
    }
  }
  const std::string& path() const { return path_; }

 private:
  int fd_ = -1;
  std::string path_;
};

std::uint64_t plugin_length(const std::filesystem::path& exe, const BitString& x) {
  TempFile input;
  input.write_all(pack_bytes(x));

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw Error(Errc::plugin_failure, "pipe() failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, input.path().c_str(), O_RDONLY, 0);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipefd[0]);
  posix_spawn_file_actions_addclose(&actions, pipefd[1]);

  const std::string exe_str = exe.string();
  std::vector<char> arg0(exe_str.begin(), exe_str.end());
  arg0.push_back('\0');
  char* argv[] = {arg0.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, exe_str.c_str(), &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(pipefd[1]);
  if (rc != 0) {
    ::close(pipefd[0]);
    throw Error(Errc::plugin_failure, "cannot launch compressor plugin " + exe_str);
  }

  std::uint64_t bytes = 0;
  char buf[65536];
  for (;;) {
    const auto n = ::read(pipefd[0], buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) break;
    bytes += static_cast<std::uint64_t>(n);
  }
  ::close(pipefd[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(Errc::plugin_failure, "waitpid failed for " + exe_str);
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(Errc::plugin_failure, "compressor plugin " + exe_str + " exited with failure");
  }
  return 8 * bytes;
}

}  // namespace

std::uint64_t lz78_phrase_count(const BitString& x) {
  // Trie over phrases; node 0 is the empty phrase.
  std::vector<std::array<std::uint32_t, 2>> trie(1, {0, 0});
  std::uint64_t phrases = 0;
  std::uint32_t node = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::uint8_t bit = x[i];
    if (trie[node][bit] != 0) {
      node = trie[node][bit];
      continue;
    }
    trie[node][bit] = static_cast<std::uint32_t>(trie.size());
    trie.push_back({0, 0});
    ++phrases;
    node = 0;
  }
  if (node != 0) ++phrases;
  return phrases;
}

Compressor Compressor::lz78b() { return Compressor(Kind::lz78b, "lz78b", {}); }

Compressor Compressor::plugin(std::filesystem::path executable) {
  std::string name = "plugin:" + executable.string();
  return Compressor(Kind::plugin, std::move(name), std::move(executable));
}

Compressor Compressor::from_selection(const std::string& selection) {
  if (selection == "lz78b") return lz78b();
  if (!std::filesystem::exists(selection)) {
    throw Error(Errc::plugin_failure, "compressor \"" + selection + "\" is neither lz78b nor an existing path");
  }
  return plugin(selection);
}

std::uint64_t Compressor::code_length(const BitString& x) const {
  return kind_ == Kind::lz78b ? lz78b_length(x) : plugin_length(path_, x);
}

std::uint64_t c_pair(const Compressor& h, const BitString& x, const BitString& y) {
  return std::min(h.code_length(concat(x, y)), h.code_length(concat(y, x)));
}

std::uint64_t cond_approx(const Compressor& h, const BitString& y, const BitString& x) {
  const std::uint64_t joint = c_pair(h, x, y);
  const std::uint64_t cx = h.code_length(x);
  return joint > cx ? joint - cx : 0;
}

std::uint64_t e_max(const Compressor& h, const BitString& x, const BitString& y) {
  return std::max(cond_approx(h, x, y), cond_approx(h, y, x));
}

std::uint64_t e_sum(const Compressor& h, const BitString& x, const BitString& y) {
  return cond_approx(h, x, y) + cond_approx(h, y, x);
}

double ncd(const Compressor& h, const BitString& x, const BitString& y) {
  if (x.empty() && y.empty()) throw Error(Errc::domain_error, "ncd undefined for two empty strings");
  const auto cx = h.code_length(x), cy = h.code_length(y);
  const auto hi = std::max(cx, cy), lo = std::min(cx, cy);
  if (hi == 0) throw Error(Errc::domain_error, "ncd undefined: zero code lengths");
  const auto joint = c_pair(h, x, y);
  return (static_cast<double>(joint) - static_cast<double>(lo)) / static_cast<double>(hi);
}

}  // namespace infolaw
