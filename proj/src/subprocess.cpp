// Copyright 2026 The falsealarm Authors.
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

#include "fa/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <system_error>
#include <thread>

#include "fa/errors.hpp"

namespace fa {
namespace {

class Pipe {
 public:
  Pipe() {
    if (::pipe2(fds_, O_CLOEXEC) != 0) throw IoError(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    CloseRead();
    CloseWrite();
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;

  int read_fd() const { return fds_[0]; }
  int write_fd() const { return fds_[1]; }
  void CloseRead() { Close(fds_[0]); }
  void CloseWrite() { Close(fds_[1]); }

 private:
  static void Close(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
  int fds_[2] = {-1, -1};
};

// Returns false on EOF.
bool Drain(int fd, std::string& sink) {
  char buf[4096];
  for (;;) {
    const ssize_t n = ::read(fd, buf, sizeof buf);
    if (n > 0) {
      sink.append(buf, static_cast<std::size_t>(n));
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

}  // namespace

ProcessResult RunProcess(const std::vector<std::string>& argv, std::chrono::duration<double> timeout) {
  if (argv.empty()) throw IoError("empty command");
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  Pipe out;
  Pipe err;
  Pipe exec_status;  // written by the child only when exec fails

  const pid_t pid = ::fork();
  if (pid < 0) throw IoError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::dup2(out.write_fd(), STDOUT_FILENO);
    ::dup2(err.write_fd(), STDERR_FILENO);
    ::execvp(cargv[0], cargv.data());
    const int code = errno;
    [[maybe_unused]] auto ignored = ::write(exec_status.write_fd(), &code, sizeof code);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out.CloseWrite();
  err.CloseWrite();
  exec_status.CloseWrite();

  int exec_errno = 0;
  if (::read(exec_status.read_fd(), &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw IoError("cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ::fcntl(out.read_fd(), F_SETFL, O_NONBLOCK);
  ::fcntl(err.read_fd(), F_SETFL, O_NONBLOCK);

  ProcessResult result;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout);
  bool out_open = true;
  bool err_open = true;
  int status = 0;
  bool reaped = false;

  while (true) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    if (!out_open && !err_open) {
      const pid_t w = ::waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        reaped = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      continue;
    }
    pollfd fds[2];
    nfds_t count = 0;
    if (out_open) fds[count++] = {out.read_fd(), POLLIN, 0};
    if (err_open) fds[count++] = {err.read_fd(), POLLIN, 0};
    const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    const int ready = ::poll(fds, count, static_cast<int>(std::min<long long>(wait_ms + 1, 100)));
    if (ready < 0 && errno != EINTR) break;
    if (out_open) out_open = Drain(out.read_fd(), result.standard_output);
    if (err_open) err_open = Drain(err.read_fd(), result.standard_error);
  }

  if (!reaped) {
    if (result.timed_out) ::kill(-pid, SIGKILL);
    ::waitpid(pid, &status, 0);
  }
  if (!result.timed_out && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

TempDir::TempDir(const std::filesystem::path& parent, const std::string& prefix) {
  std::filesystem::create_directories(parent);
  std::string templ = (parent / (prefix + "XXXXXX")).string();
  if (::mkdtemp(templ.data()) == nullptr)
    throw IoError("cannot create temp directory under " + parent.string() + ": " + std::strerror(errno));
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path UniqueSiblingPath(const std::filesystem::path& target, const std::string& tag) {
  static std::atomic<unsigned long long> counter{0};
  const auto n = counter.fetch_add(1);
  auto name = target.stem().string() + "." + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(n) +
              target.extension().string();
  return target.parent_path() / name;
}

}  // namespace fa
