#ifndef PERSUAIDE_ADAPTER_HPP
#define PERSUAIDE_ADAPTER_HPP

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "persuaide/conllu.hpp"
#include "persuaide/errors.hpp"

#include <httplib.h>

namespace persuaide {

// Where raw-text parses come from at runtime. The artifact never parses
// text itself; it shells out to, or calls, something that returns CoNLL-U.
//   command: argv vector, raw text on stdin, CoNLL-U on stdout
//   http:    POST raw text to url, CoNLL-U response body
//   file:    replay a frozen CoNLL-U file (fixtures, offline runs)
struct ParserAdapterConfig {
  enum class Kind { command, http, file };

  Kind kind = Kind::command;
  std::vector<std::string> command;
  std::string url;
  std::string path;
  int timeout_ms = 10000;
};

namespace detail {

inline void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct SubprocessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool timed_out = false;
};

// Runs argv with input on stdin, collecting stdout/stderr until EOF or
// the deadline; on timeout the child is killed.
inline SubprocessResult run_subprocess(const std::vector<std::string>& argv,
                                       const std::string& input,
                                       int timeout_ms) {
  ignore_sigpipe_once();
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw AdapterError("pipe() failed", std::strerror(errno));

  pid_t pid = fork();
  if (pid < 0) throw AdapterError("fork() failed", std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1],
                   err_pipe[0], err_pipe[1]})
      close(fd);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    const char* msg = "exec failed\n";
    ssize_t ignored = write(STDERR_FILENO, msg, std::strlen(msg));
    (void)ignored;
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  // Sentences are small; a full write before reading cannot deadlock
  // within the pipe buffer, and EPIPE just means the child quit early.
  std::size_t written = 0;
  while (written < input.size()) {
    ssize_t n = write(in_pipe[1], input.data() + written,
                      input.size() - written);
    if (n < 0) {
      if (errno == EPIPE) break;
      if (errno == EINTR) continue;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  close(in_pipe[1]);

  SubprocessResult result;
  struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  bool open_fd[2] = {true, true};
  std::string* sinks[2] = {&result.out, &result.err};
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(timeout_ms);
  char buf[4096];
  while (open_fd[0] || open_fd[1]) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      result.timed_out = true;
      break;
    }
    for (int i = 0; i < 2; ++i) fds[i].events = open_fd[i] ? POLLIN : 0;
    int rc = poll(fds, 2, static_cast<int>(left));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) {
      result.timed_out = true;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fd[i] || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
      ssize_t n = read(fds[i].fd, buf, sizeof(buf));
      if (n > 0)
        sinks[i]->append(buf, static_cast<std::size_t>(n));
      else
        open_fd[i] = false;
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  if (result.timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    return result;
  }
  int status = 0;
  waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string http_fetch_conllu(const std::string& url,
                                     const std::string& raw, int timeout_ms) {
  std::size_t scheme = url.find("://");
  if (scheme == std::string::npos)
    throw AdapterError("bad adapter url '" + url + "'");
  std::size_t slash = url.find('/', scheme + 3);
  std::string base = slash == std::string::npos ? url : url.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);

  httplib::Client client(base);
  client.set_connection_timeout(0, timeout_ms * 1000);
  client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  client.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
  auto res = client.Post(path, raw, "text/plain; charset=utf-8");
  if (!res)
    throw AdapterError("parser endpoint unreachable: " + url,
                       httplib::to_string(res.error()));
  if (res->status != 200)
    throw AdapterError("parser endpoint returned HTTP " +
                           std::to_string(res->status),
                       res->body);
  return res->body;
}

}  // namespace detail

// Parses raw text through the configured adapter and returns the first
// sentence of the returned CoNLL-U.
inline ParsedSentence parse_external(const std::string& raw,
                                     const ParserAdapterConfig& adapter) {
  if (raw.empty()) throw AdapterError("empty input text");

  std::string conllu;
  switch (adapter.kind) {
    case ParserAdapterConfig::Kind::command: {
      if (adapter.command.empty())
        throw AdapterError("command adapter has empty argv");
      detail::SubprocessResult r =
          detail::run_subprocess(adapter.command, raw, adapter.timeout_ms);
      if (r.timed_out)
        throw AdapterError("parser command timed out after " +
                               std::to_string(adapter.timeout_ms) + " ms",
                           r.err);
      if (r.exit_code != 0)
        throw AdapterError("parser command exited with status " +
                               std::to_string(r.exit_code),
                           r.err);
      conllu = std::move(r.out);
      break;
    }
    case ParserAdapterConfig::Kind::http:
      conllu = detail::http_fetch_conllu(adapter.url, raw, adapter.timeout_ms);
      break;
    case ParserAdapterConfig::Kind::file: {
      std::ifstream in(adapter.path, std::ios::binary);
      if (!in)
        throw AdapterError("cannot open replay file '" + adapter.path + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      conllu = buf.str();
      break;
    }
  }

  std::vector<ParsedSentence> sentences = parse_conllu(conllu);
  if (sentences.empty())
    throw AdapterError("adapter produced empty CoNLL-U",
                       conllu.substr(0, 200));
  return sentences.front();
}

}  // namespace persuaide

#endif  // PERSUAIDE_ADAPTER_HPP
