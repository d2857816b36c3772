#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <optional>
#include <set>

#include <json.hpp>

#include "echonet/error.hpp"
#include "echonet/scorer.hpp"

namespace echonet {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Owns the child process and both pipe ends; kills and reaps on scope exit.
class ChildProcess {
 public:
  explicit ChildProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw ConfigError("external scorer command is empty");
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw ScorerError(std::string("pipe: ") + std::strerror(errno));
    pid_ = fork();
    if (pid_ < 0) throw ScorerError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_ = to_child[1];
    out_ = from_child[0];
    fcntl(in_, F_SETFL, fcntl(in_, F_GETFL) | O_NONBLOCK);
    fcntl(out_, F_SETFL, fcntl(out_, F_GETFL) | O_NONBLOCK);
  }

  ~ChildProcess() {
    close_input();
    if (out_ >= 0) close(out_);
    if (pid_ > 0) {
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  int input() const { return in_; }
  int output() const { return out_; }
  void close_input() {
    if (in_ >= 0) close(in_);
    in_ = -1;
  }
  void close_output() {
    if (out_ >= 0) close(out_);
    out_ = -1;
  }

 private:
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
};

// Pumps `outgoing` into the child while collecting complete lines from it,
// until `done` says stop or the deadline passes.
class Session {
 public:
  Session(ChildProcess& child, Clock::time_point deadline) : child_(child), deadline_(deadline) {}

  void send(const std::string& line) { pending_ += line + '\n'; }

  // Returns the next line from the child, pumping pending input meanwhile.
  std::optional<std::string> next_line() {
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      if (eof_) {
        if (buffer_.empty()) return std::nullopt;
        std::string line = std::move(buffer_);
        buffer_.clear();
        return line;
      }
      pump();
    }
  }

  // Writes everything still pending (used before waiting on a reply).
  void flush() {
    while (offset_ < pending_.size()) pump();
  }

 private:
  void pump() {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline_ - Clock::now());
    if (remaining.count() <= 0) throw ScorerTimeout("external scorer timed out");
    pollfd fds[2];
    int count = 0;
    const bool writing = offset_ < pending_.size() && child_.input() >= 0;
    if (!eof_) fds[count++] = {child_.output(), POLLIN, 0};
    if (writing) fds[count++] = {child_.input(), POLLOUT, 0};
    if (count == 0) throw ScorerError("external scorer session stalled");
    const int ready = poll(fds, count, static_cast<int>(std::min<long long>(remaining.count(), 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) return;
      throw ScorerError(std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) throw ScorerTimeout("external scorer timed out");
    for (int i = 0; i < count; ++i) {
      if (fds[i].fd == child_.output() && (fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
        char buf[65536];
        const ssize_t got = read(child_.output(), buf, sizeof(buf));
        if (got > 0) {
          buffer_.append(buf, static_cast<std::size_t>(got));
        } else if (got == 0 || (errno != EAGAIN && errno != EINTR)) {
          eof_ = true;
        }
      } else if (fds[i].fd == child_.input() && (fds[i].revents & (POLLOUT | POLLERR | POLLHUP))) {
        const ssize_t put = write(child_.input(), pending_.data() + offset_, pending_.size() - offset_);
        if (put > 0) {
          offset_ += static_cast<std::size_t>(put);
        } else if (put < 0 && errno != EAGAIN && errno != EINTR) {
          throw ScorerError("external scorer closed its input early");
        }
      }
    }
  }

  ChildProcess& child_;
  Clock::time_point deadline_;
  std::string pending_;
  std::size_t offset_ = 0;
  std::string buffer_;
  bool eof_ = false;
};

[[noreturn]] void violation(const std::string& what, const std::string& line) {
  throw ScorerError("scorer protocol violation (" + what + "): " + line);
}

}  // namespace

ExternalScorer::ExternalScorer(ExternalScorerConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.argv.empty()) throw ConfigError("external scorer command is empty");
}

void ExternalScorer::train(std::span<const LabeledPost> posts) {
  std::set<int> classes;
  for (const auto& p : posts) classes.insert(p.label ? 1 : 0);
  if (classes.size() < 2) throw TrainingError("scorer training needs both classes");
  training_.assign(posts.begin(), posts.end());
}

std::vector<double> ExternalScorer::score(std::span<const std::string> texts) {
  if (texts.empty() && training_.empty()) return {};
  signal(SIGPIPE, SIG_IGN);
  ChildProcess child(cfg_.argv);
  Session session(child, Clock::now() + cfg_.timeout);

  const auto hello = session.next_line();
  if (!hello) throw ScorerError("external scorer exited before its handshake");
  const json hs = json::parse(*hello, nullptr, false);
  if (hs.is_discarded() || !hs.is_object() || hs.value("protocol", "") != kScorerProtocol ||
      hs.value("role", "") != "scorer")
    violation("bad handshake", *hello);

  if (!training_.empty()) {
    for (std::size_t i = 0; i < training_.size(); ++i)
      session.send(json{{"id", i}, {"text", training_[i].text}, {"label", training_[i].label}}.dump());
    session.send(json{{"train", true}}.dump());
  }
  for (std::size_t i = 0; i < texts.size(); ++i) session.send(json{{"id", i}, {"text", texts[i]}}.dump());
  session.send(json{{"eof", true}}.dump());
  session.flush();
  child.close_input();

  std::vector<double> scores(texts.size(), 0.0);
  std::vector<bool> seen(texts.size(), false);
  std::size_t answered = 0;
  bool got_eof = false;
  while (auto line = session.next_line()) {
    if (line->empty()) continue;
    const json msg = json::parse(*line, nullptr, false);
    if (msg.is_discarded() || !msg.is_object()) violation("malformed line", *line);
    if (msg.value("eof", false)) {
      got_eof = true;
      break;
    }
    if (!msg.contains("id") || !msg["id"].is_number_integer()) violation("missing id", *line);
    const auto id = msg["id"].get<long long>();
    if (msg.contains("error"))
      throw ScorerError("external scorer rejected request " + std::to_string(id) + ": " + *line);
    if (id < 0 || static_cast<std::size_t>(id) >= texts.size()) violation("unknown id", *line);
    if (seen[id]) violation("duplicate id", *line);
    if (!msg.contains("score") || !msg["score"].is_number()) violation("missing score", *line);
    const double s = msg["score"].get<double>();
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) violation("score outside [0,1]", *line);
    scores[id] = s;
    seen[id] = true;
    ++answered;
  }
  if (!got_eof) throw ScorerError("external scorer ended without eof");
  if (answered != texts.size())
    throw ScorerError("external scorer answered " + std::to_string(answered) + " of " +
                      std::to_string(texts.size()) + " requests");
  return scores;
}

}  // namespace echonet
