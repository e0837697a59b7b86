#pragma once

#include <atomic>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <csignal>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "comfortopt/common.hpp"
#include "comfortopt/optimizer.hpp"

namespace comfortopt {

enum class BridgeErrorKind { BadTemplate, EvaluatorFailed, Timeout, KeyNotFound, BadNumber };

class BridgeError : public Error {
public:
    BridgeError(BridgeErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    BridgeErrorKind kind() const { return kind_; }

private:
    BridgeErrorKind kind_;
};

// Wire protocol, GenOpt style: the input template carries %name%
// placeholders, the evaluator writes a text file containing at least one
// line `key = <decimal>`; the last such line wins.
struct CouplingSpec {
    std::filesystem::path template_path;
    std::string rendered_input_name = "input.txt";
    std::string command;            // run by /bin/sh -c in a fresh work dir
    std::string output_name = "output.txt";
    std::string objective_key = "cost";
    double timeout_s = 60.0;
    bool error_on_unused_parameter = false;

    void validate() const {
        if (template_path.empty()) throw Error("coupling spec: template path missing");
        if (command.empty()) throw Error("coupling spec: command missing");
        if (!(timeout_s > 0.0)) throw Error("coupling spec: timeout must be > 0");
    }
};

using NamedValues = std::vector<std::pair<std::string, double>>;

namespace detail {

inline bool placeholder_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace detail

// Replaces every %name% with the 17-significant-digit rendering of the
// value, so the external program sees exactly the double the optimizer used.
inline std::string render_input(const std::string& template_text, const NamedValues& values,
                                bool error_on_unused_parameter = false) {
    std::string out;
    out.reserve(template_text.size());
    std::vector<bool> used(values.size(), false);

    std::size_t i = 0;
    while (i < template_text.size()) {
        const char c = template_text[i];
        if (c != '%') {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < template_text.size() && detail::placeholder_char(template_text[j])) ++j;
        if (j > i + 1 && j < template_text.size() && template_text[j] == '%') {
            const std::string name = template_text.substr(i + 1, j - i - 1);
            bool found = false;
            for (std::size_t k = 0; k < values.size(); ++k) {
                if (values[k].first == name) {
                    out += format_full(values[k].second);
                    used[k] = true;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw BridgeError(BridgeErrorKind::BadTemplate, "template placeholder '%" + name + "%' has no matching parameter");
            i = j + 1;
        } else {
            out.push_back(c); // a bare % is literal text
            ++i;
        }
    }

    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!used[k]) {
            const std::string msg = "parameter '" + values[k].first + "' has no placeholder in the template";
            if (error_on_unused_parameter) throw BridgeError(BridgeErrorKind::BadTemplate, msg);
            std::fprintf(stderr, "warning: %s\n", msg.c_str());
        }
    }
    return out;
}

namespace detail {

struct RunStatus {
    bool timed_out = false;
    int exit_code = 0;
    bool signalled = false;
    int signal = 0;
};

// /bin/sh -c in its own process group; on timeout the whole group is
// SIGKILLed and the child reaped, so no orphan survives.
inline RunStatus run_command(const std::string& command, const std::filesystem::path& workdir, double timeout_s) {
    const pid_t pid = ::fork();
    if (pid < 0) throw Error("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        ::setpgid(0, 0);
        if (::chdir(workdir.c_str()) != 0) _exit(126);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    ::setpgid(pid, pid); // either side may win the race; both set the same group

    RunStatus status;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
    int wstatus = 0;
    for (;;) {
        const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
        if (r == pid) break;
        if (r < 0) throw Error("waitpid failed: " + std::string(std::strerror(errno)));
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &wstatus, 0);
            status.timed_out = true;
            return status;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (WIFEXITED(wstatus)) {
        status.exit_code = WEXITSTATUS(wstatus);
    } else if (WIFSIGNALED(wstatus)) {
        status.signalled = true;
        status.signal = WTERMSIG(wstatus);
    }
    return status;
}

class ScopedWorkDir {
public:
    ScopedWorkDir() {
        static std::atomic<unsigned long> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("comfortopt-eval-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~ScopedWorkDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScopedWorkDir(const ScopedWorkDir&) = delete;
    ScopedWorkDir& operator=(const ScopedWorkDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string describe_vector(const NamedValues& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += values[i].first + "=" + format_full(values[i].second);
    }
    return s + "]";
}

inline std::string strip_ws(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace detail

// Renders the template, runs the evaluator in a fresh temporary directory,
// and extracts the objective from the last `key = <number>` line of the
// output file. Each failure mode is reported as its own BridgeError kind
// with the parameter vector attached.
inline double run_and_extract(const CouplingSpec& spec, const NamedValues& values) {
    spec.validate();

    std::ifstream tpl(spec.template_path);
    if (!tpl) throw Error("cannot open template: " + spec.template_path.string());
    std::ostringstream tpl_buf;
    tpl_buf << tpl.rdbuf();
    const std::string rendered = render_input(tpl_buf.str(), values, spec.error_on_unused_parameter);

    detail::ScopedWorkDir workdir;
    {
        std::ofstream out(workdir.path() / spec.rendered_input_name, std::ios::binary);
        out << rendered;
        if (!out) throw Error("cannot write rendered input in " + workdir.path().string());
    }

    const detail::RunStatus status = detail::run_command(spec.command, workdir.path(), spec.timeout_s);
    const std::string at = " at " + detail::describe_vector(values);
    if (status.timed_out)
        throw BridgeError(BridgeErrorKind::Timeout,
                          "external evaluator timed out after " + format_full(spec.timeout_s) + " s" + at);
    if (status.signalled)
        throw BridgeError(BridgeErrorKind::EvaluatorFailed,
                          "external evaluator killed by signal " + std::to_string(status.signal) + at);
    if (status.exit_code != 0)
        throw BridgeError(BridgeErrorKind::EvaluatorFailed,
                          "external evaluator failed with exit status " + std::to_string(status.exit_code) + at);

    std::ifstream out_file(workdir.path() / spec.output_name);
    if (!out_file)
        throw BridgeError(BridgeErrorKind::KeyNotFound,
                          "evaluator wrote no output file '" + spec.output_name + "'" + at);

    std::optional<std::string> last_value;
    std::string line;
    int lineno = 0, value_line = 0;
    while (std::getline(out_file, line)) {
        ++lineno;
        const std::string s = detail::strip_ws(line);
        if (s.compare(0, spec.objective_key.size(), spec.objective_key) != 0) continue;
        std::size_t p = spec.objective_key.size();
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
        if (p >= s.size() || s[p] != '=') continue;
        last_value = detail::strip_ws(s.substr(p + 1));
        value_line = lineno;
    }
    if (!last_value)
        throw BridgeError(BridgeErrorKind::KeyNotFound,
                          "no line '" + spec.objective_key + " = <number>' in " + spec.output_name + at);

    char* end = nullptr;
    errno = 0;
    const double cost = std::strtod(last_value->c_str(), &end);
    if (errno != 0 || end == last_value->c_str() || *end != '\0' || !std::isfinite(cost))
        throw BridgeError(BridgeErrorKind::BadNumber, "unparsable objective value '" + *last_value + "' (" +
                                                          spec.output_name + ":" + std::to_string(value_line) + ")" + at);
    return cost;
}

// Cost function adapter: the optimizer's vector is zipped with the spec
// names before each external evaluation.
inline CostFunction make_bridge_cost(const CouplingSpec& spec, std::vector<std::string> names) {
    return [spec, names = std::move(names)](const std::vector<double>& x) {
        if (x.size() != names.size()) throw Error("bridge cost: vector length mismatch");
        NamedValues values;
        values.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) values.emplace_back(names[i], x[i]);
        return run_and_extract(spec, values);
    };
}

} // namespace comfortopt
